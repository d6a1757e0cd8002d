#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/primitives.hpp"

namespace qsynth {

/// Weights discretized to integers summing to 2^mu * L; entry l is the target
/// numerator of probability l over denominator 2^mu * L.
struct DiscretizedDistribution {
  std::size_t mu = 0;
  std::vector<std::uint64_t> targets;

  std::uint64_t denominator() const {
    return (std::uint64_t{1} << mu) * targets.size();
  }
};

/// keep/alt table realizing a discretized distribution through one uniform
/// index draw, one uniform mu-bit draw, and one comparison. keep values live
/// in [0, 2^mu]; keep == 2^mu always pairs with alt == self.
struct AliasTable {
  std::size_t mu = 0;
  std::vector<std::uint64_t> alt;
  std::vector<std::uint64_t> keep;

  std::size_t size() const { return alt.size(); }
};

/// Bits of keep-precision needed so coefficient rounding stays within the
/// eigenphase error budget.
std::size_t compute_mu(double lambda, double dE, double norm_bound_h);

/// Largest-remainder rounding of weights to integers summing to 2^mu * L.
DiscretizedDistribution discretize(const std::vector<double>& weights,
                                   std::size_t mu);

/// Sequential probability-transfer construction; satisfies, exactly in
/// integers, keep_l + sum_{k: alt_k = l} (2^mu - keep_k) = targets_l.
AliasTable build_alias_table(const DiscretizedDistribution& dist);

/// Audit check of the identity above.
bool alias_table_consistent(const AliasTable& table,
                            const DiscretizedDistribution& dist);

/// CSV export: header then one "l,target,keep,alt" row per index.
std::string alias_table_csv(const AliasTable& table,
                            const DiscretizedDistribution& dist);

/// Register names used by a SUBPREPARE fragment.
struct SubprepareLayout {
  std::string index_reg = "sel";
  std::string alt_reg = "alt";
  std::string keep_reg = "keep";
  std::string sigma_reg = "sigma";
  std::string less_reg = "less";
  std::string data_reg = "data";          // per-final-index extra bits
  std::string data_alt_reg = "data_alt";  // alt-side slot, garbage after swap
  std::string anc_reg = "anc";
};

/// Builds the coherent alias-sampling state preparation on an existing
/// circuit: uniform over indices, QROM load of (alt, keep, extra data for
/// both the kept and the alternate index), uniform sigma, comparator
/// keep <= sigma into `less`, then a controlled swap of index and alt
/// registers. The data slots swap together with the index so `data_reg`
/// always describes the index actually drawn. `extra` may be empty.
void build_subprepare(Circuit& c, AncillaPool& pool, const AliasTable& table,
                      const SelectionSpec& index_values, const QromData& extra,
                      const SubprepareLayout& layout);

/// Convenience: fresh circuit with the standard layout over index range
/// [0, L); returns the circuit (ancilla register sized to fit).
Circuit make_subprepare_circuit(const AliasTable& table, const QromData& extra,
                                SubprepareLayout layout = {});

}  // namespace qsynth
