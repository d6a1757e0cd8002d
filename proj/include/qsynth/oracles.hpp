#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/models.hpp"
#include "qsynth/primitives.hpp"
#include "qsynth/state_prep.hpp"

namespace qsynth {

/// A walk operator bundle: SELECT and PREPARE gate sequences over one shared
/// register layout, the registers the reflection acts on, and lambda.
/// `select_gates` is exact including phases; `cselect_gates` is the same
/// oracle conditioned on the `ctl` register.
struct WalkSpec {
  std::vector<std::pair<std::string, std::size_t>> registers;
  std::vector<Gate> select_gates;
  std::vector<Gate> cselect_gates;
  std::vector<Gate> prepare_gates;
  std::vector<std::string> selection_registers;  // R_L support (incl. garbage)
  std::vector<std::string> garbage_registers;
  std::string control_register = "ctl";
  std::string system_register = "sys";
  std::string ancilla_register = "anc";
  double lambda = 0.0;

  Circuit layout_circuit() const { return Circuit(registers); }
  std::vector<QubitRef> selection_qubits(const Circuit& c) const;
};

enum class WalkMode { Plain, Controlled, DirectionControlled };

/// Reflection 2|0><0| - 1 on `qubits` (phase -1 off the all-zeros state).
/// With a control the phase applies only when the control is satisfied.
/// T-count 4 (n-1) via an AND ladder.
void build_reflection(Circuit& c, AncillaPool& pool,
                      const std::vector<QubitRef>& qubits,
                      const std::optional<ControlSpec>& control);

/// Appends W = R_L * SELECT. Plain applies select then the reflection about
/// the prepared state; Controlled conditions both on the ctl register;
/// DirectionControlled wraps `power` plain walks in controlled reflections,
/// giving W^power or (W^dagger)^power depending on the control.
struct WalkStats {
  std::size_t select_count = 0;
  std::size_t reflection_count = 0;
};
WalkStats append_walk(Circuit& c, AncillaPool& pool, const WalkSpec& spec,
                      WalkMode mode, std::size_t power = 1);
Circuit build_walk(const WalkSpec& spec, WalkMode mode, std::size_t power = 1);

/// Generic gate-level walk for a toy LCU: PREPARE via an exact rotation tree
/// over ceil(log2 L) selection qubits, SELECT via unary iteration applying
/// each signed Pauli string. Intended for verification at small sizes.
WalkSpec build_toy_walk(const LcuHamiltonian& lcu);

// ---------------------------------------------------------------------------
// Electronic structure oracles.
// ---------------------------------------------------------------------------

/// Register layout and classical data behind the chemistry PREPARE/SELECT
/// pair. The flat subprepare index is [d bits | V | U] (block-major: T = 0,
/// V = 1, U = 2), so the two block bits double as the U/V case flags.
struct ChemOracle {
  WalkSpec walk;
  std::size_t N = 0;
  std::size_t M = 0;
  std::size_t D = 0;
  std::size_t mu = 0;
  DiscretizedDistribution dist;  // over the 3 * M^D flat indices
  AliasTable table;
  std::vector<int> theta_bits;   // sign bit per flat index
  LcuHamiltonian encoded;        // terms with the mu-discretized weights
  LcuHamiltonian exact;          // terms with the exact coefficients
};

/// SELECT_chem fragment over an existing layout (see ChemOracle for register
/// names). Exposed for T-count studies at sizes where PREPARE would not fit.
struct SelectChemLayout {
  std::string ctl = "ctl";
  std::string theta = "theta";
  std::string u = "u";
  std::string v = "v";
  std::string p = "p";
  std::string alpha = "alpha";
  std::string q = "q";
  std::string beta = "beta";
  std::string sys = "sys";
  std::string anc = "anc";
};
void build_select_chem(Circuit& c, AncillaPool& pool, std::size_t n_spatial,
                       const SelectChemLayout& layout, bool controlled);
Circuit select_chem_circuit(std::size_t N, bool controlled);

/// Full chemistry oracle pair for M^D a power of two (PREPARE requires
/// bit-aligned block indexing); mu from compute_mu unless overridden. The
/// ancilla register can be sized explicitly (e.g. minimal for simulation).
ChemOracle build_chem_oracle(const DualBasisCoefficients& coeffs, double dE,
                             std::optional<std::size_t> mu_override = {},
                             std::optional<std::size_t> anc_override = {});

// ---------------------------------------------------------------------------
// Hubbard oracles.
// ---------------------------------------------------------------------------

struct SelectHubLayout {
  std::string ctl = "ctl";
  std::string u = "u";
  std::string v = "v";
  std::string p = "p";
  std::string alpha = "alpha";
  std::string q = "q";
  std::string beta = "beta";
  std::string sys = "sys";
  std::string anc = "anc";
};
void build_select_hub(Circuit& c, AncillaPool& pool, std::size_t M,
                      const SelectHubLayout& layout, bool controlled);
Circuit select_hub_circuit(std::size_t N, bool controlled);

struct HubOracle {
  WalkSpec walk;
  std::size_t N = 0;
  std::size_t M = 0;
  LcuHamiltonian lcu;
};

/// Hubbard oracle pair for M a power of two. PREPARE parks weight u/(4 lambda)
/// per site on (U and V) indices, which SELECT maps to the identity, so the
/// walk encodes the full Hamiltonian with lambda = 2Nt + Nu/2.
HubOracle build_hub_oracle(const HubbardSpec& spec);

/// Frozen ledger T-counts of the controlled select circuits, used as
/// regression anchors. Computed once from the implementation.
std::int64_t select_chem_t_count(std::size_t N);
std::int64_t select_hub_t_count(std::size_t N);

}  // namespace qsynth
