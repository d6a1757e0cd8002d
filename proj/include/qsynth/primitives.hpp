#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"

namespace qsynth {

/// Stack allocator over a dedicated ancilla register. Builders borrow qubits
/// and must return them in reverse order; `high_water` reports the peak so
/// callers can size the register.
class AncillaPool {
 public:
  AncillaPool(std::string reg_name, std::size_t size)
      : reg_(std::move(reg_name)), size_(size) {}

  QubitRef alloc();
  void release(const QubitRef& ref);
  std::size_t high_water() const { return high_water_; }
  std::size_t in_use() const { return top_; }
  const std::string& reg() const { return reg_; }

 private:
  std::string reg_;
  std::size_t size_;
  std::size_t top_ = 0;
  std::size_t high_water_ = 0;
};

/// Selection register description for indexed builders: which qubits hold the
/// index (offset 0 = least significant) and which values can occur. Values
/// must be sorted, distinct, and representable in the given qubits.
struct SelectionSpec {
  std::vector<QubitRef> qubits;
  std::vector<std::uint64_t> values;

  /// Contiguous index range [0, count).
  static SelectionSpec range(const std::string& reg, std::size_t width,
                             std::uint64_t count);
};

/// Called once per selection value with an indicator qubit that is |1> exactly
/// when the selection register holds that value (and the external control, if
/// any, is satisfied).
using LeafEmitter =
    std::function<void(Circuit&, std::uint64_t value, const QubitRef& indicator)>;

/// Unary iteration over the selection values. With a control the circuit uses
/// exactly L-1 AND pairs (T-count 4L-4) and ceil(log2 L) ancillae; without
/// one, the top selection bit stands in for the root indicator, saving one
/// AND pair. The register must never hold a value outside `sel.values`.
void build_unary_iteration(Circuit& c, AncillaPool& pool,
                           const SelectionSpec& sel,
                           const std::optional<ControlSpec>& control,
                           const LeafEmitter& body);

/// Indexed single-qubit Pauli: applies `kind` to system qubit `value` when the
/// selection register holds `value`.
void build_indexed_pauli(Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
                         const std::string& system_reg, GateKind kind,
                         const std::optional<ControlSpec>& control);

/// Ranged operation: applies G to system qubits 0..l-1 when the selection
/// register holds l. The accumulator ancilla is cleared before release.
void build_ranged_op(Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
                     const std::string& system_reg, GateKind kind,
                     const std::optional<ControlSpec>& control);

/// Selected Majorana operator: applies Y_l Z_{l-1} ... Z_0 to the system for
/// selection value l, in one sweep (T-count 4L-4 with a control).
void build_majorana_selector(Circuit& c, AncillaPool& pool,
                             const SelectionSpec& sel,
                             const std::string& system_reg,
                             const std::optional<ControlSpec>& control);

/// Like build_majorana_selector but lets the caller remap selection values to
/// system qubit indices (used when the packed register encoding is sparse)
/// and choose the endpoint Pauli (Y for the standard Majorana, X for its
/// partner). `target_of` must be monotone over the selection values and cover
/// 0..max contiguously so the Z string sweeps correctly.
void build_majorana_selector_mapped(
    Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
    const std::string& system_reg,
    const std::function<std::size_t(std::uint64_t)>& target_of,
    GateKind end_kind, const std::optional<ControlSpec>& control);

struct QromData {
  std::vector<std::uint64_t> words;
  std::size_t word_length = 0;
};

/// Classical table lookup |l>|0> -> |l>|d_l>. T-count 4L-4 (controlled),
/// independent of word length; ancilla usage ceil(log2 L).
void build_qrom(Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
                const QromData& data, const std::string& out_reg,
                const std::optional<ControlSpec>& control);

/// Prepares (1/sqrt(L)) sum_{l<L} |l> over `qubits` (offset 0 = LSB) via
/// Hadamards when L is a power of two, otherwise with one exact
/// amplitude-amplification round. With a control the circuit is the identity
/// when the control fails.
void build_uniform(Circuit& c, AncillaPool& pool,
                   const std::vector<QubitRef>& qubits, std::uint64_t count,
                   const std::optional<ControlSpec>& control);

/// Phase e^{i*angle} on |1> of `target`, exactly diag(1, e^{i angle}): RotZ on
/// the target plus a compensating rotation on a clean pool qubit.
void emit_phase_gate(Circuit& c, AncillaPool& pool, double angle,
                     const QubitRef& target);

/// Controlled Hadamard, exact over Clifford+T (2 T gates).
void emit_controlled_h(Circuit& c, const ControlSpec& control,
                       const QubitRef& target);

/// Multiplies the whole state by e^{i*angle} using a clean ancilla.
void emit_global_phase(Circuit& c, AncillaPool& pool, double angle);

/// Computes AND of the given literals into a fresh pool qubit via a chain of
/// AND gadgets; returns the indicator and the chain for later uncomputation.
struct AndChain {
  QubitRef indicator;
  std::vector<Gate> gates;              // as emitted
  std::vector<QubitRef> chain_ancillas; // in allocation order
};
AndChain emit_and_chain(Circuit& c, AncillaPool& pool,
                        const std::vector<ControlSpec>& literals);
void uncompute_and_chain(Circuit& c, AncillaPool& pool, const AndChain& chain);

/// Comparator: flips `flag` when a < b (two equal-width registers, LSB first).
/// Borrow ancillae are uncomputed; T-count 4 per bit.
void emit_less_than(Circuit& c, AncillaPool& pool,
                    const std::vector<QubitRef>& a,
                    const std::vector<QubitRef>& b, const QubitRef& flag);

/// Comparator against a classical constant: flips `flag` when reg < value.
void emit_less_than_const(Circuit& c, AncillaPool& pool,
                          const std::vector<QubitRef>& reg, std::uint64_t value,
                          const QubitRef& flag);

/// Controlled bitwise swap of two equal-width registers (one AND per bit).
void emit_controlled_swap(Circuit& c, AncillaPool& pool,
                          const ControlSpec& control,
                          const std::vector<QubitRef>& a,
                          const std::vector<QubitRef>& b);

/// In-place modular adder: a += b (mod 2^width). Registers are equal width.
void emit_add_mod_pow2(Circuit& c, AncillaPool& pool,
                       const std::vector<QubitRef>& target,
                       const std::vector<QubitRef>& addend);

/// Controlled +1 / -1 (mod 2^width) on `reg`.
void emit_controlled_increment(Circuit& c, AncillaPool& pool,
                               const std::vector<QubitRef>& reg, int direction,
                               const ControlSpec& control);

std::vector<QubitRef> register_refs(const std::string& reg, std::size_t width);

}  // namespace qsynth
