#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsynth {

/// Reference to a single qubit as (register name, offset within register).
struct QubitRef {
  std::string reg;
  std::size_t offset = 0;

  bool operator==(const QubitRef& other) const {
    return reg == other.reg && offset == other.offset;
  }
};

enum class GateKind {
  X,
  Y,
  Z,
  H,
  S,
  Sdg,
  T,
  Tdg,
  CNOT,
  CZ,
  Swap,
  Toffoli,
  AndCompute,
  AndUncompute,
  RotZ,
  RotY,
  Measure,
};

const char* gate_kind_name(GateKind kind);
GateKind gate_kind_from_name(const std::string& name);

/// A control input with polarity. `on == true` means the gate fires when the
/// qubit is |1>, `on == false` when it is |0>.
struct ControlSpec {
  QubitRef qubit;
  bool on = true;
};

/// One gate in a circuit. Measure writes `classical_bit`; a gate with
/// `condition_bit >= 0` is classically controlled on that bit being 1.
struct Gate {
  GateKind kind = GateKind::X;
  std::vector<QubitRef> targets;
  std::vector<ControlSpec> controls;
  double angle = 0.0;      // RotY / RotZ only
  int classical_bit = -1;  // Measure result id
  int condition_bit = -1;  // classical control, -1 = none
};

Gate make_gate(GateKind kind, std::vector<QubitRef> targets,
               std::vector<ControlSpec> controls = {});
Gate make_rotation(GateKind kind, double angle, QubitRef target,
                   std::vector<ControlSpec> controls = {});
Gate make_measure(QubitRef target, int classical_bit);

/// T-gate accounting policy. Rotations and bare Toffolis are priced only when
/// a total is requested; the circuit ledger keeps them in separate counters.
struct CostModel {
  std::function<std::int64_t(double)> t_per_rotation = default_t_per_rotation;
  std::int64_t toffoli_t_cost = 4;

  /// ceil(1.15 * log2(1/eps)) + 9, a standard repeat-until-success budget.
  static std::int64_t default_t_per_rotation(double eps_synth);
};

/// Gate-level Clifford+T circuit over named quantum registers with an exact
/// cost ledger. Qubits are flattened in register declaration order; integer
/// registers are little-endian (offset 0 is the least significant bit).
class Circuit {
 public:
  Circuit() = default;

  /// Registers are declared up front as (name, size) pairs.
  explicit Circuit(const std::vector<std::pair<std::string, std::size_t>>& registers);

  void add_register(const std::string& name, std::size_t size);
  bool has_register(const std::string& name) const;
  std::size_t register_size(const std::string& name) const;
  const std::vector<std::pair<std::string, std::size_t>>& registers() const {
    return registers_;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t flat_index(const QubitRef& ref) const;

  void append(const Gate& gate);
  const std::vector<Gate>& gates() const { return gates_; }

  std::int64_t t_count() const { return t_count_; }
  std::int64_t and_count() const { return and_count_; }
  std::int64_t rotation_count() const { return rotation_count_; }
  std::int64_t toffoli_count() const { return toffoli_count_; }
  std::int64_t measure_count() const { return measure_count_; }
  std::size_t peak_ancilla() const { return peak_and_live_; }
  int num_classical_bits() const { return num_classical_bits_; }

  /// Recomputes the T ledger from the gate list (for ledger audits).
  std::int64_t recount_t() const;

  /// Adjoint circuit: reversed gate order, each gate inverted. AndCompute and
  /// AndUncompute swap roles. Throws if the circuit contains measurements.
  Circuit inverted() const;

  /// Deterministic line format; round-trips through parse().
  std::string serialize() const;
  static Circuit parse(const std::string& text);

 private:
  void validate(const Gate& gate) const;

  std::vector<std::pair<std::string, std::size_t>> registers_;
  std::vector<Gate> gates_;
  std::size_t num_qubits_ = 0;
  std::int64_t t_count_ = 0;
  std::int64_t and_count_ = 0;
  std::int64_t rotation_count_ = 0;
  std::int64_t toffoli_count_ = 0;
  std::int64_t measure_count_ = 0;
  int num_classical_bits_ = 0;
  std::size_t live_and_ = 0;
  std::size_t peak_and_live_ = 0;
  std::vector<bool> and_live_flags_;
};

/// Ledger T-count plus synthesis cost of rotations and bare Toffolis.
std::int64_t total_t_count(const Circuit& circuit, const CostModel& model,
                           double eps_synth);

}  // namespace qsynth
