#pragma once

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "qsynth/circuit.hpp"

namespace qsynth {

using cdouble = std::complex<double>;

/// Exact amplitudes over 2^n basis states. Basis index bit k is qubit k in
/// flat order (register declaration order, little-endian within registers).
struct StateVector {
  std::size_t num_qubits = 0;
  std::vector<cdouble> amps;

  static StateVector zero_state(std::size_t num_qubits);
  static StateVector basis_state(std::size_t num_qubits, std::uint64_t index);

  double norm() const;
  cdouble inner(const StateVector& other) const;

  /// Raw little-endian complex-double dump.
  void dump(const std::string& path) const;
  static StateVector load(const std::string& path, std::size_t num_qubits);
};

struct SimOptions {
  std::size_t qubit_cap = 26;
  bool check_norm = true;
  double norm_tol = 1e-10;
};

/// One measurement outcome branch: the renormalized post-measurement state,
/// its probability, and the classical bits recorded so far.
struct SimBranch {
  StateVector state;
  double probability = 1.0;
  std::map<int, int> bits;
};

/// Runs a measurement-free circuit. Throws if the circuit measures.
StateVector simulate(const Circuit& circuit, StateVector initial,
                     const SimOptions& options = {});

/// Runs any circuit, enumerating every measurement branch exactly.
/// Zero-probability branches are dropped.
std::vector<SimBranch> simulate_branches(const Circuit& circuit,
                                         StateVector initial,
                                         const SimOptions& options = {});

/// Applies `circuit` to `state` in place (no measurements allowed).
void apply_circuit(const Circuit& circuit, StateVector& state,
                   const SimOptions& options = {});

/// Dense unitary of the circuit restricted to `subset` (flat qubit indices),
/// with all other qubits fixed to the bits given in `fixed_bits` and required
/// to return there. Throws with the offending column if amplitude leaks onto
/// other configurations of the fixed qubits.
Eigen::MatrixXcd extract_unitary(const Circuit& circuit,
                                 const std::vector<std::size_t>& subset,
                                 const std::map<std::size_t, int>& fixed_bits,
                                 const SimOptions& options = {});

}  // namespace qsynth
