#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsynth {

/// Plane-wave-dual electronic structure model: M grid points per axis in D
/// dimensions, cell volume omega (Bohr^3), optional nuclei (position, charge).
/// Spin is explicit, so N = 2 M^D spin-orbitals.
struct DualBasisSpec {
  std::size_t M = 2;
  std::size_t D = 3;
  double omega = 1.0;
  std::vector<std::pair<std::array<double, 3>, double>> nuclei;

  std::size_t spatial_count() const;
  std::size_t num_spin_orbitals() const { return 2 * spatial_count(); }
};

/// Planar periodic Hubbard model on an M x M lattice, N = 2 M^2.
struct HubbardSpec {
  std::size_t M = 2;
  double t = 1.0;
  double u = 4.0;

  std::size_t num_spin_orbitals() const { return 2 * M * M; }
};

/// Half-filling Wigner-Seitz sizing: omega = (4 pi / 3) * (N/2) * rs^3.
double wigner_seitz_omega(std::size_t num_spin_orbitals, double rs);

/// Kinetic/potential/interaction coefficient tables on the periodic grid,
/// indexed by flat spatial index (component-major, stride M).
struct DualBasisCoefficients {
  std::size_t M = 0;
  std::size_t D = 0;
  std::vector<double> kinetic;      // T(p)
  std::vector<double> external;     // U(p)
  std::vector<double> interaction;  // V(p)
};

DualBasisCoefficients dual_basis_coefficients(const DualBasisSpec& spec);

/// f(p, sigma) = sigma * M^D + sum_j p_j M^j.
std::size_t spin_orbital_index(const std::vector<std::size_t>& p, int sigma,
                               std::size_t M, std::size_t D);

/// One linear-combination-of-unitaries term: non-negative weight, explicit
/// sign, and a sparse Pauli string (qubit, 'X'|'Y'|'Z'). An empty string is
/// the identity.
struct LcuTerm {
  double weight = 0.0;
  int sign = 1;
  std::vector<std::pair<std::size_t, char>> paulis;
};

struct LcuHamiltonian {
  std::size_t num_qubits = 0;
  std::vector<LcuTerm> terms;
  double lambda = 0.0;        // exact sum of term weights
  double norm_bound = 0.0;    // upper bound on ||H||, < lambda
  double energy_offset = 0.0; // identity part kept outside the term list
};

/// Jordan-Wigner LCU terms of the electronic-structure Hamiltonian. The
/// identity part is reported in energy_offset and excluded from lambda.
LcuHamiltonian jw_terms(const DualBasisCoefficients& coeffs);

/// Hubbard LCU terms. The constant uN/8 rides along as an explicit identity
/// term so that lambda = 2Nt + Nu/2 holds exactly and the walk encodes the
/// full Hamiltonian.
LcuHamiltonian hubbard_terms(const HubbardSpec& spec);

/// Recomputes the norm bound: exact spectral norm for <= `dense_cap` qubits,
/// otherwise fraction * lambda.
void set_norm_bound(LcuHamiltonian& lcu, std::size_t dense_cap = 8,
                    double fraction = 0.9);

/// Dense matrix of the terms (plus energy_offset when requested).
Eigen::MatrixXcd lcu_dense_matrix(const LcuHamiltonian& lcu,
                                  bool include_offset = false);

/// Dense Pauli-string helper for verification oracles.
Eigen::MatrixXcd pauli_string_matrix(
    std::size_t num_qubits, const std::vector<std::pair<std::size_t, char>>& ps);

/// Directed-edge list of the periodic M x M lattice (four increments per
/// site; wraparound multi-edges at M = 2 are kept).
std::vector<std::pair<std::size_t, std::size_t>> hubbard_directed_edges(
    std::size_t M);

/// Parsed model configuration (key = value lines, '#' comments, optional
/// [section] headers; JSON when the text starts with '{').
struct ModelConfig {
  std::string model;  // "chem" or "hubbard"
  std::size_t M = 2;
  std::size_t D = 3;
  double t = 1.0;
  double u = 4.0;
  double rs = 0.0;
  double omega = 0.0;
  std::vector<std::pair<std::array<double, 3>, double>> nuclei;
  double dE = 0.0016;
  double eps_synth = 1e-10;
  double p_phys = 1e-3;
  std::uint64_t seed = 0;

  DualBasisSpec dual_basis_spec() const;
  HubbardSpec hubbard_spec() const;
};

ModelConfig parse_model_config(const std::string& text);

}  // namespace qsynth
