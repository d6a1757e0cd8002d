#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsynth/circuit.hpp"
#include "qsynth/oracles.hpp"

namespace qsynth {

/// Error split for a full phase-estimation run.
struct ErrorBudget {
  double lambda = 0.0;
  double dE = 0.0;
  std::size_t m = 0;
  std::size_t mu = 0;
  double delta = 0.0;
  double eps_prep = 0.0;
  double eps_qft = 0.0;
  double queries_bound = 0.0;       // sqrt(2) pi lambda / dE
  std::uint64_t queries_circuit = 0;  // 2^m
};

/// m = ceil(log2(sqrt(2) pi lambda / (2 dE))).
std::size_t pea_bits(double lambda, double dE);

/// Per-coefficient tolerance delta keeping the eigenphase shift within the
/// budget: sqrt(2) dE / (4L (1 + dE^2/(8 lambda^2))) * (1 - |H|^2/lambda^2).
double coefficient_tolerance(double dE, double lambda, std::size_t L,
                             double norm_bound_h);

ErrorBudget make_error_budget(double lambda, double dE, std::size_t L,
                              double norm_bound_h);
std::string budget_json(const ErrorBudget& budget);

/// Reference amplitudes sqrt(2/(2^m+1)) sin(pi (n+1)/(2^m+1)).
std::vector<double> chi_m_amplitudes(std::size_t m);

/// Resource-state preparation on registers phase[m], flag[1], anc[...].
/// Deterministic version appends one exact amplitude-amplification round and
/// clears the flag; otherwise the flag is measured (classical bit 0,
/// outcome 1 = success with probability (1 + 2^-m)/2).
Circuit build_chi_m(std::size_t m, bool deterministic = true);
void append_chi_m(Circuit& c, AncillaPool& pool, const std::string& phase_reg,
                  std::size_t m, const QubitRef& flag, bool deterministic,
                  int measure_bit = 0);

/// Coherent inverse QFT (with final bit-reversal swaps) on `qubits`, matching
/// QFT |n> = 2^{-m/2} sum_k e^{2 pi i n k / 2^m} |k>.
void append_inverse_qft(Circuit& c, const std::vector<QubitRef>& qubits);

struct PeaSchedule {
  Circuit circuit;
  std::size_t select_count = 0;
  std::size_t reflection_count = 0;
  std::string phase_register = "phase";
};

/// Heisenberg-limited schedule: chi_m on the phase register, one walk
/// zero-controlled on the ctl register, then for each phase bit k a
/// controlled-reflection sandwich around W^(2^k), and a coherent inverse QFT.
/// The walk registers are taken from `spec`; phase/chi ancillas are added.
PeaSchedule build_pea_schedule(const WalkSpec& spec, std::size_t m);

/// E = lambda cos(phi). Eigenphases come in +/- pairs with equal energy.
double energy_from_phase(double phi, double lambda);

/// Folds a measured QFT outcome j into a phase estimate in [0, pi).
double phase_estimate_from_outcome(std::uint64_t outcome, std::size_t m);

}  // namespace qsynth
