#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qsynth {

enum class ProblemKind { Chem, Hubbard };

struct LogicalReport {
  ProblemKind kind = ProblemKind::Chem;
  std::size_t N = 0;
  double lambda = 0.0;
  double dE = 0.0;
  std::size_t m = 0;
  std::size_t mu = 0;
  double t_total = 0.0;
  std::size_t ancilla = 0;        // table-form closed expression
  std::size_t ancilla_direct = 0; // m + register/QROM bookkeeping form
  std::size_t total_logical = 0;  // N + ancilla
  double queries_bound = 0.0;     // sqrt(2) pi lambda / dE
  std::uint64_t queries_circuit = 0;
};

/// T = 24 sqrt(2) pi lambda N / dE; ancilla = ceil(log2(4 sqrt(2) pi
/// lambda^3 N^5 / dE^3)).
LogicalReport logical_chem(std::size_t N, double lambda, double dE);

/// lambda = 2Nt + Nu/2; T = sqrt(2) pi lambda (10 N) / dE; table-form
/// ancilla 12 + 3 ceil(log2 N) (the u = 4t, dE = t/100 closed form).
LogicalReport logical_hub(std::size_t N, double t, double u, double dE);

struct PieceBreakdown {
  double compute_ands = 0.0;
  double uncompute_ands = 0.0;
  double naked_cnots = 0.0;
  double subcircuits = 0.0;
};

enum class CircuitFamily { Majorana, Qrom };

/// Plumbing-piece element counts: Majorana_N -> (N-1, N-1, 0.5N, 0.5N);
/// QROM_{3N/2} -> (1.5N-1, 1.5N-1, 0.75N, 0.75N). Fractional counts are
/// expectations over the family.
PieceBreakdown piece_breakdown(CircuitFamily family, std::size_t N);

/// Smallest odd code distance with 2 d (50 p)^((d+1)/2) < target.
int code_distance(double p, double target);

struct SurfaceCodeParams {
  double p = 1e-3;           // physical error rate
  double cycle_ns = 1000.0;  // error-detection round time
  double depth_compute_and = 15.0;
  double depth_uncompute_and = 8.0;
  double depth_cnot = 1.0;
  double depth_majorana_sub = 5.0;
  double depth_qrom_inner = 4.0;
  double factory_period_pp = 6.0;   // plumbing pieces between T states
  double factory_area_pp = 160.0;   // factory footprint in pieces
  // Data-block footprint per logical qubit, in plumbing pieces: a
  // double-defect pair plus one routing lane.
  double pieces_per_logical_qubit = 3.0;
};

struct PhysicalReport {
  int d_data = 0;
  int d_t = 0;
  double data_pieces = 0.0;
  double factory_pieces = 0.0;
  double physical_qubits = 0.0;
  double hours = 0.0;
};

/// Hand-method overhead: serial T production sets the wall clock (6 pieces of
/// factory depth per T state at distance d_t); the footprint is the data
/// block at d_data plus one factory at d_t. Distances give each piece and
/// each T state a < 1% total failure budget.
PhysicalReport physical_overhead(const LogicalReport& logical,
                                 const SurfaceCodeParams& params);

/// Least-squares fit of log(y) = slope * log(x) + intercept.
std::pair<double, double> log_log_fit(
    const std::vector<std::pair<double, double>>& points);

std::string logical_report_csv_header();
std::string logical_report_csv_row(const LogicalReport& r);
std::string physical_report_csv_header();
std::string physical_report_csv_row(const LogicalReport& lr,
                                    const SurfaceCodeParams& params,
                                    const PhysicalReport& pr);

}  // namespace qsynth
