#include "qsynth/resources.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qsynth {

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

std::size_t ceil_log2_int(std::size_t v) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < v) ++b;
  return b;
}

}  // namespace

LogicalReport logical_chem(std::size_t N, double lambda, double dE) {
  if (!(dE > 0.0)) throw std::invalid_argument("dE must be positive");
  LogicalReport r;
  r.kind = ProblemKind::Chem;
  r.N = N;
  r.lambda = lambda;
  r.dE = dE;
  const double n = static_cast<double>(N);
  r.t_total = 24.0 * kSqrt2 * kPi * lambda * n / dE;
  const double anc_log =
      std::log2(4.0 * kSqrt2 * kPi * lambda * lambda * lambda * n * n * n * n *
                n / (dE * dE * dE));
  r.ancilla = static_cast<std::size_t>(std::ceil(anc_log));
  const double m_exact = std::log2(kSqrt2 * kPi * lambda / (2.0 * dE));
  r.m = static_cast<std::size_t>(std::ceil(m_exact));
  const double mu_exact = std::log2(2.0 * kSqrt2 * lambda / dE);
  r.mu = static_cast<std::size_t>(std::ceil(mu_exact));
  r.ancilla_direct = r.m + 2 * r.mu + 5 * ceil_log2_int(N);
  r.total_logical = N + r.ancilla;
  r.queries_bound = kSqrt2 * kPi * lambda / dE;
  r.queries_circuit = std::uint64_t{1} << r.m;
  return r;
}

LogicalReport logical_hub(std::size_t N, double t, double u, double dE) {
  if (!(dE > 0.0)) throw std::invalid_argument("dE must be positive");
  LogicalReport r;
  r.kind = ProblemKind::Hubbard;
  r.N = N;
  r.dE = dE;
  const double n = static_cast<double>(N);
  r.lambda = 2.0 * n * t + n * u / 2.0;
  r.t_total = kSqrt2 * kPi * r.lambda * (10.0 * n) / dE;
  r.ancilla = 12 + 3 * ceil_log2_int(N);
  const double m_exact = std::log2(kSqrt2 * kPi * r.lambda / (2.0 * dE));
  r.m = static_cast<std::size_t>(std::ceil(m_exact));
  r.mu = 0;  // no QROM coefficient table in the Hubbard circuits
  r.ancilla_direct = r.m + 3 * ceil_log2_int(N);
  r.total_logical = N + r.ancilla;
  r.queries_bound = kSqrt2 * kPi * r.lambda / dE;
  r.queries_circuit = std::uint64_t{1} << r.m;
  return r;
}

PieceBreakdown piece_breakdown(CircuitFamily family, std::size_t N) {
  if (N == 0) throw std::invalid_argument("piece breakdown needs N >= 1");
  const double n = static_cast<double>(N);
  PieceBreakdown b;
  switch (family) {
    case CircuitFamily::Majorana:
      b.compute_ands = n - 1.0;
      b.uncompute_ands = n - 1.0;
      b.naked_cnots = 0.5 * n;
      b.subcircuits = 0.5 * n;
      break;
    case CircuitFamily::Qrom:
      b.compute_ands = 1.5 * n - 1.0;
      b.uncompute_ands = 1.5 * n - 1.0;
      b.naked_cnots = 0.75 * n;
      b.subcircuits = 0.75 * n;
      break;
  }
  return b;
}

int code_distance(double p, double target) {
  if (!(target > 0.0)) throw std::invalid_argument("target must be positive");
  const double x = 50.0 * p;
  if (x >= 1.0) {
    throw std::invalid_argument("error model breaks down at 50p >= 1");
  }
  for (int d = 3; d <= 199; d += 2) {
    const double p_l =
        2.0 * d * std::pow(x, (static_cast<double>(d) + 1.0) / 2.0);
    if (p_l < target) return d;
  }
  throw std::runtime_error("no code distance below 199 meets the target");
}

namespace {

double family_pieces(const PieceBreakdown& b, const SurfaceCodeParams& sc,
                     double subcircuit_depth) {
  return b.compute_ands * sc.depth_compute_and +
         b.uncompute_ands * sc.depth_uncompute_and +
         b.naked_cnots * sc.depth_cnot + b.subcircuits * subcircuit_depth;
}

}  // namespace

PhysicalReport physical_overhead(const LogicalReport& logical,
                                 const SurfaceCodeParams& params) {
  PhysicalReport r;
  const double queries = logical.queries_bound;

  // Piece populations per walk query (Table-style accounting): the chemistry
  // walk applies three size-N Majorana-style sweeps and two QROM lookups of
  // size 3N/2; the Hubbard walk applies two size-N Majoranas and one of size
  // N/2.
  double pieces = 0.0;
  if (logical.kind == ProblemKind::Chem) {
    pieces += 3.0 * queries *
              family_pieces(piece_breakdown(CircuitFamily::Majorana, logical.N),
                            params, params.depth_majorana_sub);
    pieces += 2.0 * queries *
              family_pieces(piece_breakdown(CircuitFamily::Qrom, logical.N),
                            params, params.depth_qrom_inner);
  } else {
    pieces += 2.0 * queries *
              family_pieces(piece_breakdown(CircuitFamily::Majorana, logical.N),
                            params, params.depth_majorana_sub);
    pieces +=
        queries *
        family_pieces(piece_breakdown(CircuitFamily::Majorana, logical.N / 2),
                      params, params.depth_majorana_sub);
  }
  r.data_pieces = pieces;
  r.d_data = code_distance(params.p, 1.0 / (100.0 * pieces));

  const double n_t = logical.t_total;
  r.factory_pieces = params.factory_area_pp * params.factory_period_pp * n_t;
  const double t_target =
      std::min(1.0 / (100.0 * n_t), 1.0 / (100.0 * r.factory_pieces));
  r.d_t = code_distance(params.p, t_target);

  // Serial T production: one T state every factory_period_pp piece-depths.
  const double rounds_per_piece = 5.0 * r.d_t / 4.0;
  const double seconds =
      n_t * params.factory_period_pp * rounds_per_piece * params.cycle_ns * 1e-9;
  r.hours = seconds / 3600.0;

  // Footprint: (5d/4)^2 pieces at two qubits per unit of d.
  const double data_piece_qubits =
      (5.0 * r.d_data / 2.0) * (5.0 * r.d_data / 2.0);
  const double t_piece_qubits = (5.0 * r.d_t / 2.0) * (5.0 * r.d_t / 2.0);
  r.physical_qubits =
      static_cast<double>(logical.total_logical) *
          params.pieces_per_logical_qubit * data_piece_qubits +
      params.factory_area_pp * t_piece_qubits;
  return r;
}

std::pair<double, double> log_log_fit(
    const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) {
    throw std::invalid_argument("fit needs at least 2 points");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  for (const auto& [x, y] : points) {
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  return {slope, intercept};
}

std::string logical_report_csv_header() {
  return "model,N,lambda,dE,m,mu,T_total,ancilla,ancilla_direct,total_logical,"
         "queries_bound,queries_circuit\n";
}

std::string logical_report_csv_row(const LogicalReport& r) {
  std::ostringstream out;
  out << (r.kind == ProblemKind::Chem ? "chem" : "hubbard") << "," << r.N << ","
      << r.lambda << "," << r.dE << "," << r.m << "," << r.mu << ","
      << r.t_total << "," << r.ancilla << "," << r.ancilla_direct << ","
      << r.total_logical << "," << r.queries_bound << "," << r.queries_circuit
      << "\n";
  return out.str();
}

std::string physical_report_csv_header() {
  return "model,N,p,d_data,d_t,data_pieces,physical_qubits,hours\n";
}

std::string physical_report_csv_row(const LogicalReport& lr,
                                    const SurfaceCodeParams& params,
                                    const PhysicalReport& pr) {
  std::ostringstream out;
  out << (lr.kind == ProblemKind::Chem ? "chem" : "hubbard") << "," << lr.N
      << "," << params.p << "," << pr.d_data << "," << pr.d_t << ","
      << pr.data_pieces << "," << pr.physical_qubits << "," << pr.hours << "\n";
  return out.str();
}

}  // namespace qsynth
