#include "qsynth/phase_est.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "qsynth/state_prep.hpp"

namespace qsynth {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::size_t pea_bits(double lambda, double dE) {
  if (!(dE > 0.0 && dE <= lambda)) {
    throw std::invalid_argument("need 0 < dE <= lambda");
  }
  const double x = std::log2(std::sqrt(2.0) * kPi * lambda / (2.0 * dE));
  const double m = std::ceil(x);
  return m < 1.0 ? 1 : static_cast<std::size_t>(m);
}

double coefficient_tolerance(double dE, double lambda, std::size_t L,
                             double norm_bound_h) {
  if (!(norm_bound_h >= 0.0 && norm_bound_h < lambda)) {
    throw std::invalid_argument("need 0 <= |H| < lambda");
  }
  if (L == 0) throw std::invalid_argument("need L >= 1");
  const double r = norm_bound_h / lambda;
  return std::sqrt(2.0) * dE /
         (4.0 * static_cast<double>(L) *
          (1.0 + dE * dE / (8.0 * lambda * lambda))) *
         (1.0 - r * r);
}

ErrorBudget make_error_budget(double lambda, double dE, std::size_t L,
                              double norm_bound_h) {
  ErrorBudget b;
  b.lambda = lambda;
  b.dE = dE;
  b.m = pea_bits(lambda, dE);
  b.mu = compute_mu(lambda, dE, norm_bound_h);
  b.delta = coefficient_tolerance(dE, lambda, L, norm_bound_h);
  b.eps_prep = std::sqrt(2.0) * dE / (4.0 * lambda);
  b.eps_qft = std::sqrt(2.0) * dE / (4.0 * kPi * lambda);
  b.queries_bound = std::sqrt(2.0) * kPi * lambda / dE;
  b.queries_circuit = std::uint64_t{1} << b.m;
  return b;
}

std::string budget_json(const ErrorBudget& b) {
  nlohmann::json j;
  j["lambda"] = b.lambda;
  j["dE"] = b.dE;
  j["m"] = b.m;
  j["mu"] = b.mu;
  j["delta"] = b.delta;
  j["eps_prep"] = b.eps_prep;
  j["eps_qft"] = b.eps_qft;
  j["queries_bound"] = b.queries_bound;
  j["queries_circuit"] = b.queries_circuit;
  return j.dump(2) + "\n";
}

std::vector<double> chi_m_amplitudes(std::size_t m) {
  const std::size_t dim = std::size_t{1} << m;
  const double denom = static_cast<double>(dim) + 1.0;
  std::vector<double> amps(dim);
  for (std::size_t n = 0; n < dim; ++n) {
    amps[n] = std::sqrt(2.0 / denom) *
              std::sin(kPi * static_cast<double>(n + 1) / denom);
  }
  return amps;
}

void append_chi_m(Circuit& c, AncillaPool& pool, const std::string& phase_reg,
                  std::size_t m, const QubitRef& flag, bool deterministic,
                  int measure_bit) {
  if (m < 1) throw std::invalid_argument("chi_m needs m >= 1");
  const double denom = static_cast<double>(std::size_t{1} << m) + 1.0;

  auto emit_a = [&](bool forward) {
    // Hadamards, the controlled-phase ladder, one extra rotation, Hadamard on
    // the flag. The inverse reverses the order with negated angles.
    std::vector<Gate> gates;
    for (std::size_t k = 0; k < m; ++k) {
      gates.push_back(make_gate(GateKind::H, {{phase_reg, k}}));
    }
    gates.push_back(make_gate(GateKind::H, {flag}));
    for (std::size_t k = 0; k < m; ++k) {
      const double angle =
          -2.0 * kPi * static_cast<double>(std::size_t{1} << k) / denom;
      gates.push_back(make_rotation(GateKind::RotZ, angle, flag,
                                    {ControlSpec{{phase_reg, k}, true}}));
    }
    gates.push_back(make_rotation(GateKind::RotZ, -2.0 * kPi / denom, flag));
    gates.push_back(make_gate(GateKind::H, {flag}));
    if (forward) {
      for (const auto& g : gates) c.append(g);
    } else {
      for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::RotZ) g.angle = -g.angle;
        c.append(g);
      }
    }
  };

  emit_a(true);
  if (!deterministic) {
    c.append(make_measure(flag, measure_bit));
    return;
  }

  // One exact amplitude-amplification round onto flag = |1>, then clear it.
  const double dim = static_cast<double>(std::size_t{1} << m);
  const double p = (1.0 + 1.0 / dim) / 2.0;
  const double phi = std::atan2(std::sqrt(4.0 * p - 1.0), 2.0 * p - 1.0);

  emit_phase_gate(c, pool, phi, flag);  // S_g on the flag
  emit_a(false);
  {
    std::vector<ControlSpec> zeros;
    for (std::size_t k = 0; k < m; ++k) zeros.push_back({{phase_reg, k}, false});
    zeros.push_back({flag, false});
    AndChain chain = emit_and_chain(c, pool, zeros);
    emit_phase_gate(c, pool, phi, chain.indicator);  // S_0
    uncompute_and_chain(c, pool, chain);
  }
  emit_a(true);
  c.append(make_gate(GateKind::X, {flag}));
}

Circuit build_chi_m(std::size_t m, bool deterministic) {
  const std::size_t pool_size = m + 3;
  Circuit c({{"phase", m}, {"flag", 1}, {"anc", pool_size}});
  AncillaPool pool("anc", pool_size);
  append_chi_m(c, pool, "phase", m, {"flag", 0}, deterministic);
  return c;
}

namespace {

/// Controlled phase diag(1,1,1,e^{i angle}) up to a global phase: one
/// controlled RotZ plus a bare RotZ on the control.
void emit_cphase(std::vector<Gate>& gates, const QubitRef& control,
                 const QubitRef& target, double angle) {
  gates.push_back(make_rotation(GateKind::RotZ, angle, target,
                                {ControlSpec{control, true}}));
  gates.push_back(make_rotation(GateKind::RotZ, angle / 2.0, control));
}

std::vector<Gate> forward_qft_gates(const std::vector<QubitRef>& qubits) {
  const std::size_t m = qubits.size();
  std::vector<Gate> gates;
  for (std::size_t i = m; i-- > 0;) {
    gates.push_back(make_gate(GateKind::H, {qubits[i]}));
    for (std::size_t l = i; l-- > 0;) {
      const double angle =
          2.0 * kPi / static_cast<double>(std::size_t{1} << (i - l + 1));
      emit_cphase(gates, qubits[l], qubits[i], angle);
    }
  }
  for (std::size_t i = 0; i < m / 2; ++i) {
    gates.push_back(make_gate(GateKind::Swap, {qubits[i], qubits[m - 1 - i]}));
  }
  return gates;
}

}  // namespace

void append_inverse_qft(Circuit& c, const std::vector<QubitRef>& qubits) {
  std::vector<Gate> fwd = forward_qft_gates(qubits);
  for (auto it = fwd.rbegin(); it != fwd.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::RotZ) g.angle = -g.angle;
    c.append(g);
  }
}

PeaSchedule build_pea_schedule(const WalkSpec& spec, std::size_t m) {
  if (m < 1) throw std::invalid_argument("schedule needs m >= 1");
  PeaSchedule sched;

  std::vector<std::pair<std::string, std::size_t>> regs;
  regs.emplace_back("phase", m);
  regs.emplace_back("flag", 1);
  for (auto r : spec.registers) {
    // The chi_m reflection chains over the phase register; make sure the
    // shared ancilla pool is wide enough for them too.
    if (r.first == spec.ancilla_register) {
      r.second = std::max(r.second, m + 2);
    }
    regs.push_back(r);
  }
  Circuit c(regs);
  const std::string anc = spec.ancilla_register;
  AncillaPool pool(anc, c.register_size(anc));

  // Resource state.
  append_chi_m(c, pool, "phase", m, {"flag", 0}, /*deterministic=*/true);

  // Disambiguation walk, zero-controlled on the ctl register: H - X
  // conjugation turns the on-control into an open control and leaves the
  // ctl qubit holding the cos(phi) parity information.
  QubitRef ctl{spec.control_register, 0};
  c.append(make_gate(GateKind::H, {ctl}));
  c.append(make_gate(GateKind::X, {ctl}));
  WalkStats extra = append_walk(c, pool, spec, WalkMode::Controlled, 1);
  c.append(make_gate(GateKind::X, {ctl}));
  c.append(make_gate(GateKind::H, {ctl}));
  sched.select_count += extra.select_count;
  sched.reflection_count += extra.reflection_count;

  // Controlled-reflection sandwiches: phase bit k swaps W^(2^k) for its
  // adjoint.
  for (std::size_t k = 0; k < m; ++k) {
    std::vector<Gate> saved;  // patch the sandwich control onto phase bit k
    Circuit unit = spec.layout_circuit();
    AncillaPool unit_pool(anc, unit.register_size(anc));
    WalkStats st = append_walk(unit, unit_pool, spec,
                               WalkMode::DirectionControlled,
                               std::size_t{1} << k);
    sched.select_count += st.select_count;
    sched.reflection_count += st.reflection_count;
    for (Gate g : unit.gates()) {
      // Redirect the walk's ctl register to phase bit k.
      for (auto& t : g.targets) {
        if (t.reg == spec.control_register) t = {"phase", k};
      }
      for (auto& cs : g.controls) {
        if (cs.qubit.reg == spec.control_register) cs.qubit = {"phase", k};
      }
      c.append(g);
    }
    (void)saved;
  }

  append_inverse_qft(c, register_refs("phase", m));
  sched.circuit = std::move(c);
  return sched;
}

double energy_from_phase(double phi, double lambda) {
  return lambda * std::cos(phi);
}

double phase_estimate_from_outcome(std::uint64_t outcome, std::size_t m) {
  const double dim = static_cast<double>(std::uint64_t{1} << m);
  double phi = -2.0 * kPi * static_cast<double>(outcome) / dim / 2.0;
  phi = std::fmod(phi, kPi);
  if (phi < 0.0) phi += kPi;
  return phi;
}

}  // namespace qsynth
