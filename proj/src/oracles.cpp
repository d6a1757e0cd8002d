#include "qsynth/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsynth {

namespace {

bool is_pow2(std::size_t v) { return v != 0 && (v & (v - 1)) == 0; }

std::size_t log2_exact(std::size_t v) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < v) ++b;
  if ((std::size_t{1} << b) != v) throw std::invalid_argument("not a power of 2");
  return b;
}

std::size_t ceil_log2(std::size_t v) {
  std::size_t b = 0;
  while ((std::size_t{1} << b) < v) ++b;
  return b;
}

Gate inverted_gate(const Gate& gate) {
  Gate g = gate;
  switch (g.kind) {
    case GateKind::S:
      g.kind = GateKind::Sdg;
      break;
    case GateKind::Sdg:
      g.kind = GateKind::S;
      break;
    case GateKind::T:
      g.kind = GateKind::Tdg;
      break;
    case GateKind::Tdg:
      g.kind = GateKind::T;
      break;
    case GateKind::AndCompute:
      g.kind = GateKind::AndUncompute;
      break;
    case GateKind::AndUncompute:
      g.kind = GateKind::AndCompute;
      break;
    case GateKind::RotZ:
    case GateKind::RotY:
      g.angle = -g.angle;
      break;
    case GateKind::Measure:
      throw std::logic_error("cannot invert a measurement");
    default:
      break;
  }
  return g;
}

void append_gates(Circuit& c, const std::vector<Gate>& gates) {
  for (const auto& g : gates) c.append(g);
}

void append_gates_inverted(Circuit& c, const std::vector<Gate>& gates) {
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    c.append(inverted_gate(*it));
  }
}

/// Multiplies the state by i (when `dagger` is false) or -i, using a clean
/// pool qubit: X S X is diag(i, 1), so it phases |0> by i.
void emit_global_i(Circuit& c, AncillaPool& pool, bool dagger) {
  QubitRef anc = pool.alloc();
  c.append(make_gate(GateKind::X, {anc}));
  c.append(make_gate(dagger ? GateKind::Sdg : GateKind::S, {anc}));
  c.append(make_gate(GateKind::X, {anc}));
  pool.release(anc);
}

}  // namespace

std::vector<QubitRef> WalkSpec::selection_qubits(const Circuit& c) const {
  std::vector<QubitRef> qs;
  for (const auto& name : selection_registers) {
    for (std::size_t i = 0; i < c.register_size(name); ++i) {
      qs.push_back({name, i});
    }
  }
  return qs;
}

void build_reflection(Circuit& c, AncillaPool& pool,
                      const std::vector<QubitRef>& qubits,
                      const std::optional<ControlSpec>& control) {
  if (qubits.empty()) throw std::invalid_argument("reflection needs qubits");
  if (qubits.size() == 1 && !control) {
    c.append(make_gate(GateKind::Z, {qubits[0]}));
    return;
  }
  if (qubits.size() == 1) {
    // Controlled: phase -1 on control satisfied and qubit |1>.
    c.append(make_gate(GateKind::CZ, {qubits[0]}, {*control}));
    return;
  }
  // Indicator z = 1 exactly on |0...0>; X Z X on z is diag(-1, +1), i.e.
  // phase -1 everywhere except the all-zeros state.
  std::vector<ControlSpec> literals;
  for (const auto& q : qubits) literals.push_back({q, false});
  AndChain chain = emit_and_chain(c, pool, literals);
  if (control) {
    c.append(make_gate(GateKind::X, {chain.indicator}));
    c.append(make_gate(GateKind::CZ, {chain.indicator}, {*control}));
    c.append(make_gate(GateKind::X, {chain.indicator}));
  } else {
    c.append(make_gate(GateKind::X, {chain.indicator}));
    c.append(make_gate(GateKind::Z, {chain.indicator}));
    c.append(make_gate(GateKind::X, {chain.indicator}));
  }
  uncompute_and_chain(c, pool, chain);
}

WalkStats append_walk(Circuit& c, AncillaPool& pool, const WalkSpec& spec,
                      WalkMode mode, std::size_t power) {
  WalkStats stats;
  std::vector<QubitRef> sel = spec.selection_qubits(c);
  ControlSpec ctl{{spec.control_register, 0}, true};

  auto reflection = [&](const std::optional<ControlSpec>& rctl) {
    append_gates_inverted(c, spec.prepare_gates);
    build_reflection(c, pool, sel, rctl);
    append_gates(c, spec.prepare_gates);
    stats.reflection_count += 1;
  };
  auto plain_walk = [&]() {
    append_gates(c, spec.select_gates);
    stats.select_count += 1;
    reflection(std::nullopt);
  };

  switch (mode) {
    case WalkMode::Plain:
      for (std::size_t i = 0; i < power; ++i) plain_walk();
      break;
    case WalkMode::Controlled:
      for (std::size_t i = 0; i < power; ++i) {
        append_gates(c, spec.cselect_gates);
        stats.select_count += 1;
        reflection(ctl);
      }
      break;
    case WalkMode::DirectionControlled:
      reflection(ctl);
      for (std::size_t i = 0; i < power; ++i) plain_walk();
      reflection(ctl);
      break;
  }
  return stats;
}

Circuit build_walk(const WalkSpec& spec, WalkMode mode, std::size_t power) {
  Circuit c = spec.layout_circuit();
  AncillaPool pool(spec.ancilla_register,
                   c.register_size(spec.ancilla_register));
  append_walk(c, pool, spec, mode, power);
  return c;
}

// ---------------------------------------------------------------------------
// Toy walk for arbitrary LCU term lists.
// ---------------------------------------------------------------------------

namespace {

/// Rotation-tree state preparation of amplitudes sqrt(w_l / lambda) over
/// ceil(log2 L) qubits; exact up to rotation synthesis.
void emit_amplitude_tree(Circuit& c, AncillaPool& pool,
                         const std::vector<QubitRef>& qubits,
                         const std::vector<double>& weights) {
  const std::size_t n = qubits.size();
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> mass(weights);
  mass.resize(dim, 0.0);

  // mass of a subtree rooted at (level, prefix): values with the top `level`
  // bits equal to prefix.
  std::function<double(std::size_t, std::size_t)> subtree_mass =
      [&](std::size_t level, std::size_t prefix) {
        const std::size_t span = std::size_t{1} << (n - level);
        double m = 0.0;
        for (std::size_t i = 0; i < span; ++i) m += mass[(prefix << (n - level)) + i];
        return m;
      };

  for (std::size_t level = 0; level < n; ++level) {
    const QubitRef bit = qubits[n - 1 - level];
    for (std::size_t prefix = 0; prefix < (std::size_t{1} << level); ++prefix) {
      const double total = subtree_mass(level, prefix);
      if (total <= 0.0) continue;
      const double right = subtree_mass(level + 1, (prefix << 1) | 1);
      const double angle = 2.0 * std::asin(std::sqrt(right / total));
      if (level == 0) {
        c.append(make_rotation(GateKind::RotY, angle, bit));
        continue;
      }
      std::vector<ControlSpec> literals;
      for (std::size_t b = 0; b < level; ++b) {
        const bool on = (prefix >> (level - 1 - b)) & 1;
        literals.push_back({qubits[n - 1 - b], on});
      }
      if (literals.size() == 1) {
        c.append(make_rotation(GateKind::RotY, angle, bit, {literals[0]}));
      } else {
        AndChain chain = emit_and_chain(c, pool, literals);
        c.append(make_rotation(GateKind::RotY, angle, bit,
                               {ControlSpec{chain.indicator, true}}));
        uncompute_and_chain(c, pool, chain);
      }
    }
  }
}

void emit_toy_select(Circuit& c, AncillaPool& pool, const LcuHamiltonian& lcu,
                     const SelectionSpec& sel, const std::string& sys,
                     const std::optional<ControlSpec>& control) {
  build_unary_iteration(
      c, pool, sel, control,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
        const LcuTerm& term = lcu.terms[static_cast<std::size_t>(value)];
        for (const auto& [target, kind] : term.paulis) {
          switch (kind) {
            case 'X':
              cc.append(make_gate(GateKind::CNOT, {{sys, target}}, {{q, true}}));
              break;
            case 'Y':
              cc.append(make_gate(GateKind::Y, {{sys, target}}, {{q, true}}));
              break;
            case 'Z':
              cc.append(make_gate(GateKind::CZ, {{sys, target}}, {{q, true}}));
              break;
            default:
              throw std::invalid_argument("bad Pauli kind in LCU term");
          }
        }
        if (term.sign < 0) cc.append(make_gate(GateKind::Z, {q}));
      });
}

}  // namespace

WalkSpec build_toy_walk(const LcuHamiltonian& input) {
  if (input.terms.size() < 2) {
    throw std::invalid_argument("toy walk needs at least 2 terms");
  }
  // Pad to a power of two with zero-weight identity terms so out-of-range
  // selection values act as the identity.
  LcuHamiltonian lcu = input;
  const std::size_t n_sel = ceil_log2(lcu.terms.size());
  while (lcu.terms.size() < (std::size_t{1} << n_sel)) {
    lcu.terms.push_back({0.0, 1, {}});
  }
  const std::size_t L = lcu.terms.size();
  const std::size_t pool_size = std::max<std::size_t>(n_sel + 2, 4);

  WalkSpec spec;
  spec.registers = {{"ctl", 1},
                    {"sel", n_sel},
                    {"anc", pool_size},
                    {"sys", lcu.num_qubits}};
  spec.selection_registers = {"sel"};
  spec.lambda = lcu.lambda;

  std::vector<double> weights;
  for (const auto& t : lcu.terms) weights.push_back(t.weight);

  {
    Circuit c = spec.layout_circuit();
    AncillaPool pool("anc", pool_size);
    emit_amplitude_tree(c, pool, register_refs("sel", n_sel), weights);
    spec.prepare_gates = c.gates();
  }
  SelectionSpec sel = SelectionSpec::range("sel", n_sel, L);
  {
    Circuit c = spec.layout_circuit();
    AncillaPool pool("anc", pool_size);
    emit_toy_select(c, pool, lcu, sel, "sys", std::nullopt);
    spec.select_gates = c.gates();
  }
  {
    Circuit c = spec.layout_circuit();
    AncillaPool pool("anc", pool_size);
    emit_toy_select(c, pool, lcu, sel, "sys",
                    ControlSpec{{"ctl", 0}, true});
    spec.cselect_gates = c.gates();
  }
  return spec;
}

// ---------------------------------------------------------------------------
// SELECT for the electronic structure Hamiltonian.
// ---------------------------------------------------------------------------

namespace {

/// Selection spec over a packed (orbital, spin) register pair: values are
/// s + spin << n_p for s < n_spatial. The packed order is monotone in the
/// spin-orbital index f = s + spin * n_spatial.
SelectionSpec spin_orbital_selection(const std::string& orbital_reg,
                                     std::size_t n_p,
                                     const std::string& spin_reg,
                                     std::size_t n_spatial) {
  SelectionSpec sel;
  for (std::size_t i = 0; i < n_p; ++i) sel.qubits.push_back({orbital_reg, i});
  sel.qubits.push_back({spin_reg, 0});
  for (std::uint64_t spin = 0; spin < 2; ++spin) {
    for (std::uint64_t s = 0; s < n_spatial; ++s) {
      sel.values.push_back(s + (spin << n_p));
    }
  }
  std::sort(sel.values.begin(), sel.values.end());
  return sel;
}

}  // namespace

void build_select_chem(Circuit& c, AncillaPool& pool, std::size_t n_spatial,
                       const SelectChemLayout& layout, bool controlled) {
  const std::size_t n_p = ceil_log2(n_spatial);
  std::optional<ControlSpec> ctl;
  if (controlled) ctl = ControlSpec{{layout.ctl, 0}, true};

  // Case phase corrections: i * (-1)^(U or V), plus the theta sign.
  if (controlled) {
    c.append(make_gate(GateKind::S, {{layout.ctl, 0}}));
    c.append(make_gate(GateKind::CZ, {{layout.u, 0}}, {*ctl}));
    c.append(make_gate(GateKind::CZ, {{layout.v, 0}}, {*ctl}));
    c.append(make_gate(GateKind::CZ, {{layout.theta, 0}}, {*ctl}));
  } else {
    emit_global_i(c, pool, false);
    c.append(make_gate(GateKind::Z, {{layout.u, 0}}));
    c.append(make_gate(GateKind::Z, {{layout.v, 0}}));
    c.append(make_gate(GateKind::Z, {{layout.theta, 0}}));
  }

  auto target_of = [n_p, n_spatial](std::uint64_t v) {
    const std::uint64_t mask = (std::uint64_t{1} << n_p) - 1;
    return static_cast<std::size_t>((v & mask) + (v >> n_p) * n_spatial);
  };

  // Majorana Y on (p, alpha).
  SelectionSpec sel_p = spin_orbital_selection(layout.p, n_p, layout.alpha,
                                               n_spatial);
  build_majorana_selector_mapped(c, pool, sel_p, layout.sys, target_of,
                                 GateKind::Y, ctl);

  // When V is set, reroute (p, alpha) into the second selector.
  std::vector<QubitRef> pa = register_refs(layout.p, n_p);
  pa.push_back({layout.alpha, 0});
  std::vector<QubitRef> qb = register_refs(layout.q, n_p);
  qb.push_back({layout.beta, 0});
  ControlSpec v_on{{layout.v, 0}, true};
  emit_controlled_swap(c, pool, v_on, pa, qb);

  // Majorana X on (q, beta).
  SelectionSpec sel_q = spin_orbital_selection(layout.q, n_p, layout.beta,
                                               n_spatial);
  build_majorana_selector_mapped(c, pool, sel_q, layout.sys, target_of,
                                 GateKind::X, ctl);

  emit_controlled_swap(c, pool, v_on, pa, qb);

  // Indexed Z on (q, beta), fired only for V-type indices.
  if (controlled) {
    QubitRef g = pool.alloc();
    c.append(make_gate(GateKind::AndCompute, {g}, {*ctl, v_on}));
    build_unary_iteration(
        c, pool, sel_q, ControlSpec{g, true},
        [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
          cc.append(make_gate(GateKind::CZ, {{layout.sys, target_of(value)}},
                              {{q, true}}));
        });
    c.append(make_gate(GateKind::AndUncompute, {g}, {*ctl, v_on}));
    pool.release(g);
  } else {
    build_unary_iteration(
        c, pool, sel_q, v_on,
        [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
          cc.append(make_gate(GateKind::CZ, {{layout.sys, target_of(value)}},
                              {{q, true}}));
        });
  }
}

Circuit select_chem_circuit(std::size_t N, bool controlled) {
  if (N % 2 != 0 || N < 4) throw std::invalid_argument("N must be even, >= 4");
  const std::size_t n_spatial = N / 2;
  const std::size_t n_p = ceil_log2(n_spatial);
  SelectChemLayout layout;
  const std::size_t pool_size = n_p + 4;
  Circuit c({{layout.ctl, 1},
             {layout.theta, 1},
             {layout.u, 1},
             {layout.v, 1},
             {layout.p, n_p},
             {layout.alpha, 1},
             {layout.q, n_p},
             {layout.beta, 1},
             {layout.anc, pool_size},
             {layout.sys, N}});
  AncillaPool pool(layout.anc, pool_size);
  build_select_chem(c, pool, n_spatial, layout, controlled);
  return c;
}

std::int64_t select_chem_t_count(std::size_t N) {
  return select_chem_circuit(N, true).t_count();
}

// ---------------------------------------------------------------------------
// PREPARE for the electronic structure Hamiltonian, plus the oracle bundle.
// ---------------------------------------------------------------------------

ChemOracle build_chem_oracle(const DualBasisCoefficients& coeffs, double dE,
                             std::optional<std::size_t> mu_override,
                             std::optional<std::size_t> anc_override) {
  const std::size_t M = coeffs.M;
  const std::size_t D = coeffs.D;
  std::size_t n_spatial = 1;
  for (std::size_t j = 0; j < D; ++j) n_spatial *= M;
  if (!is_pow2(n_spatial)) {
    throw std::invalid_argument("PREPARE_chem needs M^D to be a power of two");
  }
  const std::size_t n_d = log2_exact(n_spatial);
  const std::size_t N = 2 * n_spatial;

  ChemOracle oracle;
  oracle.N = N;
  oracle.M = M;
  oracle.D = D;
  oracle.exact = jw_terms(coeffs);
  const double lambda = oracle.exact.lambda;
  oracle.mu = mu_override ? *mu_override
                          : compute_mu(lambda, dE, oracle.exact.norm_bound);

  // Flat subprepare index l = d + V 2^nd + U 2^(nd+1): block T=0, V=1, U=2.
  const std::size_t l_sub = 3 * n_spatial;
  auto grid_sub_flat = [&](std::size_t p, std::size_t q) {
    std::size_t f = 0, stride = 1, pp = p, qq = q;
    for (std::size_t j = 0; j < D; ++j) {
      f += ((pp % M + M - qq % M) % M) * stride;
      pp /= M;
      qq /= M;
      stride *= M;
    }
    return f;
  };
  std::vector<double> site_coeff(n_spatial);
  for (std::size_t p = 0; p < n_spatial; ++p) {
    double vsum = 0.0;
    for (std::size_t q = 0; q < n_spatial; ++q) {
      vsum += coeffs.interaction[grid_sub_flat(p, q)];
    }
    site_coeff[p] = coeffs.kinetic[0] + coeffs.external[p] + 2.0 * vsum -
                    coeffs.interaction[0];
  }

  std::vector<double> sub_weights(l_sub, 0.0);
  oracle.theta_bits.assign(l_sub, 0);
  const double n_dbl = static_cast<double>(N);
  for (std::size_t d = 0; d < n_spatial; ++d) {
    if (d != 0) {
      sub_weights[d] = n_dbl * std::abs(coeffs.kinetic[d]) / 2.0;
      sub_weights[n_spatial + d] = n_dbl * std::abs(coeffs.interaction[d]) / 2.0;
    } else {
      sub_weights[n_spatial] = n_dbl * std::abs(coeffs.interaction[0]) / 4.0;
    }
    sub_weights[2 * n_spatial + d] = std::abs(site_coeff[d]);
    oracle.theta_bits[d] = coeffs.kinetic[d] < 0.0 ? 1 : 0;
    oracle.theta_bits[n_spatial + d] = coeffs.interaction[d] < 0.0 ? 1 : 0;
    oracle.theta_bits[2 * n_spatial + d] = site_coeff[d] > 0.0 ? 1 : 0;
  }

  oracle.dist = discretize(sub_weights, oracle.mu);
  // A T-type index with p = q must never carry weight (SELECT leaves that
  // case undefined); push any rounding unit onto the largest entry.
  if (oracle.dist.targets[0] != 0) {
    std::size_t best = 1;
    for (std::size_t l = 1; l < l_sub; ++l) {
      if (oracle.dist.targets[l] > oracle.dist.targets[best]) best = l;
    }
    oracle.dist.targets[best] += oracle.dist.targets[0];
    oracle.dist.targets[0] = 0;
  }
  oracle.table = build_alias_table(oracle.dist);

  // Encoded Hamiltonian: same term structure as `exact` with the
  // mu-discretized weights the circuit actually realizes.
  {
    LcuHamiltonian enc;
    enc.num_qubits = N;
    enc.energy_offset = oracle.exact.energy_offset;
    const double denom = static_cast<double>(oracle.dist.denominator());
    auto sub_prob = [&](std::size_t l) {
      return static_cast<double>(oracle.dist.targets[l]) / denom;
    };
    auto hop = [&](std::size_t lo, std::size_t hi, char end) {
      std::vector<std::pair<std::size_t, char>> ps;
      ps.emplace_back(lo, end);
      for (std::size_t j = lo + 1; j < hi; ++j) ps.emplace_back(j, 'Z');
      ps.emplace_back(hi, end);
      return ps;
    };
    for (std::size_t p = 0; p < n_spatial; ++p) {
      for (std::size_t q = 0; q < n_spatial; ++q) {
        if (p == q) continue;
        const std::size_t d = grid_sub_flat(p, q);
        const double w = lambda * sub_prob(d) / n_dbl;
        const int sign = oracle.theta_bits[d] ? -1 : 1;
        if (w == 0.0) continue;
        for (int s : {0, 1}) {
          const std::size_t fp = p + static_cast<std::size_t>(s) * n_spatial;
          const std::size_t fq = q + static_cast<std::size_t>(s) * n_spatial;
          const char kind = fp < fq ? 'X' : 'Y';
          enc.terms.push_back(
              {w, sign, hop(std::min(fp, fq), std::max(fp, fq), kind)});
        }
      }
    }
    for (std::size_t fp = 0; fp < N; ++fp) {
      for (std::size_t fq = 0; fq < N; ++fq) {
        if (fp == fq) continue;
        const std::size_t d = grid_sub_flat(fp % n_spatial, fq % n_spatial);
        const double mult = d == 0 ? n_dbl : 2.0 * n_dbl;
        const double w = lambda * sub_prob(n_spatial + d) / mult;
        if (w == 0.0) continue;
        const int sign = oracle.theta_bits[n_spatial + d] ? -1 : 1;
        std::vector<std::pair<std::size_t, char>> ps{
            {std::min(fp, fq), 'Z'}, {std::max(fp, fq), 'Z'}};
        enc.terms.push_back({w, sign, ps});
      }
    }
    for (std::size_t f = 0; f < N; ++f) {
      const std::size_t d = f % n_spatial;
      const double w = lambda * sub_prob(2 * n_spatial + d) / 2.0;
      if (w == 0.0) continue;
      const int sign = oracle.theta_bits[2 * n_spatial + d] ? -1 : 1;
      enc.terms.push_back({w, sign, {{f, 'Z'}}});
    }
    enc.lambda = lambda;
    enc.norm_bound = oracle.exact.norm_bound;
    oracle.encoded = std::move(enc);
  }

  // Shared register layout for PREPARE and SELECT.
  const std::size_t mu = oracle.mu;
  const std::size_t pool_size =
      anc_override ? *anc_override
                   : std::max<std::size_t>(n_d + 3, mu + 2) + 1;
  SelectChemLayout sl;
  WalkSpec& walk = oracle.walk;
  walk.registers = {{"ctl", 1},     {"theta", 1},      {"u", 1},
                    {"v", 1},       {"p", n_d},        {"alpha", 1},
                    {"q", n_d},     {"beta", 1},       {"alt", n_d + 2},
                    {"keep", mu},   {"sigma", mu},     {"less", 1},
                    {"thalt", 1},   {"anc", pool_size}, {"sys", N}};
  walk.selection_registers = {"theta", "u",    "v",     "p",     "alpha", "q",
                              "beta",  "alt",  "keep",  "sigma", "less",
                              "thalt"};
  walk.garbage_registers = {"alt", "keep", "sigma", "less", "thalt"};
  walk.lambda = lambda;

  // PREPARE gates.
  {
    Circuit c = walk.layout_circuit();
    AncillaPool pool("anc", pool_size);

    SelectionSpec sub_sel;
    for (std::size_t i = 0; i < n_d; ++i) sub_sel.qubits.push_back({"p", i});
    sub_sel.qubits.push_back({"v", 0});
    sub_sel.qubits.push_back({"u", 0});
    for (std::uint64_t l = 0; l < l_sub; ++l) sub_sel.values.push_back(l);

    QromData theta_data;
    theta_data.word_length = 1;
    for (std::size_t l = 0; l < l_sub; ++l) {
      theta_data.words.push_back(
          static_cast<std::uint64_t>(oracle.theta_bits[l]));
    }
    SubprepareLayout sub_layout;
    sub_layout.index_reg = "p";  // index spans p, v, u via sub_sel
    sub_layout.alt_reg = "alt";
    sub_layout.keep_reg = "keep";
    sub_layout.sigma_reg = "sigma";
    sub_layout.less_reg = "less";
    sub_layout.data_reg = "theta";
    sub_layout.data_alt_reg = "thalt";
    sub_layout.anc_reg = "anc";
    build_subprepare(c, pool, oracle.table, sub_sel, theta_data, sub_layout);

    // alpha in |+>.
    c.append(make_gate(GateKind::H, {{"alpha", 0}}));

    // Uniform q for the T and V blocks (U off).
    build_uniform(c, pool, register_refs("q", n_d), n_spatial,
                  ControlSpec{{"u", 0}, false});

    // beta fix-up. z = [d == 0] over the p register (still holding d).
    {
      std::vector<ControlSpec> zeros;
      for (std::size_t i = 0; i < n_d; ++i) zeros.push_back({{"p", i}, false});
      AndChain z = emit_and_chain(c, pool, zeros);
      ControlSpec z_on{z.indicator, true};
      // V and d != 0: beta into |+>.
      {
        AndChain g = emit_and_chain(
            c, pool, {ControlSpec{{"v", 0}, true}, ControlSpec{z.indicator, false}});
        emit_controlled_h(c, ControlSpec{g.indicator, true}, {"beta", 0});
        uncompute_and_chain(c, pool, g);
      }
      // V and d == 0 and alpha = 0: beta = 1 (so beta != alpha).
      {
        AndChain g = emit_and_chain(
            c, pool, {ControlSpec{{"v", 0}, true}, z_on,
                      ControlSpec{{"alpha", 0}, false}});
        c.append(make_gate(GateKind::CNOT, {{"beta", 0}},
                           {{g.indicator, true}}));
        uncompute_and_chain(c, pool, g);
      }
      uncompute_and_chain(c, pool, z);
    }
    // U or T block: beta = alpha.
    {
      AndChain g = emit_and_chain(
          c, pool,
          {ControlSpec{{"alpha", 0}, true}, ControlSpec{{"v", 0}, false}});
      c.append(make_gate(GateKind::CNOT, {{"beta", 0}}, {{g.indicator, true}}));
      uncompute_and_chain(c, pool, g);
    }

    // U block: swap d and q so both end up holding p.
    emit_controlled_swap(c, pool, ControlSpec{{"u", 0}, true},
                         register_refs("p", n_d), register_refs("q", n_d));

    // d += q (mod M per dimension) turns d into p.
    const std::size_t bits_per_dim = log2_exact(M);
    for (std::size_t j = 0; j < D; ++j) {
      std::vector<QubitRef> pd, qd;
      for (std::size_t b = 0; b < bits_per_dim; ++b) {
        pd.push_back({"p", j * bits_per_dim + b});
        qd.push_back({"q", j * bits_per_dim + b});
      }
      emit_add_mod_pow2(c, pool, pd, qd);
    }

    walk.prepare_gates = c.gates();
  }

  // SELECT gates (both variants).
  for (bool controlled : {false, true}) {
    Circuit c = walk.layout_circuit();
    AncillaPool pool("anc", pool_size);
    build_select_chem(c, pool, n_spatial, sl, controlled);
    if (controlled) {
      walk.cselect_gates = c.gates();
    } else {
      walk.select_gates = c.gates();
    }
  }
  return oracle;
}

// ---------------------------------------------------------------------------
// SELECT / PREPARE for the Hubbard model.
// ---------------------------------------------------------------------------

void build_select_hub(Circuit& c, AncillaPool& pool, std::size_t M,
                      const SelectHubLayout& layout, bool controlled) {
  if (M < 2) throw std::invalid_argument("Hubbard lattice needs M >= 2");
  const std::size_t n_sites = M * M;
  const std::size_t bits_per_dim = ceil_log2(M);
  const std::size_t n_p = 2 * bits_per_dim;
  std::optional<ControlSpec> ctl;
  if (controlled) ctl = ControlSpec{{layout.ctl, 0}, true};
  ControlSpec u_on{{layout.u, 0}, true};
  ControlSpec v_on{{layout.v, 0}, true};
  ControlSpec v_off{{layout.v, 0}, false};
  ControlSpec u_off{{layout.u, 0}, false};

  // Packed (p_x, p_y) value -> site index, row-major.
  auto site_of = [M, bits_per_dim](std::uint64_t v) {
    const std::uint64_t mask = (std::uint64_t{1} << bits_per_dim) - 1;
    return static_cast<std::size_t>((v & mask) + (v >> bits_per_dim) * M);
  };
  auto target_of = [site_of, bits_per_dim, n_sites](std::uint64_t v) {
    const std::uint64_t site_mask = (std::uint64_t{1} << (2 * bits_per_dim)) - 1;
    const std::uint64_t spin = v >> (2 * bits_per_dim);
    return site_of(v & site_mask) + static_cast<std::size_t>(spin) * n_sites;
  };

  // Valid packed (p, alpha) values.
  SelectionSpec sel_pa, sel_qb, sel_site_p;
  for (std::size_t i = 0; i < n_p; ++i) {
    sel_pa.qubits.push_back({layout.p, i});
    sel_qb.qubits.push_back({layout.q, i});
    sel_site_p.qubits.push_back({layout.p, i});
  }
  sel_pa.qubits.push_back({layout.alpha, 0});
  sel_qb.qubits.push_back({layout.beta, 0});
  for (std::uint64_t spin = 0; spin < 2; ++spin) {
    for (std::uint64_t y = 0; y < M; ++y) {
      for (std::uint64_t x = 0; x < M; ++x) {
        sel_pa.values.push_back(x + (y << bits_per_dim) + (spin << n_p));
      }
    }
  }
  sel_qb.values = sel_pa.values;
  for (std::uint64_t y = 0; y < M; ++y) {
    for (std::uint64_t x = 0; x < M; ++x) {
      sel_site_p.values.push_back(x + (y << bits_per_dim));
    }
  }

  // Phase corrections: -i * (-1)^U * i^V * (-1)^(U and V); identity on the
  // parked (U and V) indices, -Z / +ZZ / -hop on the real cases.
  if (!controlled) {
    emit_global_i(c, pool, true);
    c.append(make_gate(GateKind::Z, {{layout.u, 0}}));
    c.append(make_gate(GateKind::S, {{layout.v, 0}}));
    c.append(make_gate(GateKind::CZ, {{layout.u, 0}}, {v_on}));
  } else {
    c.append(make_gate(GateKind::Sdg, {{layout.ctl, 0}}));
    c.append(make_gate(GateKind::CZ, {{layout.u, 0}}, {*ctl}));
    QubitRef g = pool.alloc();
    c.append(make_gate(GateKind::AndCompute, {g}, {*ctl, v_on}));
    c.append(make_gate(GateKind::S, {g}));
    c.append(make_gate(GateKind::CZ, {{layout.u, 0}}, {{g, true}}));
    c.append(make_gate(GateKind::AndUncompute, {g}, {*ctl, v_on}));
    pool.release(g);
  }

  // The Majorana pair fires on the U and hopping cases (V off).
  if (controlled) {
    QubitRef g = pool.alloc();
    c.append(make_gate(GateKind::AndCompute, {g}, {*ctl, v_off}));
    ControlSpec g_on{g, true};
    build_majorana_selector_mapped(c, pool, sel_pa, layout.sys, target_of,
                                   GateKind::Y, g_on);
    build_majorana_selector_mapped(c, pool, sel_qb, layout.sys, target_of,
                                   GateKind::X, g_on);
    c.append(make_gate(GateKind::AndUncompute, {g}, {*ctl, v_off}));
    pool.release(g);
  } else {
    build_majorana_selector_mapped(c, pool, sel_pa, layout.sys, target_of,
                                   GateKind::Y, v_off);
    build_majorana_selector_mapped(c, pool, sel_qb, layout.sys, target_of,
                                   GateKind::X, v_off);
  }

  // Spin-independent double Z on site p for the V case (U off keeps the
  // parked identity indices inert).
  {
    std::vector<ControlSpec> literals{v_on, u_off};
    if (controlled) literals.insert(literals.begin(), *ctl);
    AndChain gate_chain = emit_and_chain(c, pool, literals);
    build_unary_iteration(
        c, pool, sel_site_p, ControlSpec{gate_chain.indicator, true},
        [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
          const std::size_t site = site_of(value);
          cc.append(
              make_gate(GateKind::CZ, {{layout.sys, site}}, {{q, true}}));
          cc.append(make_gate(GateKind::CZ, {{layout.sys, site + n_sites}},
                              {{q, true}}));
        });
    uncompute_and_chain(c, pool, gate_chain);
  }
}

Circuit select_hub_circuit(std::size_t N, bool controlled) {
  const std::size_t n_sites = N / 2;
  std::size_t M = 0;
  while (M * M < n_sites) ++M;
  if (M * M != n_sites || N % 2 != 0) {
    throw std::invalid_argument("Hubbard N must be 2*M^2");
  }
  SelectHubLayout layout;
  const std::size_t n_p = 2 * ceil_log2(M);
  const std::size_t pool_size = n_p + 5;
  Circuit c({{layout.ctl, 1},
             {layout.u, 1},
             {layout.v, 1},
             {layout.p, n_p},
             {layout.alpha, 1},
             {layout.q, n_p},
             {layout.beta, 1},
             {layout.anc, pool_size},
             {layout.sys, N}});
  AncillaPool pool(layout.anc, pool_size);
  build_select_hub(c, pool, M, layout, controlled);
  return c;
}

std::int64_t select_hub_t_count(std::size_t N) {
  return select_hub_circuit(N, true).t_count();
}

HubOracle build_hub_oracle(const HubbardSpec& spec) {
  if (!is_pow2(spec.M)) {
    throw std::invalid_argument("PREPARE_hub needs M to be a power of two");
  }
  if (spec.t == 0.0 && spec.u == 0.0) {
    throw std::invalid_argument("need t > 0 or u > 0");
  }
  const std::size_t M = spec.M;
  const std::size_t n_sites = M * M;
  const std::size_t N = 2 * n_sites;
  const std::size_t bits_per_dim = log2_exact(M);
  const std::size_t n_p = 2 * bits_per_dim;

  HubOracle oracle;
  oracle.N = N;
  oracle.M = M;
  oracle.lcu = hubbard_terms(spec);
  const double lambda = oracle.lcu.lambda;

  WalkSpec& walk = oracle.walk;
  const std::size_t pool_size = n_p + 4;
  walk.registers = {{"ctl", 1},   {"u", 1},    {"v", 1},
                    {"p", n_p},   {"alpha", 1}, {"q", n_p},
                    {"beta", 1},  {"dir", 2},   {"anc", pool_size},
                    {"sys", N}};
  walk.selection_registers = {"u", "v", "p", "alpha", "q", "beta", "dir"};
  walk.garbage_registers = {"dir"};
  walk.lambda = lambda;

  // PREPARE.
  {
    Circuit c = walk.layout_circuit();
    AncillaPool pool("anc", pool_size);
    // Block masses: U-type Nu/4, V-type Nu/8, parked identity Nu/8, hops 2Nt.
    const double nu8 = spec.u * static_cast<double>(N) / 8.0;
    const double p_u = lambda > 0.0 ? 3.0 * nu8 / lambda : 0.0;
    const double p_v_given_u = spec.u > 0.0 ? 1.0 / 3.0 : 0.0;
    const double denom_not_u = lambda - 3.0 * nu8;  // 2Nt + Nu/8
    const double pv0 = denom_not_u > 0.0 ? nu8 / denom_not_u : 0.0;

    c.append(make_rotation(GateKind::RotY, 2.0 * std::asin(std::sqrt(p_u)),
                           {"u", 0}));
    c.append(make_rotation(GateKind::RotY,
                           2.0 * std::asin(std::sqrt(p_v_given_u)), {"v", 0},
                           {ControlSpec{{"u", 0}, true}}));
    c.append(make_rotation(GateKind::RotY, 2.0 * std::asin(std::sqrt(pv0)),
                           {"v", 0}, {ControlSpec{{"u", 0}, false}}));

    // Uniform over sites.
    for (std::size_t i = 0; i < n_p; ++i) {
      c.append(make_gate(GateKind::H, {{"p", i}}));
    }
    // alpha uniform except for the V and parked blocks (alpha = 0 there).
    emit_controlled_h(c, ControlSpec{{"v", 0}, false}, {"alpha", 0});
    // q = p.
    for (std::size_t i = 0; i < n_p; ++i) {
      c.append(make_gate(GateKind::CNOT, {{"q", i}}, {{{"p", i}, true}}));
    }
    // beta = alpha for the T and U blocks.
    {
      AndChain g = emit_and_chain(
          c, pool,
          {ControlSpec{{"alpha", 0}, true}, ControlSpec{{"v", 0}, false}});
      c.append(make_gate(GateKind::CNOT, {{"beta", 0}}, {{g.indicator, true}}));
      uncompute_and_chain(c, pool, g);
    }
    // beta = 1 for the V block (U off).
    {
      AndChain g = emit_and_chain(
          c, pool,
          {ControlSpec{{"v", 0}, true}, ControlSpec{{"u", 0}, false}});
      c.append(make_gate(GateKind::CNOT, {{"beta", 0}}, {{g.indicator, true}}));
      uncompute_and_chain(c, pool, g);
    }
    // Hop directions for the T block.
    {
      AndChain a_t = emit_and_chain(
          c, pool,
          {ControlSpec{{"u", 0}, false}, ControlSpec{{"v", 0}, false}});
      ControlSpec t_on{a_t.indicator, true};
      emit_controlled_h(c, t_on, {"dir", 0});  // axis
      emit_controlled_h(c, t_on, {"dir", 1});  // sign
      for (int axis = 0; axis < 2; ++axis) {
        std::vector<QubitRef> q_slice;
        for (std::size_t b = 0; b < bits_per_dim; ++b) {
          q_slice.push_back(
              {"q", static_cast<std::size_t>(axis) * bits_per_dim + b});
        }
        for (int dirsign = 0; dirsign < 2; ++dirsign) {
          AndChain g = emit_and_chain(
              c, pool,
              {t_on, ControlSpec{{"dir", 0}, axis == 1},
               ControlSpec{{"dir", 1}, dirsign == 1}});
          emit_controlled_increment(c, pool, q_slice, dirsign == 0 ? 1 : -1,
                                    ControlSpec{g.indicator, true});
          uncompute_and_chain(c, pool, g);
        }
      }
      uncompute_and_chain(c, pool, a_t);
    }
    walk.prepare_gates = c.gates();
  }

  // SELECT (both variants).
  SelectHubLayout sl;
  for (bool controlled : {false, true}) {
    Circuit c = walk.layout_circuit();
    AncillaPool pool("anc", pool_size);
    build_select_hub(c, pool, M, sl, controlled);
    if (controlled) {
      walk.cselect_gates = c.gates();
    } else {
      walk.select_gates = c.gates();
    }
  }
  return oracle;
}

}  // namespace qsynth
