#include "qsynth/primitives.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsynth {

namespace {

ControlSpec negated(ControlSpec c) {
  c.on = !c.on;
  return c;
}

void append_cnot(Circuit& c, const ControlSpec& control, const QubitRef& target) {
  c.append(make_gate(GateKind::CNOT, {target}, {control}));
}

}  // namespace

QubitRef AncillaPool::alloc() {
  if (top_ >= size_) {
    throw std::runtime_error("ancilla pool '" + reg_ + "' exhausted (size " +
                             std::to_string(size_) + ")");
  }
  QubitRef ref{reg_, top_};
  ++top_;
  high_water_ = std::max(high_water_, top_);
  return ref;
}

void AncillaPool::release(const QubitRef& ref) {
  if (top_ == 0 || ref.reg != reg_ || ref.offset != top_ - 1) {
    throw std::logic_error("ancilla pool release out of order");
  }
  --top_;
}

SelectionSpec SelectionSpec::range(const std::string& reg, std::size_t width,
                                   std::uint64_t count) {
  SelectionSpec spec;
  for (std::size_t i = 0; i < width; ++i) spec.qubits.push_back({reg, i});
  spec.values.resize(count);
  for (std::uint64_t v = 0; v < count; ++v) spec.values[v] = v;
  return spec;
}

std::vector<QubitRef> register_refs(const std::string& reg, std::size_t width) {
  std::vector<QubitRef> refs;
  for (std::size_t i = 0; i < width; ++i) refs.push_back({reg, i});
  return refs;
}

namespace {

// Segment-tree walk over the sorted valid values. `lo`/`hi` bound the value
// range of the node; [first, last) is the slice of valid values inside it.
// `active` is the subtree indicator (nullopt means unconditionally active,
// which only happens at the root of an uncontrolled iteration).
struct TreeWalker {
  Circuit& c;
  AncillaPool& pool;
  const SelectionSpec& sel;
  const LeafEmitter& body;

  void leaf(std::uint64_t value, const std::optional<ControlSpec>& active) {
    if (!active) {
      throw std::logic_error("unary iteration leaf without indicator");
    }
    if (active->on) {
      body(c, value, active->qubit);
    } else {
      c.append(make_gate(GateKind::X, {active->qubit}));
      body(c, value, active->qubit);
      c.append(make_gate(GateKind::X, {active->qubit}));
    }
  }

  void walk(std::size_t level, std::uint64_t lo, std::uint64_t hi,
            std::size_t first, std::size_t last,
            const std::optional<ControlSpec>& active) {
    const std::size_t nbits = sel.qubits.size();
    if (level == nbits) {
      leaf(sel.values[first], active);
      return;
    }
    const std::uint64_t mid = lo + (std::uint64_t{1} << (nbits - 1 - level));
    std::size_t split = first;
    while (split < last && sel.values[split] < mid) ++split;
    const bool has_left = split > first;
    const bool has_right = last > split;
    const QubitRef bit = sel.qubits[nbits - 1 - level];
    if (has_left && !has_right) {
      walk(level + 1, lo, mid, first, split, active);
      return;
    }
    if (has_right && !has_left) {
      walk(level + 1, mid, hi, split, last, active);
      return;
    }
    if (!has_left && !has_right) return;

    if (!active) {
      // Uncontrolled root split: the selection bit itself is the indicator.
      walk(level + 1, lo, mid, first, split, ControlSpec{bit, false});
      walk(level + 1, mid, hi, split, last, ControlSpec{bit, true});
      return;
    }
    QubitRef anc = pool.alloc();
    c.append(make_gate(GateKind::AndCompute, {anc}, {*active, {bit, false}}));
    walk(level + 1, lo, mid, first, split, ControlSpec{anc, true});
    append_cnot(c, *active, anc);
    walk(level + 1, mid, hi, split, last, ControlSpec{anc, true});
    c.append(make_gate(GateKind::AndUncompute, {anc}, {*active, {bit, true}}));
    pool.release(anc);
  }
};

void validate_selection(const SelectionSpec& sel) {
  if (sel.values.size() < 2) {
    throw std::invalid_argument("unary iteration needs at least 2 index values");
  }
  if (!std::is_sorted(sel.values.begin(), sel.values.end()) ||
      std::adjacent_find(sel.values.begin(), sel.values.end()) !=
          sel.values.end()) {
    throw std::invalid_argument("selection values must be sorted and distinct");
  }
  const std::uint64_t limit = sel.qubits.size() >= 64
                                  ? ~std::uint64_t{0}
                                  : (std::uint64_t{1} << sel.qubits.size()) - 1;
  if (sel.values.back() > limit) {
    throw std::invalid_argument("selection value exceeds register width");
  }
}

}  // namespace

void build_unary_iteration(Circuit& c, AncillaPool& pool,
                           const SelectionSpec& sel,
                           const std::optional<ControlSpec>& control,
                           const LeafEmitter& body) {
  validate_selection(sel);
  TreeWalker walker{c, pool, sel, body};
  const std::uint64_t hi = std::uint64_t{1} << sel.qubits.size();
  walker.walk(0, 0, hi, 0, sel.values.size(), control);
}

void build_indexed_pauli(Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
                         const std::string& system_reg, GateKind kind,
                         const std::optional<ControlSpec>& control) {
  build_unary_iteration(
      c, pool, sel, control,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
        QubitRef target{system_reg, static_cast<std::size_t>(value)};
        switch (kind) {
          case GateKind::X:
            cc.append(make_gate(GateKind::CNOT, {target}, {{q, true}}));
            break;
          case GateKind::Z:
            cc.append(make_gate(GateKind::CZ, {target}, {{q, true}}));
            break;
          case GateKind::Y:
            cc.append(make_gate(GateKind::Y, {target}, {{q, true}}));
            break;
          default:
            throw std::invalid_argument("indexed op supports X, Y, Z");
        }
      });
}

namespace {

// Shared sweep for ranged ops and the Majorana selector. At each leaf (in
// increasing value order) the accumulator is toggled by the leaf indicator
// and then drives the ranged gate, so the range covers values strictly below
// the selected one. The accumulator ends cleared.
void build_accumulator_sweep(
    Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
    const std::optional<ControlSpec>& control,
    const std::function<void(Circuit&, std::uint64_t, const QubitRef& acc,
                             const QubitRef& indicator)>& leaf) {
  validate_selection(sel);
  QubitRef acc = pool.alloc();
  if (control) {
    append_cnot(c, *control, acc);
  } else {
    c.append(make_gate(GateKind::X, {acc}));
  }
  build_unary_iteration(
      c, pool, sel, control,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
        cc.append(make_gate(GateKind::CNOT, {acc}, {{q, true}}));
        leaf(cc, value, acc, q);
      });
  pool.release(acc);
}

}  // namespace

void build_ranged_op(Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
                     const std::string& system_reg, GateKind kind,
                     const std::optional<ControlSpec>& control) {
  build_accumulator_sweep(
      c, pool, sel, control,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& acc,
          const QubitRef&) {
        QubitRef target{system_reg, static_cast<std::size_t>(value)};
        switch (kind) {
          case GateKind::Z:
            cc.append(make_gate(GateKind::CZ, {target}, {{acc, true}}));
            break;
          case GateKind::X:
            cc.append(make_gate(GateKind::CNOT, {target}, {{acc, true}}));
            break;
          case GateKind::Y:
            cc.append(make_gate(GateKind::Y, {target}, {{acc, true}}));
            break;
          default:
            throw std::invalid_argument("ranged op supports X, Y, Z");
        }
      });
}

void build_majorana_selector_mapped(
    Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
    const std::string& system_reg,
    const std::function<std::size_t(std::uint64_t)>& target_of,
    GateKind end_kind, const std::optional<ControlSpec>& control) {
  if (end_kind != GateKind::Y && end_kind != GateKind::X) {
    throw std::invalid_argument("Majorana endpoint must be X or Y");
  }
  build_accumulator_sweep(
      c, pool, sel, control,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& acc,
          const QubitRef& q) {
        QubitRef target{system_reg, target_of(value)};
        cc.append(make_gate(GateKind::CZ, {target}, {{acc, true}}));
        if (end_kind == GateKind::Y) {
          cc.append(make_gate(GateKind::Y, {target}, {{q, true}}));
        } else {
          cc.append(make_gate(GateKind::CNOT, {target}, {{q, true}}));
        }
      });
}

void build_majorana_selector(Circuit& c, AncillaPool& pool,
                             const SelectionSpec& sel,
                             const std::string& system_reg,
                             const std::optional<ControlSpec>& control) {
  build_majorana_selector_mapped(
      c, pool, sel, system_reg,
      [](std::uint64_t v) { return static_cast<std::size_t>(v); },
      GateKind::Y, control);
}

void build_qrom(Circuit& c, AncillaPool& pool, const SelectionSpec& sel,
                const QromData& data, const std::string& out_reg,
                const std::optional<ControlSpec>& control) {
  if (data.words.empty()) throw std::invalid_argument("QROM data is empty");
  if (data.word_length == 0) throw std::invalid_argument("QROM word length is 0");
  if (data.words.size() != sel.values.size()) {
    throw std::invalid_argument("QROM word count must match selection values");
  }
  build_unary_iteration(
      c, pool, sel, control,
      [&](Circuit& cc, std::uint64_t value, const QubitRef& q) {
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(sel.values.begin(), sel.values.end(), value) -
            sel.values.begin());
        std::uint64_t word = data.words[idx];
        for (std::size_t b = 0; b < data.word_length; ++b) {
          if (word & (std::uint64_t{1} << b)) {
            cc.append(make_gate(GateKind::CNOT, {{out_reg, b}}, {{q, true}}));
          }
        }
      });
}

void emit_phase_gate(Circuit& c, AncillaPool& pool, double angle,
                     const QubitRef& target) {
  // diag(1, e^{i a}) = RotZ(a) on the target times e^{i a / 2}; the second
  // rotation realizes that factor on a clean |0> qubit so every branch,
  // including target = |0>, is phased exactly.
  c.append(make_rotation(GateKind::RotZ, angle, target));
  emit_global_phase(c, pool, angle / 2.0);
}

void emit_controlled_h(Circuit& c, const ControlSpec& control,
                       const QubitRef& target) {
  c.append(make_gate(GateKind::Sdg, {target}));
  c.append(make_gate(GateKind::H, {target}));
  c.append(make_gate(GateKind::Tdg, {target}));
  c.append(make_gate(GateKind::CNOT, {target}, {control}));
  c.append(make_gate(GateKind::T, {target}));
  c.append(make_gate(GateKind::H, {target}));
  c.append(make_gate(GateKind::S, {target}));
}

void emit_global_phase(Circuit& c, AncillaPool& pool, double angle) {
  QubitRef anc = pool.alloc();
  // RotZ(-2*angle) multiplies |0> by e^{i*angle}.
  c.append(make_rotation(GateKind::RotZ, -2.0 * angle, anc));
  pool.release(anc);
}

AndChain emit_and_chain(Circuit& c, AncillaPool& pool,
                        const std::vector<ControlSpec>& literals) {
  if (literals.empty()) {
    throw std::invalid_argument("and-chain needs at least one literal");
  }
  AndChain chain;
  auto record = [&](const Gate& g) {
    c.append(g);
    chain.gates.push_back(g);
  };
  if (literals.size() == 1) {
    QubitRef anc = pool.alloc();
    chain.chain_ancillas.push_back(anc);
    if (!literals[0].on) record(make_gate(GateKind::X, {anc}));
    record(make_gate(GateKind::CNOT, {anc}, {{literals[0].qubit, true}}));
    chain.indicator = anc;
    return chain;
  }
  QubitRef cur = pool.alloc();
  chain.chain_ancillas.push_back(cur);
  record(make_gate(GateKind::AndCompute, {cur}, {literals[0], literals[1]}));
  for (std::size_t i = 2; i < literals.size(); ++i) {
    QubitRef next = pool.alloc();
    chain.chain_ancillas.push_back(next);
    record(make_gate(GateKind::AndCompute, {next},
                     {ControlSpec{cur, true}, literals[i]}));
    cur = next;
  }
  chain.indicator = cur;
  return chain;
}

void uncompute_and_chain(Circuit& c, AncillaPool& pool, const AndChain& chain) {
  for (auto it = chain.gates.rbegin(); it != chain.gates.rend(); ++it) {
    Gate g = *it;
    if (g.kind == GateKind::AndCompute) g.kind = GateKind::AndUncompute;
    c.append(g);
  }
  for (auto it = chain.chain_ancillas.rbegin(); it != chain.chain_ancillas.rend();
       ++it) {
    pool.release(*it);
  }
}

namespace {

// Emits gates and logs them so the exact inverse can be replayed.
struct GateLog {
  Circuit& c;
  std::vector<Gate> log;
  void emit(const Gate& g) {
    c.append(g);
    log.push_back(g);
  }
  void replay_inverse() {
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
      Gate g = *it;
      if (g.kind == GateKind::AndCompute) {
        g.kind = GateKind::AndUncompute;
      } else if (g.kind == GateKind::AndUncompute) {
        g.kind = GateKind::AndCompute;
      }
      c.append(g);
    }
  }
};

// borrow_{i+1} = MAJ(~a_i, b_i, borrow_i) computed into a fresh ancilla.
void emit_borrow_step(GateLog& log, const QubitRef& a, const QubitRef& b,
                      const QubitRef& borrow, const QubitRef& out) {
  log.emit(make_gate(GateKind::CNOT, {a}, {{borrow, true}}));
  log.emit(make_gate(GateKind::CNOT, {b}, {{borrow, true}}));
  log.emit(make_gate(GateKind::AndCompute, {out},
                     {ControlSpec{a, false}, ControlSpec{b, true}}));
  log.emit(make_gate(GateKind::CNOT, {out}, {{borrow, true}}));
  log.emit(make_gate(GateKind::CNOT, {b}, {{borrow, true}}));
  log.emit(make_gate(GateKind::CNOT, {a}, {{borrow, true}}));
}

}  // namespace

void emit_less_than(Circuit& c, AncillaPool& pool,
                    const std::vector<QubitRef>& a,
                    const std::vector<QubitRef>& b, const QubitRef& flag) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("comparator needs equal nonempty registers");
  }
  GateLog log{c, {}};
  std::vector<QubitRef> borrows;
  QubitRef cur = pool.alloc();
  borrows.push_back(cur);
  log.emit(make_gate(GateKind::AndCompute, {cur},
                     {ControlSpec{a[0], false}, ControlSpec{b[0], true}}));
  for (std::size_t i = 1; i < a.size(); ++i) {
    QubitRef next = pool.alloc();
    borrows.push_back(next);
    emit_borrow_step(log, a[i], b[i], cur, next);
    cur = next;
  }
  c.append(make_gate(GateKind::CNOT, {flag}, {{cur, true}}));
  log.replay_inverse();
  for (auto it = borrows.rbegin(); it != borrows.rend(); ++it) pool.release(*it);
}

void emit_less_than_const(Circuit& c, AncillaPool& pool,
                          const std::vector<QubitRef>& reg, std::uint64_t value,
                          const QubitRef& flag) {
  if (reg.empty()) throw std::invalid_argument("comparator needs a register");
  GateLog log{c, {}};
  std::vector<QubitRef> ancillas;
  std::optional<ControlSpec> cur;  // satisfied <=> reg[0..i] < value[0..i]
  for (std::size_t i = 0; i < reg.size(); ++i) {
    const bool ci = (value >> i) & 1;
    if (ci) {
      if (!cur) {
        cur = ControlSpec{reg[i], false};
      } else {
        QubitRef t = pool.alloc();
        ancillas.push_back(t);
        log.emit(make_gate(GateKind::AndCompute, {t},
                           {ControlSpec{reg[i], true}, negated(*cur)}));
        log.emit(make_gate(GateKind::X, {t}));
        cur = ControlSpec{t, true};
      }
    } else {
      if (cur) {
        QubitRef t = pool.alloc();
        ancillas.push_back(t);
        log.emit(make_gate(GateKind::AndCompute, {t},
                           {ControlSpec{reg[i], false}, *cur}));
        cur = ControlSpec{t, true};
      }
    }
  }
  if (cur) {
    if (!cur->on) c.append(make_gate(GateKind::X, {flag}));
    c.append(make_gate(GateKind::CNOT, {flag}, {{cur->qubit, true}}));
  }
  log.replay_inverse();
  for (auto it = ancillas.rbegin(); it != ancillas.rend(); ++it) {
    pool.release(*it);
  }
}

void emit_controlled_swap(Circuit& c, AncillaPool& pool,
                          const ControlSpec& control,
                          const std::vector<QubitRef>& a,
                          const std::vector<QubitRef>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("controlled swap needs equal-width registers");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    c.append(make_gate(GateKind::CNOT, {a[i]}, {{b[i], true}}));
    QubitRef t = pool.alloc();
    c.append(make_gate(GateKind::AndCompute, {t},
                       {control, ControlSpec{a[i], true}}));
    c.append(make_gate(GateKind::CNOT, {b[i]}, {{t, true}}));
    c.append(make_gate(GateKind::AndUncompute, {t},
                       {control, ControlSpec{a[i], true}}));
    pool.release(t);
    c.append(make_gate(GateKind::CNOT, {a[i]}, {{b[i], true}}));
  }
}

void emit_add_mod_pow2(Circuit& c, AncillaPool& pool,
                       const std::vector<QubitRef>& target,
                       const std::vector<QubitRef>& addend) {
  if (target.size() != addend.size() || target.empty()) {
    throw std::invalid_argument("adder needs equal-width registers");
  }
  const std::size_t n = target.size();
  if (n == 1) {
    c.append(make_gate(GateKind::CNOT, {target[0]}, {{addend[0], true}}));
    return;
  }
  // Carry chain: carry[i+1] = MAJ(a_i, b_i, carry[i]); apply sums from the top
  // bit down so each carry can be uncomputed with the original lower bits.
  std::vector<QubitRef> carries;
  std::vector<GateLog> steps;
  steps.reserve(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    QubitRef out = pool.alloc();
    carries.push_back(out);
    steps.push_back(GateLog{c, {}});
    GateLog& log = steps.back();
    if (i == 0) {
      log.emit(make_gate(GateKind::AndCompute, {out},
                         {ControlSpec{target[0], true},
                          ControlSpec{addend[0], true}}));
    } else {
      const QubitRef& prev = carries[i - 1];
      log.emit(make_gate(GateKind::CNOT, {target[i]}, {{prev, true}}));
      log.emit(make_gate(GateKind::CNOT, {addend[i]}, {{prev, true}}));
      log.emit(make_gate(GateKind::AndCompute, {out},
                         {ControlSpec{target[i], true},
                          ControlSpec{addend[i], true}}));
      log.emit(make_gate(GateKind::CNOT, {out}, {{prev, true}}));
      log.emit(make_gate(GateKind::CNOT, {addend[i]}, {{prev, true}}));
      log.emit(make_gate(GateKind::CNOT, {target[i]}, {{prev, true}}));
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    c.append(make_gate(GateKind::CNOT, {target[i]}, {{addend[i], true}}));
    if (i > 0) {
      c.append(make_gate(GateKind::CNOT, {target[i]}, {{carries[i - 1], true}}));
      steps[i - 1].replay_inverse();
      pool.release(carries[i - 1]);
      carries.pop_back();
    }
  }
}

void emit_controlled_increment(Circuit& c, AncillaPool& pool,
                               const std::vector<QubitRef>& reg, int direction,
                               const ControlSpec& control) {
  if (reg.empty()) throw std::invalid_argument("increment needs a register");
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("direction must be +1 or -1");
  }
  const bool on_when = direction == 1;  // carry on 1s, borrow on 0s
  const std::size_t n = reg.size();
  std::vector<QubitRef> chain;
  std::vector<GateLog> steps;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    QubitRef out = pool.alloc();
    chain.push_back(out);
    steps.push_back(GateLog{c, {}});
    ControlSpec prev = i == 0 ? control : ControlSpec{chain[i - 1], true};
    steps.back().emit(make_gate(GateKind::AndCompute, {out},
                                {prev, ControlSpec{reg[i], on_when}}));
  }
  for (std::size_t i = n; i-- > 0;) {
    if (i == 0) {
      c.append(make_gate(GateKind::CNOT, {reg[0]}, {control}));
    } else {
      c.append(make_gate(GateKind::CNOT, {reg[i]}, {{chain[i - 1], true}}));
      steps[i - 1].replay_inverse();
      pool.release(chain[i - 1]);
      chain.pop_back();
    }
  }
}

namespace {

struct UniformParts {
  std::size_t pow2_bits = 0;  // k with count = 2^k * odd
  std::uint64_t odd = 1;
  std::size_t odd_bits = 0;  // ceil(log2 odd), 0 when odd == 1
};

UniformParts factor_count(std::uint64_t count) {
  if (count == 0) throw std::invalid_argument("uniform over zero values");
  UniformParts parts;
  std::uint64_t v = count;
  while ((v & 1) == 0) {
    v >>= 1;
    ++parts.pow2_bits;
  }
  parts.odd = v;
  while ((std::uint64_t{1} << parts.odd_bits) < parts.odd) ++parts.odd_bits;
  return parts;
}

}  // namespace

void build_uniform(Circuit& c, AncillaPool& pool,
                   const std::vector<QubitRef>& qubits, std::uint64_t count,
                   const std::optional<ControlSpec>& control) {
  UniformParts parts = factor_count(count);
  const std::size_t used = parts.pow2_bits + parts.odd_bits;
  if (used > qubits.size()) {
    throw std::invalid_argument("uniform count does not fit the register");
  }
  auto hadamard_all = [&](bool controlled) {
    for (std::size_t i = 0; i < used; ++i) {
      if (controlled) {
        emit_controlled_h(c, *control, qubits[i]);
      } else {
        c.append(make_gate(GateKind::H, {qubits[i]}));
      }
    }
  };
  if (parts.odd == 1) {
    hadamard_all(control.has_value());
    return;
  }

  std::vector<QubitRef> odd_refs;
  for (std::size_t i = 0; i < parts.odd_bits; ++i) {
    odd_refs.push_back(qubits[parts.pow2_bits + i]);
  }
  auto hadamard_odd = [&]() {
    for (const auto& q : odd_refs) c.append(make_gate(GateKind::H, {q}));
  };

  const double p =
      static_cast<double>(parts.odd) /
      static_cast<double>(std::uint64_t{1} << parts.odd_bits);
  const double phi = std::atan2(std::sqrt(4.0 * p - 1.0), 2.0 * p - 1.0);

  // A, controlled if requested.
  hadamard_all(control.has_value());

  // S_g(phi): phase on (odd part < odd) [and the control].
  {
    QubitRef flag = pool.alloc();
    emit_less_than_const(c, pool, odd_refs, parts.odd, flag);
    if (control) {
      QubitRef t = pool.alloc();
      c.append(make_gate(GateKind::AndCompute, {t},
                         {*control, ControlSpec{flag, true}}));
      c.append(make_rotation(GateKind::RotZ, phi, t));
      emit_global_phase(c, pool, phi / 2.0);
      c.append(make_gate(GateKind::AndUncompute, {t},
                         {*control, ControlSpec{flag, true}}));
      pool.release(t);
    } else {
      c.append(make_rotation(GateKind::RotZ, phi, flag));
      emit_global_phase(c, pool, phi / 2.0);
    }
    emit_less_than_const(c, pool, odd_refs, parts.odd, flag);
    pool.release(flag);
  }

  // A^dagger (odd part only; the power-of-two bits are already uniform and
  // unaffected by the reflections).
  hadamard_odd();

  // S_0(phi): phase on |0...0> of the odd part [and the control].
  {
    std::vector<ControlSpec> literals;
    for (const auto& q : odd_refs) literals.push_back({q, false});
    if (control) literals.push_back(*control);
    AndChain chain = emit_and_chain(c, pool, literals);
    c.append(make_rotation(GateKind::RotZ, phi, chain.indicator));
    emit_global_phase(c, pool, phi / 2.0);
    uncompute_and_chain(c, pool, chain);
  }

  // A again.
  hadamard_odd();
}

}  // namespace qsynth
