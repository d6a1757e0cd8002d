#include "qsynth/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace qsynth {

namespace {

const std::pair<GateKind, const char*> kKindNames[] = {
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::H, "H"},
    {GateKind::S, "S"},
    {GateKind::Sdg, "Sdg"},
    {GateKind::T, "T"},
    {GateKind::Tdg, "Tdg"},
    {GateKind::CNOT, "CNOT"},
    {GateKind::CZ, "CZ"},
    {GateKind::Swap, "Swap"},
    {GateKind::Toffoli, "Toffoli"},
    {GateKind::AndCompute, "AndCompute"},
    {GateKind::AndUncompute, "AndUncompute"},
    {GateKind::RotZ, "RotZ"},
    {GateKind::RotY, "RotY"},
    {GateKind::Measure, "Measure"},
};

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* gate_kind_name(GateKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  throw std::logic_error("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name) {
  for (const auto& [k, n] : kKindNames) {
    if (name == n) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + name);
}

Gate make_gate(GateKind kind, std::vector<QubitRef> targets,
               std::vector<ControlSpec> controls) {
  Gate g;
  g.kind = kind;
  g.targets = std::move(targets);
  g.controls = std::move(controls);
  return g;
}

Gate make_rotation(GateKind kind, double angle, QubitRef target,
                   std::vector<ControlSpec> controls) {
  if (kind != GateKind::RotZ && kind != GateKind::RotY) {
    throw std::invalid_argument("make_rotation requires RotZ or RotY");
  }
  Gate g;
  g.kind = kind;
  g.angle = angle;
  g.targets = {std::move(target)};
  g.controls = std::move(controls);
  return g;
}

Gate make_measure(QubitRef target, int classical_bit) {
  Gate g;
  g.kind = GateKind::Measure;
  g.targets = {std::move(target)};
  g.classical_bit = classical_bit;
  return g;
}

std::int64_t CostModel::default_t_per_rotation(double eps_synth) {
  if (!(eps_synth > 0.0 && eps_synth < 1.0)) {
    throw std::invalid_argument("eps_synth must be in (0,1)");
  }
  return static_cast<std::int64_t>(
             std::ceil(1.15 * std::log2(1.0 / eps_synth))) +
         9;
}

Circuit::Circuit(const std::vector<std::pair<std::string, std::size_t>>& registers) {
  if (registers.empty()) {
    throw std::invalid_argument("circuit needs at least one register");
  }
  for (const auto& [name, size] : registers) add_register(name, size);
}

void Circuit::add_register(const std::string& name, std::size_t size) {
  if (size == 0) throw std::invalid_argument("zero-size register: " + name);
  if (has_register(name)) {
    throw std::invalid_argument("duplicate register name: " + name);
  }
  registers_.emplace_back(name, size);
  num_qubits_ += size;
  and_live_flags_.resize(num_qubits_, false);
}

bool Circuit::has_register(const std::string& name) const {
  for (const auto& [n, s] : registers_) {
    if (n == name) return true;
  }
  return false;
}

std::size_t Circuit::register_size(const std::string& name) const {
  for (const auto& [n, s] : registers_) {
    if (n == name) return s;
  }
  throw std::invalid_argument("no such register: " + name);
}

std::size_t Circuit::flat_index(const QubitRef& ref) const {
  std::size_t base = 0;
  for (const auto& [n, s] : registers_) {
    if (n == ref.reg) {
      if (ref.offset >= s) {
        throw std::out_of_range("qubit offset " + std::to_string(ref.offset) +
                                " out of range for register " + ref.reg);
      }
      return base + ref.offset;
    }
    base += s;
  }
  throw std::invalid_argument("no such register: " + ref.reg);
}

void Circuit::validate(const Gate& gate) const {
  std::vector<std::size_t> seen;
  for (const auto& t : gate.targets) seen.push_back(flat_index(t));
  for (const auto& c : gate.controls) seen.push_back(flat_index(c.qubit));
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("gate targets/controls overlap");
  }

  const std::size_t nt = gate.targets.size();
  const std::size_t nc = gate.controls.size();
  switch (gate.kind) {
    case GateKind::Swap:
      if (nt != 2) throw std::invalid_argument("Swap needs 2 targets");
      if (nc > 1) throw std::invalid_argument("decompose multi-controlled Swap via AND gadgets");
      break;
    case GateKind::CNOT:
    case GateKind::CZ:
      if (nt != 1 || nc != 1) {
        throw std::invalid_argument("CNOT/CZ need 1 target and 1 control");
      }
      break;
    case GateKind::Toffoli:
    case GateKind::AndCompute:
    case GateKind::AndUncompute:
      if (nt != 1 || nc != 2) {
        throw std::invalid_argument("AND/Toffoli need 1 target and 2 controls");
      }
      break;
    case GateKind::Measure:
      if (nt != 1 || nc != 0 || gate.classical_bit < 0) {
        throw std::invalid_argument("Measure needs 1 target and a classical bit");
      }
      break;
    default:
      if (nt != 1) throw std::invalid_argument("gate needs exactly 1 target");
      if (nc > 1) {
        throw std::invalid_argument("decompose multi-controlled gates via AND gadgets");
      }
      break;
  }
}

void Circuit::append(const Gate& gate) {
  validate(gate);
  switch (gate.kind) {
    case GateKind::T:
    case GateKind::Tdg:
      t_count_ += 1;
      break;
    case GateKind::AndCompute: {
      t_count_ += 4;
      and_count_ += 1;
      std::size_t idx = flat_index(gate.targets[0]);
      if (!and_live_flags_[idx]) {
        and_live_flags_[idx] = true;
        live_and_ += 1;
        peak_and_live_ = std::max(peak_and_live_, live_and_);
      }
      break;
    }
    case GateKind::AndUncompute: {
      std::size_t idx = flat_index(gate.targets[0]);
      if (and_live_flags_[idx]) {
        and_live_flags_[idx] = false;
        live_and_ -= 1;
      }
      break;
    }
    case GateKind::Toffoli:
      toffoli_count_ += 1;
      break;
    case GateKind::RotZ:
    case GateKind::RotY:
      rotation_count_ += 1;
      break;
    case GateKind::Measure:
      measure_count_ += 1;
      num_classical_bits_ = std::max(num_classical_bits_, gate.classical_bit + 1);
      break;
    default:
      break;
  }
  if (gate.condition_bit >= 0) {
    num_classical_bits_ = std::max(num_classical_bits_, gate.condition_bit + 1);
  }
  gates_.push_back(gate);
}

std::int64_t Circuit::recount_t() const {
  std::int64_t total = 0;
  for (const auto& g : gates_) {
    if (g.kind == GateKind::T || g.kind == GateKind::Tdg) total += 1;
    if (g.kind == GateKind::AndCompute) total += 4;
  }
  return total;
}

Circuit Circuit::inverted() const {
  Circuit inv(registers_);
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    Gate g = *it;
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
        throw std::logic_error("cannot invert a circuit with measurements");
      default:
        break;
    }
    inv.append(g);
  }
  return inv;
}

std::string Circuit::serialize() const {
  std::ostringstream out;
  out << "# t=" << t_count_ << " rot=" << rotation_count_
      << " toff=" << toffoli_count_ << " and=" << and_count_
      << " peak_anc=" << peak_and_live_ << "\n";
  for (const auto& [name, size] : registers_) {
    out << "reg " << name << " " << size << "\n";
  }
  for (const auto& g : gates_) {
    if (g.condition_bit >= 0) {
      out << "cgate c" << g.condition_bit << " ";
    } else {
      out << "gate ";
    }
    out << gate_kind_name(g.kind);
    if (g.kind == GateKind::RotZ || g.kind == GateKind::RotY) {
      out << "(" << format_double(g.angle) << ")";
    }
    for (const auto& t : g.targets) {
      out << " " << t.reg << "[" << t.offset << "]";
    }
    if (g.kind == GateKind::Measure) {
      out << " -> c" << g.classical_bit;
    }
    if (!g.controls.empty()) {
      out << " ?";
      for (const auto& c : g.controls) {
        out << " " << c.qubit.reg << "[" << c.qubit.offset << "]:" << (c.on ? 1 : 0);
      }
    }
    out << "\n";
  }
  return out.str();
}

namespace {

QubitRef parse_ref(const std::string& token) {
  auto lb = token.find('[');
  auto rb = token.find(']');
  if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
    throw std::invalid_argument("bad qubit reference: " + token);
  }
  QubitRef ref;
  ref.reg = token.substr(0, lb);
  ref.offset = std::stoul(token.substr(lb + 1, rb - lb - 1));
  return ref;
}

}  // namespace

Circuit Circuit::parse(const std::string& text) {
  Circuit c;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "reg") {
      std::string name;
      std::size_t size;
      ls >> name >> size;
      c.add_register(name, size);
      continue;
    }
    Gate g;
    if (word == "cgate") {
      std::string bit;
      ls >> bit;
      if (bit.empty() || bit[0] != 'c') {
        throw std::invalid_argument("bad classical bit: " + bit);
      }
      g.condition_bit = std::stoi(bit.substr(1));
      ls >> word;
    } else if (word != "gate") {
      throw std::invalid_argument("bad line in circuit text: " + line);
    }
    if (g.condition_bit < 0) ls >> word;
    std::string kind_tok = word;
    auto paren = kind_tok.find('(');
    if (paren != std::string::npos) {
      g.kind = gate_kind_from_name(kind_tok.substr(0, paren));
      auto close = kind_tok.find(')');
      g.angle = std::stod(kind_tok.substr(paren + 1, close - paren - 1));
    } else {
      g.kind = gate_kind_from_name(kind_tok);
    }
    bool in_controls = false;
    while (ls >> word) {
      if (word == "?") {
        in_controls = true;
        continue;
      }
      if (word == "->") {
        ls >> word;
        g.classical_bit = std::stoi(word.substr(1));
        continue;
      }
      if (in_controls) {
        auto colon = word.rfind(':');
        ControlSpec cs;
        cs.qubit = parse_ref(word.substr(0, colon));
        cs.on = word.substr(colon + 1) == "1";
        g.controls.push_back(cs);
      } else {
        g.targets.push_back(parse_ref(word));
      }
    }
    c.append(g);
  }
  return c;
}

std::int64_t total_t_count(const Circuit& circuit, const CostModel& model,
                           double eps_synth) {
  std::int64_t total = circuit.t_count();
  total += circuit.toffoli_count() * model.toffoli_t_cost;
  if (circuit.rotation_count() > 0) {
    total += circuit.rotation_count() * model.t_per_rotation(eps_synth);
  }
  return total;
}

}  // namespace qsynth
