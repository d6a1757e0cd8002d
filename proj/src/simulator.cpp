#include "qsynth/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qsynth {

StateVector StateVector::zero_state(std::size_t num_qubits) {
  return basis_state(num_qubits, 0);
}

StateVector StateVector::basis_state(std::size_t num_qubits, std::uint64_t index) {
  StateVector sv;
  sv.num_qubits = num_qubits;
  sv.amps.assign(std::size_t{1} << num_qubits, cdouble{0.0, 0.0});
  sv.amps.at(index) = 1.0;
  return sv;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

cdouble StateVector::inner(const StateVector& other) const {
  if (amps.size() != other.amps.size()) {
    throw std::invalid_argument("statevector size mismatch");
  }
  cdouble s{0.0, 0.0};
  for (std::size_t i = 0; i < amps.size(); ++i) {
    s += std::conj(amps[i]) * other.amps[i];
  }
  return s;
}

void StateVector::dump(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.write(reinterpret_cast<const char*>(amps.data()),
            static_cast<std::streamsize>(amps.size() * sizeof(cdouble)));
}

StateVector StateVector::load(const std::string& path, std::size_t num_qubits) {
  StateVector sv;
  sv.num_qubits = num_qubits;
  sv.amps.assign(std::size_t{1} << num_qubits, cdouble{0.0, 0.0});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  in.read(reinterpret_cast<char*>(sv.amps.data()),
          static_cast<std::streamsize>(sv.amps.size() * sizeof(cdouble)));
  return sv;
}

namespace {

struct FlatGate {
  GateKind kind;
  std::vector<std::size_t> targets;
  std::uint64_t on_mask = 0;
  std::uint64_t off_mask = 0;
  double angle = 0.0;
  int classical_bit = -1;
  int condition_bit = -1;
};

FlatGate flatten(const Circuit& c, const Gate& g) {
  FlatGate f;
  f.kind = g.kind;
  for (const auto& t : g.targets) f.targets.push_back(c.flat_index(t));
  for (const auto& ctl : g.controls) {
    std::uint64_t bit = std::uint64_t{1} << c.flat_index(ctl.qubit);
    if (ctl.on) {
      f.on_mask |= bit;
    } else {
      f.off_mask |= bit;
    }
  }
  f.angle = g.angle;
  f.classical_bit = g.classical_bit;
  f.condition_bit = g.condition_bit;
  return f;
}

/// Iterates exactly the basis indices with the given bits fixed, using
/// subset enumeration over the complement mask (O(1) per index).
template <typename Fn>
inline void for_each_fixed(std::uint64_t n_states, std::uint64_t fixed_mask,
                           std::uint64_t fixed_value, Fn&& fn) {
  const std::uint64_t free_mask = (n_states - 1) & ~fixed_mask;
  std::uint64_t s = 0;
  while (true) {
    fn(s | fixed_value);
    s = (s - free_mask) & free_mask;
    if (s == 0) break;
  }
}

void apply_single(std::vector<cdouble>& amps, const FlatGate& g,
                  const cdouble u00, const cdouble u01, const cdouble u10,
                  const cdouble u11) {
  const std::uint64_t tbit = std::uint64_t{1} << g.targets[0];
  const std::uint64_t fixed = tbit | g.on_mask | g.off_mask;
  for_each_fixed(amps.size(), fixed, g.on_mask, [&](std::uint64_t i) {
    const std::uint64_t j = i | tbit;
    const cdouble a = amps[i];
    const cdouble b = amps[j];
    amps[i] = u00 * a + u01 * b;
    amps[j] = u10 * a + u11 * b;
  });
}

void apply_flip(std::vector<cdouble>& amps, const FlatGate& g) {
  const std::uint64_t tbit = std::uint64_t{1} << g.targets[0];
  const std::uint64_t fixed = tbit | g.on_mask | g.off_mask;
  for_each_fixed(amps.size(), fixed, g.on_mask, [&](std::uint64_t i) {
    std::swap(amps[i], amps[i | tbit]);
  });
}

void apply_phase_on_one(std::vector<cdouble>& amps, const FlatGate& g,
                        cdouble phase) {
  const std::uint64_t tbit = std::uint64_t{1} << g.targets[0];
  const std::uint64_t fixed = tbit | g.on_mask | g.off_mask;
  for_each_fixed(amps.size(), fixed, g.on_mask | tbit,
                 [&](std::uint64_t i) { amps[i] *= phase; });
}

void apply_swap(std::vector<cdouble>& amps, const FlatGate& g) {
  const std::uint64_t abit = std::uint64_t{1} << g.targets[0];
  const std::uint64_t bbit = std::uint64_t{1} << g.targets[1];
  const std::uint64_t fixed = abit | bbit | g.on_mask | g.off_mask;
  for_each_fixed(amps.size(), fixed, g.on_mask | abit, [&](std::uint64_t i) {
    std::swap(amps[i], amps[(i & ~abit) | bbit]);
  });
}

void apply_gate_to_amps(std::vector<cdouble>& amps, const FlatGate& g) {
  static const cdouble kI{0.0, 1.0};
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (g.kind) {
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli:
    case GateKind::AndCompute:
    case GateKind::AndUncompute:
      apply_flip(amps, g);
      break;
    case GateKind::Y:
      apply_single(amps, g, 0.0, -kI, kI, 0.0);
      break;
    case GateKind::Z:
    case GateKind::CZ:
      apply_phase_on_one(amps, g, -1.0);
      break;
    case GateKind::S:
      apply_phase_on_one(amps, g, kI);
      break;
    case GateKind::Sdg:
      apply_phase_on_one(amps, g, -kI);
      break;
    case GateKind::T:
      apply_phase_on_one(amps, g, std::exp(kI * (M_PI / 4.0)));
      break;
    case GateKind::Tdg:
      apply_phase_on_one(amps, g, std::exp(-kI * (M_PI / 4.0)));
      break;
    case GateKind::H:
      apply_single(amps, g, inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2);
      break;
    case GateKind::RotZ: {
      const cdouble p0 = std::exp(-kI * (g.angle / 2.0));
      const cdouble p1 = std::exp(kI * (g.angle / 2.0));
      apply_single(amps, g, p0, 0.0, 0.0, p1);
      break;
    }
    case GateKind::RotY: {
      const double c = std::cos(g.angle / 2.0);
      const double s = std::sin(g.angle / 2.0);
      apply_single(amps, g, c, -s, s, c);
      break;
    }
    case GateKind::Swap:
      apply_swap(amps, g);
      break;
    case GateKind::Measure:
      throw std::logic_error("measure must be handled by branch enumeration");
  }
}

void check_norm_or_throw(const StateVector& sv, const SimOptions& options,
                         std::size_t gate_index) {
  if (!options.check_norm) return;
  if (std::abs(sv.norm() - 1.0) > options.norm_tol) {
    throw std::logic_error("norm drifted after gate " +
                           std::to_string(gate_index));
  }
}

}  // namespace

void apply_circuit(const Circuit& circuit, StateVector& state,
                   const SimOptions& options) {
  if (circuit.num_qubits() > options.qubit_cap) {
    throw std::invalid_argument("circuit exceeds simulator qubit cap");
  }
  if (state.num_qubits != circuit.num_qubits()) {
    throw std::invalid_argument("state size does not match circuit");
  }
  std::size_t gi = 0;
  for (const auto& g : circuit.gates()) {
    if (g.kind == GateKind::Measure || g.condition_bit >= 0) {
      throw std::logic_error("apply_circuit cannot handle measurements");
    }
    apply_gate_to_amps(state.amps, flatten(circuit, g));
    check_norm_or_throw(state, options, gi);
    ++gi;
  }
}

StateVector simulate(const Circuit& circuit, StateVector initial,
                     const SimOptions& options) {
  apply_circuit(circuit, initial, options);
  return initial;
}

std::vector<SimBranch> simulate_branches(const Circuit& circuit,
                                         StateVector initial,
                                         const SimOptions& options) {
  if (circuit.num_qubits() > options.qubit_cap) {
    throw std::invalid_argument("circuit exceeds simulator qubit cap");
  }
  std::vector<SimBranch> branches;
  branches.push_back(SimBranch{std::move(initial), 1.0, {}});
  std::size_t gi = 0;
  for (const auto& g : circuit.gates()) {
    FlatGate fg = flatten(circuit, g);
    if (g.kind == GateKind::Measure) {
      std::vector<SimBranch> next;
      const std::uint64_t tbit = std::uint64_t{1} << fg.targets[0];
      for (auto& br : branches) {
        double p1 = 0.0;
        for (std::uint64_t i = 0; i < br.state.amps.size(); ++i) {
          if (i & tbit) p1 += std::norm(br.state.amps[i]);
        }
        for (int outcome : {0, 1}) {
          double p = outcome ? p1 : 1.0 - p1;
          if (p < 1e-14) continue;
          SimBranch nb;
          nb.probability = br.probability * p;
          nb.bits = br.bits;
          nb.bits[g.classical_bit] = outcome;
          nb.state.num_qubits = br.state.num_qubits;
          nb.state.amps.assign(br.state.amps.size(), cdouble{0.0, 0.0});
          const double scale = 1.0 / std::sqrt(p);
          for (std::uint64_t i = 0; i < br.state.amps.size(); ++i) {
            bool is_one = (i & tbit) != 0;
            if (is_one == (outcome == 1)) {
              nb.state.amps[i] = br.state.amps[i] * scale;
            }
          }
          next.push_back(std::move(nb));
        }
      }
      branches = std::move(next);
    } else {
      for (auto& br : branches) {
        if (fg.condition_bit >= 0) {
          auto it = br.bits.find(fg.condition_bit);
          int v = it == br.bits.end() ? 0 : it->second;
          if (v == 0) continue;
        }
        apply_gate_to_amps(br.state.amps, fg);
        check_norm_or_throw(br.state, options, gi);
      }
    }
    ++gi;
  }
  return branches;
}

Eigen::MatrixXcd extract_unitary(const Circuit& circuit,
                                 const std::vector<std::size_t>& subset,
                                 const std::map<std::size_t, int>& fixed_bits,
                                 const SimOptions& options) {
  if (subset.size() > 12) {
    throw std::invalid_argument("extract_unitary limited to 12 qubits");
  }
  const std::size_t n = circuit.num_qubits();
  const std::size_t dim = std::size_t{1} << subset.size();
  std::uint64_t fixed_pattern = 0;
  for (const auto& [q, v] : fixed_bits) {
    if (v) fixed_pattern |= std::uint64_t{1} << q;
  }
  std::uint64_t subset_mask = 0;
  for (auto q : subset) subset_mask |= std::uint64_t{1} << q;

  Eigen::MatrixXcd u(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::uint64_t idx = fixed_pattern;
    for (std::size_t b = 0; b < subset.size(); ++b) {
      if (col & (std::size_t{1} << b)) idx |= std::uint64_t{1} << subset[b];
    }
    StateVector out = simulate(circuit, StateVector::basis_state(n, idx), options);
    for (std::uint64_t i = 0; i < out.amps.size(); ++i) {
      if (std::norm(out.amps[i]) < 1e-20) continue;
      if ((i & ~subset_mask) != (fixed_pattern & ~subset_mask)) {
        throw std::logic_error("non-unitary fragment: leakage from column " +
                               std::to_string(col));
      }
    }
    for (std::size_t row = 0; row < dim; ++row) {
      std::uint64_t ridx = fixed_pattern;
      for (std::size_t b = 0; b < subset.size(); ++b) {
        if (row & (std::size_t{1} << b)) ridx |= std::uint64_t{1} << subset[b];
      }
      u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
          out.amps[ridx];
    }
  }
  Eigen::MatrixXcd should_be_identity = u.adjoint() * u;
  if (!should_be_identity.isApprox(
          Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim),
                                     static_cast<Eigen::Index>(dim)),
          1e-10)) {
    throw std::logic_error("extracted operator is not unitary");
  }
  return u;
}

}  // namespace qsynth
