#pragma once

// Test-only reference simulator: builds each gate as a dense matrix via
// Kronecker products and multiplies it into the state. Deliberately
// independent of the production amplitude-update path.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qsynth/circuit.hpp"
#include "qsynth/simulator.hpp"

namespace qsynth_test {

using qsynth::cdouble;

inline Eigen::Matrix2cd single_qubit_matrix(qsynth::GateKind kind,
                                            double angle) {
  using qsynth::GateKind;
  const cdouble i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (kind) {
    case GateKind::X:
    case GateKind::CNOT:
    case GateKind::Toffoli:
    case GateKind::AndCompute:
    case GateKind::AndUncompute:
      m << 0, 1, 1, 0;
      break;
    case GateKind::Y:
      m << 0, -i, i, 0;
      break;
    case GateKind::Z:
    case GateKind::CZ:
      m << 1, 0, 0, -1;
      break;
    case GateKind::H:
      m << 1, 1, 1, -1;
      m /= std::sqrt(2.0);
      break;
    case GateKind::S:
      m << 1, 0, 0, i;
      break;
    case GateKind::Sdg:
      m << 1, 0, 0, -i;
      break;
    case GateKind::T:
      m << 1, 0, 0, std::exp(i * (M_PI / 4));
      break;
    case GateKind::Tdg:
      m << 1, 0, 0, std::exp(-i * (M_PI / 4));
      break;
    case GateKind::RotZ:
      m << std::exp(-i * (angle / 2)), 0, 0, std::exp(i * (angle / 2));
      break;
    case GateKind::RotY:
      m << std::cos(angle / 2), -std::sin(angle / 2), std::sin(angle / 2),
          std::cos(angle / 2);
      break;
    default:
      throw std::invalid_argument("unsupported kind in naive simulator");
  }
  return m;
}

/// Full 2^n x 2^n matrix for one gate over the circuit's flat qubit order.
inline Eigen::MatrixXcd naive_gate_matrix(const qsynth::Circuit& c,
                                          const qsynth::Gate& g) {
  const std::size_t n = c.num_qubits();
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);

  std::vector<std::size_t> targets;
  for (const auto& t : g.targets) targets.push_back(c.flat_index(t));
  std::vector<std::pair<std::size_t, bool>> controls;
  for (const auto& ctl : g.controls) {
    controls.emplace_back(c.flat_index(ctl.qubit), ctl.on);
  }

  for (std::size_t col = 0; col < dim; ++col) {
    bool fire = true;
    for (const auto& [q, on] : controls) {
      const bool bit = (col >> q) & 1;
      if (bit != on) fire = false;
    }
    if (!fire) {
      u(col, col) += 1.0;
      continue;
    }
    if (g.kind == qsynth::GateKind::Swap) {
      const std::size_t a = targets[0], b = targets[1];
      const bool ba = (col >> a) & 1, bb = (col >> b) & 1;
      std::size_t row = col;
      if (ba != bb) row ^= (std::size_t{1} << a) | (std::size_t{1} << b);
      u(row, col) += 1.0;
      continue;
    }
    Eigen::Matrix2cd m = single_qubit_matrix(g.kind, g.angle);
    const std::size_t t = targets[0];
    const bool bit = (col >> t) & 1;
    for (int row_bit = 0; row_bit < 2; ++row_bit) {
      std::size_t row = (col & ~(std::size_t{1} << t)) |
                        (static_cast<std::size_t>(row_bit) << t);
      u(row, col) += m(row_bit, bit ? 1 : 0);
    }
  }
  return u;
}

inline qsynth::StateVector naive_simulate(const qsynth::Circuit& c,
                                          qsynth::StateVector state) {
  const std::size_t dim = state.amps.size();
  Eigen::VectorXcd v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = state.amps[i];
  for (const auto& g : c.gates()) {
    v = naive_gate_matrix(c, g) * v;
  }
  for (std::size_t i = 0; i < dim; ++i) state.amps[i] = v[i];
  return state;
}

}  // namespace qsynth_test
