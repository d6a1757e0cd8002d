#include "qsynth/walk.hpp"

#include <cmath>
#include <stdexcept>

namespace qsynth {

LcuWalker::LcuWalker(const LcuHamiltonian& lcu) {
  const std::size_t L = lcu.terms.size();
  if (L == 0) throw std::invalid_argument("empty LCU");
  std::size_t sel_bits = 0;
  while ((std::size_t{1} << sel_bits) < L) ++sel_bits;
  sel_dim_ = std::size_t{1} << sel_bits;
  sys_dim_ = std::size_t{1} << lcu.num_qubits;

  amplitudes_.assign(sel_dim_, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    amplitudes_[l] = std::sqrt(lcu.terms[l].weight / lcu.lambda);
  }

  const cdouble kI{0.0, 1.0};
  actions_.resize(sel_dim_);
  for (std::size_t l = 0; l < sel_dim_; ++l) {
    PauliAction action;
    action.phase.assign(sys_dim_, cdouble{1.0, 0.0});
    if (l < L) {
      const LcuTerm& term = lcu.terms[l];
      for (const auto& [q, kind] : term.paulis) {
        const std::uint64_t bit = std::uint64_t{1} << q;
        if (kind == 'X' || kind == 'Y') action.flip_mask ^= bit;
        if (kind != 'I') {
          for (std::size_t b = 0; b < sys_dim_; ++b) {
            const bool set = b & bit;
            if (kind == 'Y') action.phase[b] *= set ? -kI : kI;
            if (kind == 'Z' && set) action.phase[b] = -action.phase[b];
          }
        }
      }
      if (term.sign < 0) {
        for (auto& ph : action.phase) ph = -ph;
      }
    }
    actions_[l] = std::move(action);
  }
}

Eigen::VectorXcd LcuWalker::prepared_with(
    const Eigen::VectorXcd& system_state) const {
  if (static_cast<std::size_t>(system_state.size()) != sys_dim_) {
    throw std::invalid_argument("system state dimension mismatch");
  }
  Eigen::VectorXcd state = Eigen::VectorXcd::Zero(dim());
  for (std::size_t l = 0; l < sel_dim_; ++l) {
    if (amplitudes_[l] == 0.0) continue;
    for (std::size_t b = 0; b < sys_dim_; ++b) {
      state[static_cast<Eigen::Index>(l * sys_dim_ + b)] =
          amplitudes_[l] * system_state[static_cast<Eigen::Index>(b)];
    }
  }
  return state;
}

void LcuWalker::apply_select(Eigen::VectorXcd& state) const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(state.size());
  for (std::size_t l = 0; l < sel_dim_; ++l) {
    const PauliAction& a = actions_[l];
    const std::size_t base = l * sys_dim_;
    for (std::size_t b = 0; b < sys_dim_; ++b) {
      const std::size_t target = base + (b ^ a.flip_mask);
      out[static_cast<Eigen::Index>(target)] +=
          a.phase[b] * state[static_cast<Eigen::Index>(base + b)];
    }
  }
  state = std::move(out);
}

void LcuWalker::apply_reflection(Eigen::VectorXcd& state) const {
  // (2|L><L| - 1) (x) I, with |L> the amplitude vector over the selector.
  for (std::size_t b = 0; b < sys_dim_; ++b) {
    cdouble overlap{0.0, 0.0};
    for (std::size_t l = 0; l < sel_dim_; ++l) {
      overlap +=
          amplitudes_[l] * state[static_cast<Eigen::Index>(l * sys_dim_ + b)];
    }
    for (std::size_t l = 0; l < sel_dim_; ++l) {
      auto& amp = state[static_cast<Eigen::Index>(l * sys_dim_ + b)];
      amp = 2.0 * amplitudes_[l] * overlap - amp;
    }
  }
}

void LcuWalker::apply_walk(Eigen::VectorXcd& state) const {
  apply_select(state);
  apply_reflection(state);
}

std::vector<WalkBlockCheck> walk_block_checks(const LcuHamiltonian& lcu) {
  LcuWalker walker(lcu);
  Eigen::MatrixXcd h = lcu_dense_matrix(lcu, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);

  std::vector<WalkBlockCheck> checks;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    WalkBlockCheck chk;
    chk.energy = es.eigenvalues()[k];
    const double ratio = chk.energy / lcu.lambda;

    Eigen::VectorXcd v0 = walker.prepared_with(es.eigenvectors().col(k));
    Eigen::VectorXcd w1 = v0;
    walker.apply_walk(w1);
    const cdouble diag = v0.dot(w1);
    chk.diag = diag.real();
    chk.encode_error = std::abs(diag - cdouble{ratio, 0.0});
    chk.phase = std::acos(std::clamp(chk.diag, -1.0, 1.0));
    chk.phase_error =
        std::abs(chk.phase - std::acos(std::clamp(ratio, -1.0, 1.0)));

    Eigen::VectorXcd resid = w1 - diag * v0;
    const double s = resid.norm();
    if (s > 1e-12) {
      Eigen::VectorXcd phi = resid / s;
      Eigen::VectorXcd w2 = phi;
      walker.apply_walk(w2);
      // W restricted to span{v0, phi} should be [[a, -s],[s, a]].
      const cdouble w2_v0 = v0.dot(w2);
      const cdouble w2_phi = phi.dot(w2);
      Eigen::VectorXcd leftover = w2 - w2_v0 * v0 - w2_phi * phi;
      chk.subspace_residual =
          std::max({leftover.norm(), std::abs(w2_v0 - cdouble{-s, 0.0}),
                    std::abs(w2_phi - diag)});
    }
    checks.push_back(chk);
  }
  return checks;
}

Eigen::MatrixXcd lcu_select_matrix(const LcuHamiltonian& lcu) {
  LcuWalker walker(lcu);
  const std::size_t dim = walker.dim();
  if (dim > 4096) throw std::invalid_argument("select matrix too large");
  Eigen::MatrixXcd s(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e[static_cast<Eigen::Index>(col)] = 1.0;
    walker.apply_select(e);
    s.col(static_cast<Eigen::Index>(col)) = e;
  }
  return s;
}

Eigen::MatrixXcd lcu_walk_matrix(const LcuHamiltonian& lcu) {
  LcuWalker walker(lcu);
  const std::size_t dim = walker.dim();
  if (dim > 4096) throw std::invalid_argument("walk matrix too large");
  Eigen::MatrixXcd w(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(dim);
    e[static_cast<Eigen::Index>(col)] = 1.0;
    walker.apply_walk(e);
    w.col(static_cast<Eigen::Index>(col)) = e;
  }
  return w;
}

WalkSpectrumCheck walk_eigenphases(const LcuHamiltonian& lcu) {
  Eigen::MatrixXcd w = lcu_walk_matrix(lcu);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ws(w);
  Eigen::MatrixXcd h = lcu_dense_matrix(lcu, false);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hs(h);

  std::vector<double> walk_phases;
  for (Eigen::Index i = 0; i < ws.eigenvalues().size(); ++i) {
    walk_phases.push_back(std::arg(ws.eigenvalues()[i]));
  }

  WalkSpectrumCheck check;
  for (Eigen::Index k = 0; k < hs.eigenvalues().size(); ++k) {
    const double energy = hs.eigenvalues()[k];
    const double target =
        std::acos(std::clamp(energy / lcu.lambda, -1.0, 1.0));
    double best = 1e300;
    for (double phi : walk_phases) {
      best = std::min(best, std::abs(std::abs(phi) - target));
    }
    check.energies.push_back(energy);
    check.phase_errors.push_back(best);
    check.max_error = std::max(check.max_error, best);
  }
  return check;
}

}  // namespace qsynth
