#pragma once

#include <vector>

#include <Eigen/Dense>

#include "qsynth/models.hpp"
#include "qsynth/simulator.hpp"

namespace qsynth {

/// Matrix-free application of the abstract walk W = (2|L><L| - 1) SELECT
/// built from an LCU term table. State vectors are indexed sel-major:
/// component (l, b) sits at l * 2^n + b.
class LcuWalker {
 public:
  explicit LcuWalker(const LcuHamiltonian& lcu);

  std::size_t sel_dim() const { return sel_dim_; }
  std::size_t sys_dim() const { return sys_dim_; }
  std::size_t dim() const { return sel_dim_ * sys_dim_; }

  Eigen::VectorXcd prepared_with(const Eigen::VectorXcd& system_state) const;
  void apply_select(Eigen::VectorXcd& state) const;
  void apply_reflection(Eigen::VectorXcd& state) const;
  void apply_walk(Eigen::VectorXcd& state) const;

 private:
  struct PauliAction {
    std::uint64_t flip_mask = 0;
    std::vector<cdouble> phase;  // phase per system basis state
  };
  std::size_t sel_dim_ = 0;
  std::size_t sys_dim_ = 0;
  std::vector<double> amplitudes_;  // sqrt(w_l / lambda), padded with zeros
  std::vector<PauliAction> actions_;
};

/// Per-eigenstate invariant-subspace check of the walk built from an LCU
/// table: verifies <L,k| W |L,k> = E_k / lambda and that W acts on
/// span{|L,k>, |phi_k>} as the rotation with phases +/- arccos(E_k/lambda).
struct WalkBlockCheck {
  double energy = 0.0;
  double diag = 0.0;            // <L,k|W|L,k>
  double encode_error = 0.0;    // |diag - E_k/lambda|
  double phase = 0.0;           // arccos(diag)
  double phase_error = 0.0;     // |arccos(diag) - arccos(E_k/lambda)|
  double subspace_residual = 0.0;
};
std::vector<WalkBlockCheck> walk_block_checks(const LcuHamiltonian& lcu);

/// Dense route: diagonalizes the full walk and matches every eigenvalue of H
/// against a walk eigenphase pair. Requires sel_dim * sys_dim <= 4096.
struct WalkSpectrumCheck {
  std::vector<double> energies;
  std::vector<double> phase_errors;  // per energy, best match to +/- arccos
  double max_error = 0.0;
};
WalkSpectrumCheck walk_eigenphases(const LcuHamiltonian& lcu);

/// Dense matrices of the abstract SELECT and walk (for small oracles).
Eigen::MatrixXcd lcu_select_matrix(const LcuHamiltonian& lcu);
Eigen::MatrixXcd lcu_walk_matrix(const LcuHamiltonian& lcu);

}  // namespace qsynth
