#include "emkf/sysid_em.hpp"

#include "emkf/errors.hpp"

namespace emkf {

SysIdAccumulator::SysIdAccumulator(int d, SysIdOptions options)
    : d_(d), options_(options) {
  if (d < 1) throw DimensionError("d must be >= 1");
  if (options_.window < 1) throw std::invalid_argument("window length must be >= 1");
  if (options_.ridge < 0.0) throw std::invalid_argument("ridge must be >= 0");
  if (options_.q_min < 0.0) throw std::invalid_argument("q_min must be >= 0");
  if (options_.min_pairs < 0) options_.min_pairs = d;
  psi_ = MatrixXd::Zero(d, d);
  x_gram_ = MatrixXd::Zero(d, d);
  y_gram_ = MatrixXd::Zero(d, d);
  x_prev_ = VectorXd::Zero(d);
}

void SysIdAccumulator::push(const VectorXd& x_hat) {
  if (x_hat.size() != d_) throw DimensionError("context must have length d");
  if (has_prev_) {
    psi_.noalias() += x_hat * x_prev_.transpose();
    x_gram_.noalias() += x_prev_ * x_prev_.transpose();
    y_gram_.noalias() += x_hat * x_hat.transpose();
    ++pairs_;
  }
  x_prev_ = x_hat;
  has_prev_ = true;
}

ModelEstimate SysIdAccumulator::solve() const {
  if (pairs_ < 1) throw InsufficientDataError("no transition pairs in the current window");

  const MatrixXd regularized =
      x_gram_ + options_.ridge * MatrixXd::Identity(d_, d_);
  // D̂ᵀ = (X + λI)⁻¹ Ψᵀ, X + λI symmetric.
  Eigen::LDLT<MatrixXd> ldlt(regularized);
  MatrixXd d_hat = ldlt.solve(psi_.transpose()).transpose();
  if (ldlt.info() != Eigen::Success || !d_hat.allFinite()) {
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(regularized);
    d_hat = cod.solve(psi_.transpose()).transpose();
  }

  const MatrixXd q_raw = (y_gram_ - d_hat * psi_.transpose()) / pairs_;

  ModelEstimate out;
  out.D_hat = std::move(d_hat);
  out.Q_hat = psd_project(q_raw, options_.q_min);
  out.window_index = windows_ + 1;
  return out;
}

std::optional<ModelEstimate> SysIdAccumulator::maybe_mstep(int t) {
  if (t < 1 || t % options_.window != 0 || pairs_ < options_.min_pairs) {
    return std::nullopt;
  }
  ModelEstimate est = solve();
  psi_.setZero();
  x_gram_.setZero();
  y_gram_.setZero();
  pairs_ = 0;
  ++windows_;
  return est;
}

}  // namespace emkf
