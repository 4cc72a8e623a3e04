#include "emkf/kalman_filter.hpp"

#include <utility>

#include "emkf/errors.hpp"

namespace emkf {
namespace {

// Eigenvalues in (-kClipWindow, 0) are treated as round-off and clipped.
constexpr double kClipWindow = 1e-8;

void clip_small_negative(MatrixXd& P, double& min_eig) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(P);
  min_eig = es.eigenvalues().minCoeff();
  if (min_eig < 0.0 && min_eig > -kClipWindow) {
    const VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
    P = symmetrize(es.eigenvectors() * clipped.asDiagonal() *
                   es.eigenvectors().transpose());
  }
}

}  // namespace

Prediction predict(const FilterState& fs) {
  Prediction p;
  p.x = fs.D_hat * fs.x;
  p.P = symmetrize(fs.D_hat * fs.P * fs.D_hat.transpose() + fs.Q_hat);
  return p;
}

FilterStep update(FilterState& fs, const Prediction& prior, const VectorXd& y) {
  if (y.size() != fs.A.rows()) throw DimensionError("observation must have length k");

  FilterStep step;
  step.x_pred = prior.x;
  step.P_pred = prior.P;
  step.innovation = y - fs.A * prior.x;
  step.S = symmetrize(fs.A * prior.P * fs.A.transpose() + fs.Sigma);

  Eigen::LLT<MatrixXd> llt(step.S);
  if (llt.info() != Eigen::Success) {
    throw FilterError("innovation covariance is not positive definite");
  }
  // K = P Aᵀ S⁻¹  <=>  Kᵀ = S⁻¹ A P  (S, P symmetric)
  const MatrixXd PAt = prior.P * fs.A.transpose();
  step.gain = llt.solve(PAt.transpose()).transpose();

  fs.x = prior.x + step.gain * step.innovation;
  const auto d = prior.x.size();
  fs.P = symmetrize((MatrixXd::Identity(d, d) - step.gain * fs.A) * prior.P);
  return step;
}

KalmanFilter::KalmanFilter(MatrixXd A, MatrixXd Sigma, MatrixXd D_hat,
                           MatrixXd Q_hat) {
  const auto d = A.cols();
  state_.x = VectorXd::Zero(d);
  state_.P = MatrixXd::Identity(d, d);
  state_.A = std::move(A);
  state_.Sigma = std::move(Sigma);
  state_.D_hat = std::move(D_hat);
  state_.Q_hat = std::move(Q_hat);
  validate();
}

KalmanFilter::KalmanFilter(FilterState state) : state_(std::move(state)) {
  validate();
}

void KalmanFilter::validate() const {
  const auto d = state_.x.size();
  const auto k = state_.A.rows();
  if (d < 1 || state_.A.cols() != d) throw DimensionError("A must be k x d");
  if (state_.P.rows() != d || state_.P.cols() != d) throw DimensionError("P must be d x d");
  if (state_.D_hat.rows() != d || state_.D_hat.cols() != d) {
    throw DimensionError("D_hat must be d x d");
  }
  if (state_.Q_hat.rows() != d || state_.Q_hat.cols() != d) {
    throw DimensionError("Q_hat must be d x d");
  }
  if (state_.Sigma.rows() != k || state_.Sigma.cols() != k) {
    throw DimensionError("Sigma must be k x k");
  }
}

const Prediction& KalmanFilter::predict() {
  prior_ = emkf::predict(state_);
  has_prior_ = true;
  return prior_;
}

FilterStep KalmanFilter::update(const VectorXd& y) {
  if (!has_prior_) throw FilterError("update called without a prediction this round");
  FilterStep step = emkf::update(state_, prior_, y);
  has_prior_ = false;
  clip_small_negative(state_.P, last_min_eigenvalue_);
  return step;
}

const VectorXd& KalmanFilter::filter_round(const VectorXd& y) {
  predict();
  update(y);
  return state_.x;
}

void KalmanFilter::set_model(const MatrixXd& D_hat, const MatrixXd& Q_hat) {
  const auto d = state_.x.size();
  if (D_hat.rows() != d || D_hat.cols() != d || Q_hat.rows() != d ||
      Q_hat.cols() != d) {
    throw DimensionError("model must be d x d");
  }
  if (!is_symmetric_psd(Q_hat, 1e-10)) {
    throw FilterError("Q_hat must be symmetric positive semidefinite");
  }
  state_.D_hat = D_hat;
  state_.Q_hat = Q_hat;
}

}  // namespace emkf
