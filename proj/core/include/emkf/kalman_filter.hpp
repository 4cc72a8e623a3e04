#pragma once

#include "emkf/linalg.hpp"

namespace emkf {

/// Filtered estimate (x_{t|t}, P_{t|t}) plus the model it filters with.
/// A and Σ are the known canonical observation model; D̂, Q̂ are swapped in by
/// the M-step.
struct FilterState {
  VectorXd x;        // x_{t|t}
  MatrixXd P;        // P_{t|t}
  MatrixXd D_hat;
  MatrixXd Q_hat;
  MatrixXd A;
  MatrixXd Sigma;
};

struct Prediction {
  VectorXd x;  // x_{t|t-1}
  MatrixXd P;  // P_{t|t-1}
};

/// Diagnostics of one measurement update.
struct FilterStep {
  VectorXd x_pred;
  MatrixXd P_pred;
  VectorXd innovation;  // e_t
  MatrixXd S;           // innovation covariance
  MatrixXd gain;        // K_t, d×k
};

/// Prediction step: x = D̂ x, P = D̂ P D̂ᵀ + Q̂ (symmetrized).
Prediction predict(const FilterState& fs);

/// Measurement update against a prediction. Writes the posterior into `fs`.
/// Throws FilterError when the innovation covariance is not positive
/// definite.
FilterStep update(FilterState& fs, const Prediction& prior, const VectorXd& y);

/// Online Kalman filter. Starts from x_{0|0} = 0, P_{0|0} = I unless a full
/// state is supplied.
class KalmanFilter {
 public:
  KalmanFilter(MatrixXd A, MatrixXd Sigma, MatrixXd D_hat, MatrixXd Q_hat);
  explicit KalmanFilter(FilterState state);

  const Prediction& predict();
  /// Requires predict() earlier in the same round.
  FilterStep update(const VectorXd& y);
  /// predict then update; returns x_{t|t}.
  const VectorXd& filter_round(const VectorXd& y);

  /// Installs a new (D̂, Q̂); the filtered mean and covariance carry over.
  /// Throws FilterError unless Q̂ is symmetric PSD.
  void set_model(const MatrixXd& D_hat, const MatrixXd& Q_hat);

  const FilterState& state() const { return state_; }
  int d() const { return static_cast<int>(state_.x.size()); }
  int k() const { return static_cast<int>(state_.A.rows()); }

  /// Smallest eigenvalue of P_{t|t} seen right after the last update,
  /// before the floor clip.
  double last_min_eigenvalue() const { return last_min_eigenvalue_; }

 private:
  void validate() const;

  FilterState state_;
  Prediction prior_;
  bool has_prior_ = false;
  double last_min_eigenvalue_ = 0.0;
};

}  // namespace emkf
