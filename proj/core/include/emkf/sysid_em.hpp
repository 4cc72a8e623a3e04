#pragma once

#include <optional>

#include "emkf/linalg.hpp"

namespace emkf {

struct ModelEstimate {
  MatrixXd D_hat;
  MatrixXd Q_hat;      // symmetric, eigenvalues >= q_min
  int window_index = 0;  // 1 for the first completed window
};

struct SysIdOptions {
  int window = 50;        // L; M-steps fire at t = L, 2L, ...
  double ridge = 1e-6;    // λ added to X before solving
  double q_min = 1e-6;    // eigenvalue floor for Q̂
  int min_pairs = -1;     // skip M-steps with fewer pairs; -1 means d
};

/// Windowed recursive least-squares identification of (D, Q) from a stream
/// of estimated contexts:
///
///   Ψ += x̂_t x̂_{t-1}ᵀ,  X += x̂_{t-1} x̂_{t-1}ᵀ,  Y += x̂_t x̂_tᵀ
///   D̂ = Ψ (X + λI)⁻¹,   Q̂ = (Y − D̂ Ψᵀ) / n
///
/// The sums restart at every window boundary. The last pushed context is kept
/// so the pair straddling the boundary lands in the next window.
class SysIdAccumulator {
 public:
  SysIdAccumulator(int d, SysIdOptions options = {});

  void push(const VectorXd& x_hat);

  /// Throws InsufficientDataError when no pair has been accumulated.
  ModelEstimate solve() const;

  /// At t a multiple of L with at least min_pairs pairs: solve and restart.
  /// Otherwise leaves the accumulator untouched.
  std::optional<ModelEstimate> maybe_mstep(int t);

  const MatrixXd& psi() const { return psi_; }
  const MatrixXd& x_gram() const { return x_gram_; }
  const MatrixXd& y_gram() const { return y_gram_; }
  int pairs() const { return pairs_; }
  bool has_previous() const { return has_prev_; }
  const VectorXd& previous() const { return x_prev_; }
  const SysIdOptions& options() const { return options_; }
  int windows_completed() const { return windows_; }

 private:
  int d_;
  SysIdOptions options_;
  MatrixXd psi_;
  MatrixXd x_gram_;
  MatrixXd y_gram_;
  VectorXd x_prev_;
  bool has_prev_ = false;
  int pairs_ = 0;
  int windows_ = 0;
};

}  // namespace emkf
