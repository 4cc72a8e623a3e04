#include "emkf/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "emkf/errors.hpp"

namespace emkf {

ArmStats::ArmStats(int d)
    : B_(MatrixXd::Identity(d, d)),
      f_(VectorXd::Zero(d)),
      mu_hat_(VectorXd::Zero(d)),
      llt_(B_) {
  if (d < 1) throw DimensionError("arm dimension must be >= 1");
}

void ArmStats::update(const VectorXd& x, double reward) {
  if (x.size() != f_.size()) throw DimensionError("context length mismatch");
  B_.noalias() += x * x.transpose();
  f_ += reward * x;
  llt_.compute(B_);
  mu_hat_ = llt_.solve(f_);
  ++pulls_;
}

double ArmStats::inverse_quadratic_form(const VectorXd& x) const {
  const VectorXd z = llt_.matrixL().solve(x);
  return z.squaredNorm();
}

double ArmStats::inverse_norm() const { return inverse_spectral_norm(B_); }

double exploration_width(int t, const TsConfig& cfg) {
  if (!(cfg.delta > 0.0 && cfg.delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0, 1)");
  }
  const double arg = std::max(static_cast<double>(t) / cfg.delta, std::numbers::e);
  return cfg.exploration_scale * cfg.sigma * std::sqrt(9.0 * cfg.d * std::log(arg));
}

double default_ucb_alpha(int horizon, int arms) {
  return 1.0 + std::sqrt(std::log(2.0 * horizon * arms) / 2.0);
}

int ts_select(std::span<const ArmStats> arms, const VectorXd& x_hat, int t,
              const TsConfig& cfg, Rng& rng) {
  if (arms.empty()) throw std::invalid_argument("no arms");
  const double v = exploration_width(t, cfg);
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const ArmStats& arm = arms[a];
    if (x_hat.size() != arm.d()) throw DimensionError("context length mismatch");
    // With B = L Lᵀ, μ̂ + v L⁻ᵀ z has covariance v² B⁻¹.
    const VectorXd z = rng.gaussian_vector(arm.d());
    const VectorXd offset = arm.factor().matrixU().solve(z);
    const double score = x_hat.dot(arm.mu_hat()) + v * x_hat.dot(offset);
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(a);
    }
  }
  return best;
}

int ucb_select(std::span<const ArmStats> arms, const VectorXd& x_hat,
               const UcbConfig& cfg) {
  if (arms.empty()) throw std::invalid_argument("no arms");
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const ArmStats& arm = arms[a];
    if (x_hat.size() != arm.d()) throw DimensionError("context length mismatch");
    const double score = x_hat.dot(arm.mu_hat()) +
                         cfg.alpha * std::sqrt(arm.inverse_quadratic_form(x_hat));
    if (score > best_score) {
      best_score = score;
      best = static_cast<int>(a);
    }
  }
  return best;
}

}  // namespace emkf
