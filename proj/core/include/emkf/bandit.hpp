#pragma once

#include <span>

#include "emkf/linalg.hpp"
#include "emkf/random.hpp"

namespace emkf {

/// Per-arm ridge-regression statistics with an identity prior:
/// B = I + Σ x xᵀ, f = Σ x r, μ̂ = B⁻¹ f.
class ArmStats {
 public:
  explicit ArmStats(int d);

  void update(const VectorXd& x, double reward);

  const MatrixXd& B() const { return B_; }
  const VectorXd& f() const { return f_; }
  const VectorXd& mu_hat() const { return mu_hat_; }
  long pulls() const { return pulls_; }
  int d() const { return static_cast<int>(f_.size()); }

  /// Cholesky factor of B, kept in sync with every update.
  const Eigen::LLT<MatrixXd>& factor() const { return llt_; }

  /// x̂ᵀ B⁻¹ x̂
  double inverse_quadratic_form(const VectorXd& x) const;

  /// ‖B⁻¹‖₂ = 1 / λ_min(B)
  double inverse_norm() const;

 private:
  MatrixXd B_;
  VectorXd f_;
  VectorXd mu_hat_;
  Eigen::LLT<MatrixXd> llt_;
  long pulls_ = 0;
};

struct TsConfig {
  double sigma = 1.0;
  double delta = 0.1;
  int d = 1;
  double exploration_scale = 1.0;
};

struct UcbConfig {
  double alpha = 1.0;
};

/// v_t = scale · σ √(9 d ln(t/δ)), with the log argument clamped to at least e.
double exploration_width(int t, const TsConfig& cfg);

/// Default LinUCB width 1 + √(ln(2TK)/2).
double default_ucb_alpha(int horizon, int arms);

/// Thompson sampling: draws μ̃_a ~ N(μ̂_a, v_t² B_a⁻¹) for every arm and
/// returns argmax_a <x̂, μ̃_a> (lowest index on ties). Always consumes
/// K·d normals from `rng`.
int ts_select(std::span<const ArmStats> arms, const VectorXd& x_hat, int t,
              const TsConfig& cfg, Rng& rng);

/// LinUCB: argmax_a <x̂, μ̂_a> + α √(x̂ᵀ B_a⁻¹ x̂) (lowest index on ties).
int ucb_select(std::span<const ArmStats> arms, const VectorXd& x_hat,
               const UcbConfig& cfg);

}  // namespace emkf
