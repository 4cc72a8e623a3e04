#pragma once

#include <cstdint>
#include <vector>

#include "emkf/linalg.hpp"
#include "emkf/random.hpp"

namespace emkf {

/// Hidden parameters of the partially observable linear-Gaussian bandit:
///
///   x_{t+1} = D x_t + ε_t,   ε_t ~ N(0, Q)
///   y_t     = A x_t + n_t,   n_t ~ N(0, Σ)
///   r_t     = <x_t, μ_a> + ω_t,  ω_t ~ N(0, σ²)
struct GroundTruth {
  MatrixXd D;      // d×d transition
  MatrixXd Q;      // d×d transition noise covariance
  MatrixXd A;      // k×d observation matrix
  MatrixXd Sigma;  // k×k observation noise covariance
  double sigma = 0.0;           // reward noise std
  std::vector<VectorXd> mu;     // K arm parameters, each length d

  int d() const { return static_cast<int>(D.rows()); }
  int k() const { return static_cast<int>(A.rows()); }
  int arms() const { return static_cast<int>(mu.size()); }

  /// Throws DimensionError if the shapes disagree.
  void validate() const;
};

/// Random instance: D uniform then row-normalized to be row stochastic,
/// Q = eps·I, A = I_{k×d}, Σ = s_obs·I, μ_a standard Gaussian.
/// Deterministic given `seed`; `eps` only enters Q, so one seed gives the
/// same D and μ across a noise sweep.
GroundTruth generate_ground_truth(int d, int k, int arms, double eps,
                                  double sigma, std::uint64_t seed,
                                  double s_obs = 0.1);

/// A full-rank d×d matrix whose first k rows are A and whose remaining rows
/// are an orthonormal basis of the orthogonal complement of A's row space.
/// Throws RankError when A is rank deficient.
MatrixXd complete_observation_matrix(const MatrixXd& A);

/// Equivalent system with observation matrix I_{k×d}. With Ã the completion
/// above: D̃ = Ã D Ã⁻¹, Q̃ = Ã Q Ãᵀ, μ̃_a = Ã⁻ᵀ μ_a. Σ and σ are unchanged.
GroundTruth canonicalize(const GroundTruth& gt);

/// Simulator state machine. Round t first transitions the context, then
/// emits y_t; the reward noise ω_t is drawn in the same round regardless of
/// which arm is later played.
class Environment {
 public:
  /// x₀ drawn entrywise standard Gaussian from the environment stream.
  Environment(GroundTruth gt, std::uint64_t seed);
  /// Explicit initial context.
  Environment(GroundTruth gt, std::uint64_t seed, VectorXd x0);

  /// Advances one round and returns y_t.
  const VectorXd& step();

  /// <x_t, μ_a> + ω_t for the current round.
  double reward(int arm) const;
  /// <x_t, μ_a>
  double mean_reward(int arm) const;

  int t() const { return t_; }
  const VectorXd& context() const { return x_; }
  const VectorXd& observation() const { return y_; }
  const GroundTruth& ground_truth() const { return gt_; }

 private:
  void check_arm(int arm) const;

  GroundTruth gt_;
  MatrixXd q_factor_;
  MatrixXd sigma_factor_;
  Rng rng_;
  int t_ = 0;
  VectorXd x_;
  VectorXd y_;
  double omega_ = 0.0;
};

}  // namespace emkf
