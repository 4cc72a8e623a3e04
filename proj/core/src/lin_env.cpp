#include "emkf/lin_env.hpp"

#include <string>
#include <utility>

#include "emkf/errors.hpp"

namespace emkf {

void GroundTruth::validate() const {
  const auto d = D.rows();
  if (d < 1 || D.cols() != d) throw DimensionError("D must be square, d >= 1");
  if (Q.rows() != d || Q.cols() != d) throw DimensionError("Q must be d x d");
  if (A.cols() != d || A.rows() < 1 || A.rows() > d) {
    throw DimensionError("A must be k x d with 1 <= k <= d");
  }
  if (Sigma.rows() != A.rows() || Sigma.cols() != A.rows()) {
    throw DimensionError("Sigma must be k x k");
  }
  if (mu.empty()) throw DimensionError("at least one arm is required");
  for (const auto& m : mu) {
    if (m.size() != d) throw DimensionError("arm parameters must have length d");
  }
  if (sigma < 0.0) throw DimensionError("reward noise std must be >= 0");
}

GroundTruth generate_ground_truth(int d, int k, int arms, double eps,
                                  double sigma, std::uint64_t seed,
                                  double s_obs) {
  if (d < 1 || k < 1 || k > d || arms < 1) {
    throw DimensionError("need d >= 1, 1 <= k <= d, K >= 1 (got d=" +
                         std::to_string(d) + ", k=" + std::to_string(k) +
                         ", K=" + std::to_string(arms) + ")");
  }
  if (!(eps > 0.0)) throw DimensionError("eps must be > 0");
  if (!(sigma >= 0.0)) throw DimensionError("sigma must be >= 0");
  if (!(s_obs >= 0.0)) throw DimensionError("s_obs must be >= 0");

  Rng rng(seed, Stream::kGroundTruth);
  GroundTruth gt;
  gt.D.resize(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) gt.D(i, j) = rng.uniform();
    gt.D.row(i) /= gt.D.row(i).sum();
  }
  gt.Q = eps * MatrixXd::Identity(d, d);
  gt.A = truncated_identity(k, d);
  gt.Sigma = s_obs * MatrixXd::Identity(k, k);
  gt.sigma = sigma;
  gt.mu.reserve(arms);
  for (int a = 0; a < arms; ++a) gt.mu.push_back(rng.gaussian_vector(d));
  return gt;
}

MatrixXd complete_observation_matrix(const MatrixXd& A) {
  const auto k = A.rows();
  const auto d = A.cols();
  if (k < 1 || k > d) throw DimensionError("A must be k x d with 1 <= k <= d");

  Eigen::FullPivLU<MatrixXd> lu(A);
  if (lu.rank() < k) throw RankError("observation matrix is rank deficient");

  MatrixXd completed(d, d);
  completed.topRows(k) = A;
  if (k < d) {
    // Null space of A is the orthogonal complement of its row space; take an
    // orthonormal basis from the full SVD.
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeFullV);
    completed.bottomRows(d - k) = svd.matrixV().rightCols(d - k).transpose();
  }
  return completed;
}

GroundTruth canonicalize(const GroundTruth& gt) {
  gt.validate();
  const int d = gt.d();
  const int k = gt.k();

  GroundTruth out = gt;
  if (gt.A == truncated_identity(k, d)) {
    return out;
  }

  const MatrixXd completion = complete_observation_matrix(gt.A);
  Eigen::PartialPivLU<MatrixXd> lu(completion);
  const MatrixXd inverse = lu.inverse();
  out.D = completion * gt.D * inverse;
  out.Q = symmetrize(completion * gt.Q * completion.transpose());
  out.A = truncated_identity(k, d);
  for (auto& m : out.mu) m = inverse.transpose() * m;
  return out;
}

Environment::Environment(GroundTruth gt, std::uint64_t seed)
    : gt_(std::move(gt)), rng_(seed, Stream::kEnvironment) {
  gt_.validate();
  q_factor_ = covariance_factor(gt_.Q);
  sigma_factor_ = covariance_factor(gt_.Sigma);
  x_ = rng_.gaussian_vector(gt_.d());
  y_ = VectorXd::Zero(gt_.k());
}

Environment::Environment(GroundTruth gt, std::uint64_t seed, VectorXd x0)
    : gt_(std::move(gt)), rng_(seed, Stream::kEnvironment) {
  gt_.validate();
  if (x0.size() != gt_.d()) throw DimensionError("x0 must have length d");
  q_factor_ = covariance_factor(gt_.Q);
  sigma_factor_ = covariance_factor(gt_.Sigma);
  x_ = std::move(x0);
  y_ = VectorXd::Zero(gt_.k());
}

const VectorXd& Environment::step() {
  // Fixed draw order per round: ε (d), n (k), ω (1).
  const VectorXd transition_noise = rng_.gaussian_vector(gt_.d());
  const VectorXd observation_noise = rng_.gaussian_vector(gt_.k());
  const double reward_noise = rng_.gaussian();

  x_ = gt_.D * x_ + q_factor_ * transition_noise;
  y_ = gt_.A * x_ + sigma_factor_ * observation_noise;
  omega_ = gt_.sigma * reward_noise;
  ++t_;
  return y_;
}

void Environment::check_arm(int arm) const {
  if (arm < 0 || arm >= gt_.arms()) {
    throw std::out_of_range("arm index " + std::to_string(arm) +
                            " out of range [0, " + std::to_string(gt_.arms()) +
                            ")");
  }
}

double Environment::mean_reward(int arm) const {
  check_arm(arm);
  return x_.dot(gt_.mu[static_cast<std::size_t>(arm)]);
}

double Environment::reward(int arm) const { return mean_reward(arm) + omega_; }

}  // namespace emkf
