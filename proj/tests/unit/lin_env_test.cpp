#include "emkf/lin_env.hpp"

#include <gtest/gtest.h>

#include "emkf/errors.hpp"
#include "oracles.hpp"

namespace emkf {
namespace {

GroundTruth manual(MatrixXd D, MatrixXd Q, MatrixXd A, MatrixXd Sigma, double sigma,
                   std::vector<VectorXd> mu) {
  GroundTruth gt;
  gt.D = std::move(D);
  gt.Q = std::move(Q);
  gt.A = std::move(A);
  gt.Sigma = std::move(Sigma);
  gt.sigma = sigma;
  gt.mu = std::move(mu);
  return gt;
}

TEST(GenerateGroundTruth, PaperScaleIsRowStochastic) {
  const auto gt = generate_ground_truth(20, 10, 15, 0.5, 1.0, 7);
  ASSERT_EQ(gt.d(), 20);
  ASSERT_EQ(gt.k(), 10);
  ASSERT_EQ(gt.arms(), 15);
  for (int i = 0; i < gt.d(); ++i) {
    EXPECT_NEAR(gt.D.row(i).sum(), 1.0, 1e-12);
    EXPECT_GE(gt.D.row(i).minCoeff(), 0.0);
  }
  EXPECT_TRUE(gt.A == truncated_identity(10, 20));
  EXPECT_TRUE(gt.Sigma.isApprox(0.1 * MatrixXd::Identity(10, 10)));
  EXPECT_DOUBLE_EQ(gt.sigma, 1.0);
}

TEST(GenerateGroundTruth, RowSumsHoldAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto gt = generate_ground_truth(1 + static_cast<int>(seed % 9), 1, 3, 0.3, 1.0, seed);
    EXPECT_LE((gt.D.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-12) << seed;
  }
}

TEST(GenerateGroundTruth, ScalarCase) {
  const auto gt = generate_ground_truth(1, 1, 1, 0.5, 1.0, 3);
  EXPECT_DOUBLE_EQ(gt.D(0, 0), 1.0);
}

TEST(GenerateGroundTruth, NoiseCovarianceIsEpsIdentity) {
  const auto gt = generate_ground_truth(3, 2, 2, 0.5, 1.0, 3);
  EXPECT_TRUE(gt.Q == 0.5 * MatrixXd::Identity(3, 3));
}

TEST(GenerateGroundTruth, DeterministicAndEpsIndependentDynamics) {
  const auto a = generate_ground_truth(6, 3, 4, 0.1, 1.0, 11);
  const auto b = generate_ground_truth(6, 3, 4, 0.1, 1.0, 11);
  const auto c = generate_ground_truth(6, 3, 4, 1.0, 1.0, 11);
  EXPECT_TRUE(a.D == b.D);
  EXPECT_TRUE(a.D == c.D);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(a.mu[i] == c.mu[i]);
}

TEST(GenerateGroundTruth, RejectsBadDimensions) {
  EXPECT_THROW(generate_ground_truth(0, 1, 1, 0.5, 1.0, 0), DimensionError);
  EXPECT_THROW(generate_ground_truth(3, 4, 1, 0.5, 1.0, 0), DimensionError);
  EXPECT_THROW(generate_ground_truth(3, 0, 1, 0.5, 1.0, 0), DimensionError);
  EXPECT_THROW(generate_ground_truth(3, 2, 0, 0.5, 1.0, 0), DimensionError);
  EXPECT_THROW(generate_ground_truth(3, 2, 1, 0.0, 1.0, 0), DimensionError);
}

TEST(Environment, IdentityDynamicsWithoutNoiseHoldStill) {
  auto gt = manual(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), truncated_identity(2, 2),
                   MatrixXd::Zero(2, 2), 0.0, {VectorXd::Ones(2)});
  Environment env(gt, 1, VectorXd{{1.0, 2.0}});
  env.step();
  EXPECT_TRUE(env.context() == (VectorXd{{1.0, 2.0}}));
}

TEST(Environment, TruncatedIdentityPicksFirstCoordinate) {
  auto gt = manual(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), truncated_identity(1, 2),
                   MatrixXd::Zero(1, 1), 0.0, {VectorXd::Ones(2)});
  Environment env(gt, 1, VectorXd{{3.0, 4.0}});
  const VectorXd& y = env.step();
  ASSERT_EQ(y.size(), 1);
  EXPECT_DOUBLE_EQ(y(0), 3.0);
}

TEST(Environment, ScalarHalvingPath) {
  auto gt = manual(MatrixXd::Constant(1, 1, 0.5), MatrixXd::Zero(1, 1), MatrixXd::Ones(1, 1),
                   MatrixXd::Zero(1, 1), 0.0, {VectorXd::Ones(1)});
  Environment env(gt, 5, VectorXd::Constant(1, 8.0));
  const double expected[] = {4.0, 2.0, 1.0};
  for (double e : expected) {
    env.step();
    EXPECT_DOUBLE_EQ(env.context()(0), e);
  }
  EXPECT_EQ(env.t(), 3);
}

TEST(Environment, RewardIsInnerProduct) {
  auto gt = manual(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), truncated_identity(2, 2),
                   MatrixXd::Zero(2, 2), 0.0,
                   {VectorXd{{1.0, 0.0}}, VectorXd{{2.0, -1.0}}});
  Environment env(gt, 1, VectorXd{{1.0, 0.0}});
  env.step();
  EXPECT_DOUBLE_EQ(env.reward(0), 1.0);

  Environment env2(gt, 1, VectorXd{{1.0, 1.0}});
  env2.step();
  EXPECT_DOUBLE_EQ(env2.reward(1), 1.0);
  EXPECT_THROW((void)env2.reward(2), std::out_of_range);
  EXPECT_THROW((void)env2.reward(-1), std::out_of_range);
}

TEST(Environment, RewardNoiseVarianceMonteCarlo) {
  auto gt = manual(MatrixXd::Identity(2, 2), MatrixXd::Zero(2, 2), truncated_identity(1, 2),
                   MatrixXd::Constant(1, 1, 1.0), 1.0, {VectorXd{{0.5, -0.25}}});
  Environment env(gt, 2024, VectorXd{{1.0, 2.0}});
  const int n = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < n; ++i) {
    env.step();
    const double r = env.reward(0) - env.mean_reward(0);
    sum += r;
    sum_sq += r * r;
  }
  EXPECT_DOUBLE_EQ(env.mean_reward(0), 0.0);  // x fixed at (1, 2)
  const double mean = sum / n;
  const double var = sum_sq / n - mean * mean;
  EXPECT_GE(var, 0.97);
  EXPECT_LE(var, 1.03);
}

TEST(Environment, NoiselessRunIsDeterministicFunctionOfInputs) {
  std::mt19937_64 g(3);
  auto gt = manual(testing::random_stable(g, 4, 0.9), MatrixXd::Zero(4, 4),
                   truncated_identity(2, 4), MatrixXd::Zero(2, 2), 0.0,
                   {testing::random_vector(g, 4), testing::random_vector(g, 4)});
  const VectorXd x0 = testing::random_vector(g, 4);
  Environment a(gt, 1, x0), b(gt, 999, x0);
  VectorXd x = x0;
  for (int t = 0; t < 20; ++t) {
    a.step();
    b.step();
    x = gt.D * x;
    EXPECT_TRUE(a.context().isApprox(x, 1e-12));
    EXPECT_TRUE(a.context() == b.context());
    EXPECT_TRUE(a.observation() == b.observation());
    EXPECT_EQ(a.reward(1), b.reward(1));
  }
}

TEST(Environment, SameSeedSameTrajectory) {
  const auto gt = generate_ground_truth(5, 2, 3, 0.5, 1.0, 4);
  Environment a(gt, 17), b(gt, 17), c(gt, 18);
  bool differs = false;
  for (int t = 0; t < 50; ++t) {
    a.step();
    b.step();
    c.step();
    ASSERT_TRUE(a.context() == b.context());
    ASSERT_TRUE(a.observation() == b.observation());
    ASSERT_EQ(a.reward(2), b.reward(2));
    differs = differs || a.context() != c.context();
  }
  EXPECT_TRUE(differs);
}

TEST(Canonicalize, TruncatedIdentityIsFixedPoint) {
  const auto gt = generate_ground_truth(5, 2, 3, 0.5, 1.0, 4);
  const auto out = canonicalize(gt);
  EXPECT_TRUE(out.D == gt.D);
  EXPECT_TRUE(out.Q == gt.Q);
  EXPECT_TRUE(out.A == gt.A);
  for (int a = 0; a < 3; ++a) EXPECT_TRUE(out.mu[a] == gt.mu[a]);
}

TEST(Canonicalize, CompletionKeepsRowsAndIsOrthonormalBelow) {
  const MatrixXd A{{1.0, 1.0, 0.0}, {0.0, 2.0, -1.0}};
  const MatrixXd full = complete_observation_matrix(A);
  EXPECT_TRUE(full.topRows(2) == A);
  const MatrixXd below = full.bottomRows(1);
  EXPECT_NEAR(below.norm(), 1.0, 1e-12);
  EXPECT_LT((A * below.transpose()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_GT(std::abs(full.determinant()), 1e-6);
}

TEST(Canonicalize, RankDeficientObservationRejected) {
  const MatrixXd A{{1.0, 2.0, 3.0}, {2.0, 4.0, 6.0}};
  EXPECT_THROW(complete_observation_matrix(A), RankError);
  GroundTruth gt = manual(MatrixXd::Identity(3, 3), MatrixXd::Identity(3, 3), A,
                          MatrixXd::Identity(2, 2), 1.0, {VectorXd::Ones(3)});
  EXPECT_THROW(canonicalize(gt), RankError);
}

TEST(Canonicalize, RowSumObservation) {
  // d=2, k=1, A=(1,1): the canonical first coordinate is x₁ + x₂.
  const MatrixXd A{{1.0, 1.0}};
  GroundTruth gt = manual(MatrixXd{{0.5, 0.2}, {0.1, 0.7}}, MatrixXd::Identity(2, 2), A,
                          MatrixXd::Constant(1, 1, 0.3), 0.0, {VectorXd{{1.0, -2.0}}});
  const auto out = canonicalize(gt);
  const MatrixXd full = complete_observation_matrix(A);
  const VectorXd x{{0.3, -1.7}};
  const VectorXd xt = full * x;
  EXPECT_NEAR(xt(0), x(0) + x(1), 1e-14);
  EXPECT_TRUE(out.A == truncated_identity(1, 2));
  EXPECT_NEAR(xt.dot(out.mu[0]), x.dot(gt.mu[0]), 1e-12);
}

// Drives the original and canonical systems with the same Gaussian draws
// (transition noise mapped through Ã) and compares observations and reward
// means.
TEST(Canonicalize, CoupledNoiseSimulationMatches) {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + trial % 4;  // 2..5
    const int k = 1 + trial % d;
    MatrixXd A = testing::random_matrix(g, k, d);
    GroundTruth gt = manual(testing::random_stable(g, d, 0.95), testing::random_spd(g, d),
                            A, testing::random_spd(g, k), 0.0, {});
    for (int a = 0; a < 3; ++a) gt.mu.push_back(testing::random_vector(g, d));

    const auto can = canonicalize(gt);
    const MatrixXd full = complete_observation_matrix(A);
    const MatrixXd lq = covariance_factor(gt.Q);
    const MatrixXd ls = covariance_factor(gt.Sigma);

    VectorXd x = testing::random_vector(g, d);
    VectorXd xt = full * x;
    double max_diff = 0.0;
    for (int t = 0; t < 100; ++t) {
      const VectorXd eps = lq * testing::random_vector(g, d);
      const VectorXd n = ls * testing::random_vector(g, k);
      x = gt.D * x + eps;
      xt = can.D * xt + full * eps;
      const VectorXd y = gt.A * x + n;
      const VectorXd yt = can.A * xt + n;
      max_diff = std::max(max_diff, (y - yt).cwiseAbs().maxCoeff());
      for (int a = 0; a < 3; ++a) {
        max_diff = std::max(max_diff, std::abs(x.dot(gt.mu[a]) - xt.dot(can.mu[a])));
      }
    }
    EXPECT_LT(max_diff, 1e-10) << "trial " << trial;
    // Transformed noise covariance is what the canonical system declares.
    EXPECT_TRUE(can.Q.isApprox(full * gt.Q * full.transpose(), 1e-12));
  }
}

}  // namespace
}  // namespace emkf
