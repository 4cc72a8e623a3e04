#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace emkf {

/// Independent named streams derived from one experiment seed. Keeping the
/// streams separate is what makes environment noise identical across agents.
enum class Stream : std::uint32_t {
  kGroundTruth = 1,
  kEnvironment = 2,
  kAgent = 3,
};

/// Seeded 64-bit Mersenne Twister with Gaussian helpers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  Rng(std::uint64_t seed, Stream stream);

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  Eigen::VectorXd gaussian_vector(Eigen::Index n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace emkf
