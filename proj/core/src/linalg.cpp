#include "emkf/linalg.hpp"
#include "emkf/random.hpp"

#include <algorithm>
#include <cmath>

namespace emkf {

MatrixXd symmetrize(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

double min_eigenvalue(const MatrixXd& symmetric) {
  if (symmetric.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetric, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

MatrixXd psd_project(const MatrixXd& m, double floor) {
  const MatrixXd sym = symmetrize(m);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(sym);
  if (es.eigenvalues().minCoeff() >= floor) return sym;
  const VectorXd clipped = es.eigenvalues().cwiseMax(floor);
  return symmetrize(es.eigenvectors() * clipped.asDiagonal() *
                    es.eigenvectors().transpose());
}

MatrixXd covariance_factor(const MatrixXd& cov) {
  Eigen::LLT<MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrize(cov));
  const VectorXd roots = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * roots.asDiagonal();
}

bool is_symmetric_psd(const MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() > 0 && (m - m.transpose()).cwiseAbs().maxCoeff() > tol) {
    return false;
  }
  return min_eigenvalue(symmetrize(m)) >= -tol;
}

double inverse_spectral_norm(const MatrixXd& spd) {
  return 1.0 / min_eigenvalue(spd);
}

MatrixXd truncated_identity(int k, int d) {
  return MatrixXd::Identity(d, d).topRows(k);
}

Rng::Rng(std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32)};
  engine_.seed(seq);
}

Rng::Rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  engine_.seed(seq);
}

Eigen::VectorXd Rng::gaussian_vector(Eigen::Index n) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal_(engine_);
  return v;
}

}  // namespace emkf
