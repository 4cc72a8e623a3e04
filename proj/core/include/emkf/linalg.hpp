#pragma once

#include <Eigen/Dense>

namespace emkf {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// (M + Mᵀ) / 2
MatrixXd symmetrize(const MatrixXd& m);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const MatrixXd& symmetric);

/// Symmetrizes, then raises every eigenvalue below `floor` to `floor`.
MatrixXd psd_project(const MatrixXd& m, double floor);

/// Returns L with L·Lᵀ = cov for a symmetric PSD covariance. Uses a Cholesky
/// factor when cov is positive definite and a clipped eigen square root
/// otherwise (so degenerate covariances such as 0 are accepted).
MatrixXd covariance_factor(const MatrixXd& cov);

/// True when `m` is square, symmetric within `tol` and its smallest
/// eigenvalue is at least -tol.
bool is_symmetric_psd(const MatrixXd& m, double tol = 1e-10);

/// Spectral norm of the inverse of a symmetric positive definite matrix.
double inverse_spectral_norm(const MatrixXd& spd);

/// Truncated identity I_{k×d}: the d×d identity with rows k+1..d removed.
MatrixXd truncated_identity(int k, int d);

}  // namespace emkf
