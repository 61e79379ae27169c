#pragma once

// Dense complex rank / span / null-space helpers. Thin layer over Eigen's
// pivoted QR and SVD so every caller uses the same thresholds.

#include <vector>

#include <Eigen/Dense>

namespace nck::linalg {

using Matrix = Eigen::MatrixXcd;

inline constexpr double kRankTol = 1e-10;

/// Largest entry magnitude (0 for empty matrices).
double max_abs(const Matrix& m);

/// Numerical rank with column-pivoted QR; a pivot counts when it exceeds
/// `rel_tol * max(1, largest pivot)`.
int rank(const Matrix& m, double rel_tol = kRankTol);

/// Orthonormal basis (as columns) of the column space of `m`.
Matrix column_basis(const Matrix& m, double rel_tol = kRankTol);

/// Orthonormal basis (as columns) of ker(m). Singular values below
/// `rel_tol * max(1, sigma_max)` are treated as zero.
Matrix null_space(const Matrix& m, double rel_tol = kRankTol);

/// Stacks each matrix, flattened column-major, as one column of the result.
Matrix stack_flattened(const std::vector<Matrix>& mats);

/// Residual of projecting `v` onto the column span of orthonormal `basis`.
double projection_residual(const Matrix& basis, const Eigen::VectorXcd& v);

}  // namespace nck::linalg
