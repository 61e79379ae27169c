#include "nck/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nck::linalg {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

namespace {

/// Pivots count when they exceed rel_tol * max(1, largest pivot), so a matrix
/// made only of rounding noise has rank 0.
Eigen::Index qr_rank(const Eigen::ColPivHouseholderQR<Matrix>& qr, double rel_tol) {
  const auto& r = qr.matrixQR();
  const Eigen::Index k = std::min(r.rows(), r.cols());
  if (k == 0) return 0;
  const double cut = rel_tol * std::max(1.0, std::abs(r(0, 0)));
  Eigen::Index out = 0;
  while (out < k && std::abs(r(out, out)) > cut) ++out;
  return out;
}

}  // namespace

int rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0 || max_abs(m) == 0.0) return 0;
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  return static_cast<int>(qr_rank(qr, rel_tol));
}

Matrix column_basis(const Matrix& m, double rel_tol) {
  if (m.size() == 0 || max_abs(m) == 0.0) return Matrix(m.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(m);
  const auto r = qr_rank(qr, rel_tol);
  Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), r);
  return q;
}

Matrix null_space(const Matrix& m, double rel_tol) {
  const auto cols = m.cols();
  if (cols == 0) return Matrix(0, 0);
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::BDCSVD<Matrix> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut = rel_tol * std::max(1.0, smax);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixV().rightCols(cols - r);
}

Matrix stack_flattened(const std::vector<Matrix>& mats) {
  if (mats.empty()) return Matrix(0, 0);
  const auto len = mats.front().size();
  Matrix out(len, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].size() != len) throw std::invalid_argument("stack_flattened: size mismatch");
    out.col(static_cast<Eigen::Index>(i)) =
        Eigen::Map<const Eigen::VectorXcd>(mats[i].data(), len);
  }
  return out;
}

double projection_residual(const Matrix& basis, const Eigen::VectorXcd& v) {
  if (basis.cols() == 0) return v.cwiseAbs().maxCoeff();
  const Eigen::VectorXcd r = v - basis * (basis.adjoint() * v);
  return r.cwiseAbs().maxCoeff();
}

}  // namespace nck::linalg
