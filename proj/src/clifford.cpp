#include "nck/clifford.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/SparseCore>

namespace nck {

namespace {

using C = std::complex<double>;
constexpr C kI(0.0, 1.0);

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

// Coefficient c with gamma_1 ... gamma_n = c sigma.
C product_constant(int n) { return (n / 2) % 2 == 0 ? C(1.0) : C(0.0, -1.0); }

Matrix ordered_product(const GammaRep& rep) {
  Matrix p = Matrix::Identity(rep.N, rep.N);
  for (const auto& g : rep.gammas) p = p * g;
  return p;
}

double dist(const Matrix& a, const Matrix& b) { return linalg::max_abs(a - b); }

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

GammaRep build_gamma(int n) {
  if (n < 2 || n % 2 != 0 || n > kMaxCliffordN)
    throw std::invalid_argument("build_gamma: n must be even with 2 <= n <= " +
                                std::to_string(kMaxCliffordN) + ", got " + std::to_string(n));
  GammaRep rep;
  rep.n = 2;
  rep.N = 2;
  rep.gammas = {kI * pauli_x(), kI * pauli_y()};
  rep.sigma = pauli_z();

  const Matrix id2 = Matrix::Identity(2, 2);
  while (rep.n < n) {
    const int next = rep.n + 2;
    std::vector<Matrix> gammas;
    gammas.reserve(static_cast<std::size_t>(next));
    for (const auto& g : rep.gammas) gammas.push_back(kron(g, id2));
    gammas.push_back(kron(rep.sigma, kI * pauli_x()));
    gammas.push_back(kron(rep.sigma, kI * pauli_y()));
    // The product of the new gammas is -i c_n sigma (x) s_z; rescale so it reads c_next sigma'.
    const C s = C(0.0, -1.0) * product_constant(rep.n) / product_constant(next);
    rep.sigma = s * kron(rep.sigma, pauli_z());
    rep.gammas = std::move(gammas);
    rep.n = next;
    rep.N *= 2;
  }

  auto plus = charge_conjugation(rep, ConjVariant::plus);
  auto minus = charge_conjugation(rep, ConjVariant::minus);
  rep.conj_plus = std::move(plus.C);
  rep.signs_plus = plus.signs;
  rep.conj_minus = std::move(minus.C);
  rep.signs_minus = minus.signs;
  return rep;
}

double relations_residual(const GammaRep& rep) {
  const Matrix id = Matrix::Identity(rep.N, rep.N);
  double r = 0.0;
  for (int j = 1; j <= rep.n; ++j) {
    const Matrix& gj = rep.gamma(j);
    r = std::max(r, dist(gj.adjoint(), -gj));
    for (int k = 1; k <= rep.n; ++k) {
      const Matrix& gk = rep.gamma(k);
      const Matrix expected = j == k ? Matrix(-2.0 * id) : Matrix::Zero(rep.N, rep.N);
      r = std::max(r, dist(gj * gk + gk * gj, expected));
    }
    r = std::max(r, linalg::max_abs(rep.sigma * gj + gj * rep.sigma));
  }
  r = std::max(r, dist(rep.sigma.adjoint(), rep.sigma));
  r = std::max(r, dist(rep.sigma * rep.sigma, id));
  return r;
}

double grading_product_check(const GammaRep& rep) {
  return dist(ordered_product(rep), product_constant(rep.n) * rep.sigma);
}

SignTriple expected_signs(int n, ConjVariant variant) {
  if (n % 2 != 0) throw std::invalid_argument("expected_signs: n must be even");
  const int r = ((n % 8) + 8) % 8;
  if (variant == ConjVariant::plus) {
    switch (r) {
      case 0: return {+1, +1, +1};
      case 2: return {-1, +1, -1};
      case 4: return {-1, +1, +1};
      default: return {+1, +1, -1};
    }
  }
  switch (r) {
    case 0: return {+1, -1, +1};
    case 2: return {+1, -1, -1};
    case 4: return {-1, -1, +1};
    default: return {-1, -1, -1};
  }
}

ChargeConjugation charge_conjugation(const GammaRep& rep, ConjVariant variant) {
  const int N = rep.N;
  const double eps_prime = variant == ConjVariant::plus ? 1.0 : -1.0;
  const Matrix id = Matrix::Identity(N, N);

  // vec(C conj(g)) = (conj(g)^T (x) 1) vec(C);  vec(g C) = (1 (x) g) vec(C).
  // The common kernel of the blocks A_j is the kernel of sum_j A_j* A_j; the
  // blocks are very sparse, so the Gram matrix is assembled sparsely.
  using Sparse = Eigen::SparseMatrix<C>;
  Sparse gram(N * N, N * N);
  for (int j = 1; j <= rep.n; ++j) {
    const Matrix& g = rep.gamma(j);
    const Sparse a = Matrix(kron(g.conjugate().transpose(), id) - eps_prime * kron(id, g)).sparseView();
    gram += Sparse(a.adjoint()) * a;
  }
  const Eigen::SelfAdjointEigenSolver<Matrix> eig{Matrix(gram)};
  const auto& lambda = eig.eigenvalues();
  const double cut = 1e-8 * std::max(1.0, lambda(lambda.size() - 1));
  Eigen::Index dim = 0;
  while (dim < lambda.size() && lambda(dim) < cut) ++dim;
  if (dim != 1)
    throw std::logic_error("charge_conjugation: expected a one-dimensional solution space, got " +
                           std::to_string(dim));
  const Matrix kernel = eig.eigenvectors().leftCols(1);

  Matrix c = Eigen::Map<const Matrix>(kernel.col(0).data(), N, N);
  const double top = linalg::max_abs(c);
  for (Eigen::Index idx = 0; idx < c.size(); ++idx) {
    const C x = c.data()[idx];
    if (std::abs(x) > 1e-8 * top) {
      c *= std::abs(x) / x;
      break;
    }
  }
  c /= std::sqrt((c.adjoint() * c).trace().real() / N);

  ChargeConjugation out;
  const Matrix cc = c * c.conjugate();
  out.signs.eps = dist(cc, id) <= dist(cc, -id) ? 1 : -1;
  out.signs.eps_prime = static_cast<int>(eps_prime);
  const Matrix cs = c * rep.sigma.conjugate();
  out.signs.eps_dprime = dist(cs, rep.sigma * c) <= dist(cs, -rep.sigma * c) ? 1 : -1;

  double residual = dist(c.adjoint() * c, id);
  residual = std::max(residual, dist(cc, static_cast<double>(out.signs.eps) * id));
  residual = std::max(residual, dist(cs, static_cast<double>(out.signs.eps_dprime) * rep.sigma * c));
  for (int j = 1; j <= rep.n; ++j) {
    const Matrix& g = rep.gamma(j);
    residual = std::max(residual, dist(c * g.conjugate(), eps_prime * g * c));
  }
  out.residual = residual;
  out.C = std::move(c);

  if (residual > 1e-10)
    throw std::logic_error("charge_conjugation: solution violates relations, residual " +
                           std::to_string(residual));
  if (!(out.signs == expected_signs(rep.n, variant)))
    throw std::logic_error("charge_conjugation: measured signs disagree with the mod-8 table");
  return out;
}

int clifford_span_rank(const GammaRep& rep) {
  std::vector<Matrix> products;
  const unsigned subsets = 1u << rep.n;
  products.reserve(subsets);
  for (unsigned mask = 0; mask < subsets; ++mask) {
    Matrix p = Matrix::Identity(rep.N, rep.N);
    for (int j = 0; j < rep.n; ++j) {
      if (mask & (1u << j)) p = p * rep.gammas[static_cast<std::size_t>(j)];
    }
    products.push_back(std::move(p));
  }
  return linalg::rank(linalg::stack_flattened(products));
}

}  // namespace nck
