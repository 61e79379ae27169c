#include "nck/forms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "nck/clifford.hpp"

namespace nck {

namespace {

constexpr Complex kI(0.0, 1.0);

Matrix lift(const GammaRep& rep, const Matrix& x, Complex a, Complex b) {
  const Matrix id = Matrix::Identity(rep.N, rep.N);
  return a * kron(id, x) + b * kron(x, rep.sigma);
}

Matrix unflatten(const Eigen::VectorXcd& v, Eigen::Index rows) {
  return Eigen::Map<const Matrix>(v.data(), rows, v.size() / rows);
}

// Basis of span{ B X : B in left, X in the span with basis `cols` }.
Matrix extend_span(const std::vector<Matrix>& left, const Matrix& cols, Eigen::Index dim,
                   double rel_tol) {
  std::vector<Matrix> products;
  products.reserve(left.size() * static_cast<std::size_t>(cols.cols()));
  for (const auto& B : left) {
    for (Eigen::Index c = 0; c < cols.cols(); ++c) products.push_back(B * unflatten(cols.col(c), dim));
  }
  if (products.empty()) return Matrix(dim * dim, 0);
  return linalg::column_basis(linalg::stack_flattened(products), rel_tol);
}

Matrix identity_span(Eigen::Index dim) {
  Matrix id = Matrix::Identity(dim, dim);
  return linalg::column_basis(linalg::stack_flattened({id}));
}

double containment_residual(const Matrix& basis, const Matrix& vectors) {
  double r = 0.0;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c)
    r = std::max(r, linalg::projection_residual(basis, vectors.col(c)));
  return r;
}

}  // namespace

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const std::vector<Matrix>& FormBasisMatrices::family(FormFamily f) const {
  switch (f) {
    case FormFamily::mu: return mu;
    case FormFamily::eta_bar: return eta_bar;
    default: return eta_hol;
  }
}

FormBasisMatrices build_form_matrices(int torus_dim, int eps_prime) {
  if (eps_prime != 1 && eps_prime != -1) throw std::invalid_argument("eps_prime must be +1 or -1");
  const GammaRep rep = build_gamma(torus_dim);
  FormBasisMatrices b;
  b.torus_dim = torus_dim;
  b.eps_prime = eps_prime;
  const Complex e = kI * static_cast<double>(eps_prime);
  for (int j = 1; j <= torus_dim; ++j) b.mu.push_back(lift(rep, rep.gamma(j), 0.5, e / 2.0));
  for (int p = 1; 2 * p <= torus_dim; ++p) {
    const Matrix bar = rep.gamma(2 * p) - kI * rep.gamma(2 * p - 1);
    const Matrix hol = rep.gamma(2 * p) + kI * rep.gamma(2 * p - 1);
    b.eta_bar.push_back(lift(rep, bar, 0.25, e / 4.0));
    b.eta_hol.push_back(lift(rep, hol, 0.25, e / 4.0));
  }
  return b;
}

double anticommutation_residual(const std::vector<Matrix>& family) {
  double r = 0.0;
  for (const auto& a : family) {
    for (const auto& b : family) r = std::max(r, linalg::max_abs(a * b + b * a));
  }
  return r;
}

Matrix level_span(const std::vector<Matrix>& family, int level, double rel_tol) {
  if (level < 0) throw std::invalid_argument("level_span: level must be >= 0");
  if (family.empty()) throw std::invalid_argument("level_span: empty family");
  const Eigen::Index dim = family.front().rows();
  Matrix span = identity_span(dim);
  for (int l = 1; l <= level && span.cols() > 0; ++l) span = extend_span(family, span, dim, rel_tol);
  return span;
}

int form_rank(const FormBasisMatrices& b, FormFamily family, int level) {
  return static_cast<int>(level_span(b.family(family), level).cols());
}

VerificationReport bidegree_decomposition_check(int torus_dim, int max_r, double tol) {
  if (torus_dim < 2 || torus_dim % 2 != 0)
    throw std::invalid_argument("bidegree_decomposition_check: torus dimension must be even");
  const int n = torus_dim / 2;
  if (max_r < 0) max_r = torus_dim + 1;
  const FormBasisMatrices b = build_form_matrices(torus_dim);
  const Eigen::Index dim = b.mu.front().rows();

  std::vector<Matrix> mixed_family = b.eta_hol;
  mixed_family.insert(mixed_family.end(), b.eta_bar.begin(), b.eta_bar.end());

  // hol_span[p] = span of p-fold eta_hol products.
  std::vector<Matrix> hol_span;
  for (int p = 0; p <= max_r; ++p) hol_span.push_back(level_span(b.eta_hol, p));

  VerificationReport rep(tol);
  for (int r = 0; r <= max_r; ++r) {
    const Matrix mu_span = level_span(b.mu, r);
    const Matrix mixed_span = level_span(mixed_family, r);
    const long expected = binomial(torus_dim, r);
    const std::string tag = "r=" + std::to_string(r);
    rep.add("rank Omega_d " + tag + " = C(2n,r)",
            std::abs(static_cast<double>(mu_span.cols() - expected)));

    long vandermonde = 0;
    long piece_sum = 0;
    std::vector<Matrix> pieces;
    for (int p = 0; p <= r; ++p) {
      const int q = r - p;
      vandermonde += binomial(n, p) * binomial(n, q);
      // span{ H X : H a p-fold hol product, X a q-fold bar product }.
      Matrix piece = level_span(b.eta_bar, q);
      for (int s = 0; s < p && piece.cols() > 0; ++s) piece = extend_span(b.eta_hol, piece, dim, linalg::kRankTol);
      rep.add("rank Omega^(" + std::to_string(p) + "," + std::to_string(q) + ") = C(n,p)C(n,q)",
              std::abs(static_cast<double>(piece.cols() - binomial(n, p) * binomial(n, q))));
      piece_sum += piece.cols();
      if (piece.cols() > 0) pieces.push_back(piece);
    }
    rep.add("Vandermonde " + tag, std::abs(static_cast<double>(vandermonde - expected)));
    rep.add("bidegree ranks sum " + tag, std::abs(static_cast<double>(piece_sum - mu_span.cols())));

    // Pieces are independent iff the rank of their union is the sum of ranks.
    if (!pieces.empty()) {
      Matrix all(dim * dim, piece_sum);
      Eigen::Index at = 0;
      for (const auto& p : pieces) {
        all.middleCols(at, p.cols()) = p;
        at += p.cols();
      }
      rep.add("bidegree direct sum " + tag,
              std::abs(static_cast<double>(linalg::rank(all) - piece_sum)));
      rep.add("mu span in bidegree sum " + tag, containment_residual(linalg::column_basis(all), mu_span));
    }
    rep.add("span equality " + tag, std::max(containment_residual(mu_span, mixed_span),
                                              containment_residual(mixed_span, mu_span)));
  }
  return rep;
}

std::vector<TorusElement> product_map(const Torus& torus, const std::vector<TorusElement>& x,
                                      const std::vector<TorusElement>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("product_map: tuples of length " + std::to_string(x.size()) +
                                " and " + std::to_string(y.size()));
  auto elem = [&](const TorusElement& e) { return e.empty() ? TorusElement::zero(torus.n()) : e; };
  std::vector<TorusElement> out;
  for (std::size_t p = 0; p < x.size(); ++p) {
    for (std::size_t q = p + 1; q < x.size(); ++q)
      out.push_back((torus.mul(elem(x[p]), elem(y[q])) - torus.mul(elem(x[q]), elem(y[p]))).pruned(torus.prune()));
  }
  return out;
}

}  // namespace nck
