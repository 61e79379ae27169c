#include "nck/diffop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/SparseCore>

#ifdef NCK_HAVE_OPENMP
#include <omp.h>
#endif

namespace nck {

namespace {

using Contribution = std::pair<TermKey, Matrix>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

MultiIndex unit_index(int n, int j) {
  MultiIndex a(static_cast<std::size_t>(n), 0);
  a.at(static_cast<std::size_t>(j - 1)) = 1;
  return a;
}

// Fiber matrices built from gamma matrices are mostly zeros; for larger fibers a
// sparse left factor (exact zeros dropped only) is much cheaper.
Matrix fiber_product(const Matrix& ma, const Matrix& mb) {
  if (ma.rows() < 16) return ma * mb;
  const Eigen::SparseMatrix<Complex> sa = ma.sparseView();
  return sa * mb;
}

// All terms of (U^k d^alpha (x) M)(U^l d^beta (x) M'), by the Leibniz rule
// d^alpha U^l = sum_gamma C(alpha,gamma) (2 pi i l)^gamma U^l d^(alpha-gamma).
void pair_terms(const Torus& torus, const TermKey& a, const Matrix& ma, const TermKey& b,
                const Matrix& mb, std::vector<Contribution>& out) {
  const int n = torus.n();
  const Matrix prod = fiber_product(ma, mb);
  const Complex phase = torus.product_phase(a.k, b.k);
  const Exponent k = a.k + b.k;

  MultiIndex gamma(static_cast<std::size_t>(n), 0);
  while (true) {
    Complex c = phase;
    for (int j = 0; j < n; ++j) {
      const int g = gamma[static_cast<std::size_t>(j)];
      if (g == 0) continue;
      const Complex s(0.0, kTwoPi * b.k[j]);
      c *= binomial(a.alpha[static_cast<std::size_t>(j)], g) * std::pow(s, g);
    }
    if (c != Complex{}) {
      MultiIndex alpha(static_cast<std::size_t>(n));
      for (std::size_t j = 0; j < alpha.size(); ++j) alpha[j] = a.alpha[j] - gamma[j] + b.alpha[j];
      out.emplace_back(TermKey{std::move(alpha), k}, c * prod);
    }
    int j = n - 1;
    while (j >= 0 && (gamma[static_cast<std::size_t>(j)] == a.alpha[static_cast<std::size_t>(j)] ||
                      b.k[j] == 0)) {
      gamma[static_cast<std::size_t>(j)] = 0;
      --j;
    }
    if (j < 0) break;
    ++gamma[static_cast<std::size_t>(j)];
  }
}

NCDiffOp merge(const NCDiffOp& p, std::vector<std::vector<Contribution>>& parts) {
  NCDiffOp out(p.torus(), p.m());
  for (auto& part : parts) {
    for (auto& [key, mat] : part) out.add_term(key.alpha, key.k, mat);
  }
  return out.pruned(p.torus()->prune());
}

std::vector<std::pair<TermKey, Matrix>> flatten(const NCDiffOp& p) {
  return {p.terms().begin(), p.terms().end()};
}

}  // namespace

int order(const MultiIndex& alpha) {
  int r = 0;
  for (int a : alpha) r += a;
  return r;
}

NCDiffOp::NCDiffOp(std::shared_ptr<const Torus> torus, int m) : torus_(std::move(torus)), m_(m) {
  if (!torus_) throw std::invalid_argument("NCDiffOp: missing torus");
  if (m_ < 1) throw std::invalid_argument("NCDiffOp: fiber dimension must be positive");
}

NCDiffOp NCDiffOp::zero(std::shared_ptr<const Torus> torus, int m) {
  return NCDiffOp(std::move(torus), m);
}

NCDiffOp NCDiffOp::identity(std::shared_ptr<const Torus> torus, int m) {
  return constant(std::move(torus), Matrix::Identity(m, m));
}

NCDiffOp NCDiffOp::constant(std::shared_ptr<const Torus> torus, const Matrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("NCDiffOp: fiber matrix must be square");
  NCDiffOp op(torus, static_cast<int>(M.rows()));
  const int n = torus->n();
  op.add_term(MultiIndex(static_cast<std::size_t>(n), 0), Exponent::zero(n), M);
  return op;
}

NCDiffOp NCDiffOp::derivation(std::shared_ptr<const Torus> torus, int j, const Matrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("NCDiffOp: fiber matrix must be square");
  const int n = torus->n();
  if (j < 1 || j > n) throw std::invalid_argument("NCDiffOp::derivation: index out of range");
  NCDiffOp op(torus, static_cast<int>(M.rows()));
  op.add_term(unit_index(n, j), Exponent::zero(n), M);
  return op;
}

NCDiffOp NCDiffOp::derivation(std::shared_ptr<const Torus> torus, int j, int m) {
  return derivation(std::move(torus), j, Matrix::Identity(m, m));
}

NCDiffOp NCDiffOp::multiplication(std::shared_ptr<const Torus> torus, const TorusElement& a,
                                  const Matrix& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("NCDiffOp: fiber matrix must be square");
  if (a.n() != torus->n() && !a.empty())
    throw std::invalid_argument("NCDiffOp::multiplication: dimension mismatch");
  NCDiffOp op(torus, static_cast<int>(M.rows()));
  const MultiIndex none(static_cast<std::size_t>(torus->n()), 0);
  for (const auto& [k, c] : a.coeffs()) op.add_term(none, k, c * M);
  return op.pruned(torus->prune());
}

NCDiffOp NCDiffOp::multiplication(std::shared_ptr<const Torus> torus, const TorusElement& a,
                                  int m) {
  return multiplication(std::move(torus), a, Matrix::Identity(m, m));
}

NCDiffOp NCDiffOp::multiplication(std::shared_ptr<const Torus> torus,
                                  const std::vector<std::vector<TorusElement>>& A) {
  const int m = static_cast<int>(A.size());
  NCDiffOp op(torus, m);
  const MultiIndex none(static_cast<std::size_t>(torus->n()), 0);
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(A[static_cast<std::size_t>(i)].size()) != m)
      throw std::invalid_argument("NCDiffOp::multiplication: matrix must be square");
    for (int j = 0; j < m; ++j) {
      for (const auto& [k, c] : A[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].coeffs()) {
        Matrix e = Matrix::Zero(m, m);
        e(i, j) = c;
        op.add_term(none, k, e);
      }
    }
  }
  return op.pruned(torus->prune());
}

void NCDiffOp::add_term(const MultiIndex& alpha, const Exponent& k, const Matrix& M) {
  if (static_cast<int>(alpha.size()) != n() || k.size() != n())
    throw std::invalid_argument("NCDiffOp::add_term: dimension mismatch");
  if (M.rows() != m_ || M.cols() != m_)
    throw std::invalid_argument("NCDiffOp::add_term: fiber matrix is " + std::to_string(M.rows()) +
                                "x" + std::to_string(M.cols()) + ", expected " +
                                std::to_string(m_));
  for (int a : alpha) {
    if (a < 0) throw std::invalid_argument("NCDiffOp::add_term: negative multi-index");
  }
  auto [it, inserted] = terms_.try_emplace(TermKey{alpha, k}, M);
  if (!inserted) it->second += M;
}

int NCDiffOp::degree() const {
  int r = -1;
  for (const auto& [key, mat] : terms_) r = std::max(r, order(key.alpha));
  return r;
}

TorusElement NCDiffOp::entry(const MultiIndex& alpha, int i, int j) const {
  TorusElement r(n());
  for (const auto& [key, mat] : terms_) {
    if (key.alpha == alpha && mat(i, j) != Complex{}) r.add_term(key.k, mat(i, j));
  }
  return r;
}

std::vector<MultiIndex> NCDiffOp::multi_indices() const {
  std::vector<MultiIndex> out;
  for (const auto& [key, mat] : terms_) {
    if (out.empty() || out.back() != key.alpha) out.push_back(key.alpha);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

NCDiffOp NCDiffOp::pruned(double prune) const {
  NCDiffOp out = *this;
  for (auto it = out.terms_.begin(); it != out.terms_.end();) {
    Matrix& mat = it->second;
    bool any = false;
    for (Eigen::Index idx = 0; idx < mat.size(); ++idx) {
      if (std::abs(mat.data()[idx]) <= prune) {
        mat.data()[idx] = 0.0;
      } else {
        any = true;
      }
    }
    it = any ? std::next(it) : out.terms_.erase(it);
  }
  return out;
}

void NCDiffOp::check_compatible(const NCDiffOp& other) const {
  if (m_ != other.m_) throw std::invalid_argument("NCDiffOp: fiber dimension mismatch");
  if (torus_ != other.torus_) {
    if (!torus_ || !other.torus_ || torus_->n() != other.torus_->n() ||
        torus_->theta().matrix() != other.torus_->theta().matrix())
      throw std::invalid_argument("NCDiffOp: operators live on different tori");
  }
}

NCDiffOp& NCDiffOp::operator+=(const NCDiffOp& other) {
  check_compatible(other);
  for (const auto& [key, mat] : other.terms_) add_term(key.alpha, key.k, mat);
  *this = pruned(torus_->prune());
  return *this;
}

NCDiffOp& NCDiffOp::operator-=(const NCDiffOp& other) {
  check_compatible(other);
  for (const auto& [key, mat] : other.terms_) add_term(key.alpha, key.k, -mat);
  *this = pruned(torus_->prune());
  return *this;
}

NCDiffOp& NCDiffOp::operator*=(Complex s) {
  for (auto& [key, mat] : terms_) mat *= s;
  return *this;
}

NCDiffOp operator*(const NCDiffOp& p, const NCDiffOp& q) { return compose(p, q); }

NCDiffOp compose_serial(const NCDiffOp& p, const NCDiffOp& q) {
  p.check_compatible(q);
  const auto pt = flatten(p);
  const auto qt = flatten(q);
  std::vector<std::vector<Contribution>> parts(pt.size());
  for (std::size_t i = 0; i < pt.size(); ++i) {
    for (const auto& [kb, mb] : qt) pair_terms(*p.torus(), pt[i].first, pt[i].second, kb, mb, parts[i]);
  }
  return merge(p, parts);
}

NCDiffOp compose(const NCDiffOp& p, const NCDiffOp& q) {
#ifdef NCK_HAVE_OPENMP
  p.check_compatible(q);
  const auto pt = flatten(p);
  const auto qt = flatten(q);
  const auto np = static_cast<long>(pt.size());
  const auto nq = static_cast<long>(qt.size());
  std::vector<std::vector<Contribution>> parts(pt.size() * qt.size());
#pragma omp parallel for schedule(dynamic) if (np * nq >= 64 && !omp_in_parallel())
  for (long idx = 0; idx < np * nq; ++idx) {
    const auto i = static_cast<std::size_t>(idx / nq);
    const auto j = static_cast<std::size_t>(idx % nq);
    pair_terms(*p.torus(), pt[i].first, pt[i].second, qt[j].first, qt[j].second,
               parts[static_cast<std::size_t>(idx)]);
  }
  return merge(p, parts);
#else
  return compose_serial(p, q);
#endif
}

NCDiffOp adjoint(const NCDiffOp& p) {
  const auto& torus = p.torus();
  const int n = torus->n();
  NCDiffOp out(torus, p.m());
  const MultiIndex none(static_cast<std::size_t>(n), 0);
  for (const auto& [key, mat] : p.terms()) {
    NCDiffOp lhs(torus, p.m());
    lhs.add_term(key.alpha, Exponent::zero(n), mat.adjoint());
    NCDiffOp rhs(torus, p.m());
    rhs.add_term(none, -key.k, torus->star_phase(key.k) * Matrix::Identity(p.m(), p.m()));
    const double sign = order(key.alpha) % 2 == 0 ? 1.0 : -1.0;
    out += sign * compose_serial(lhs, rhs);
  }
  return out;
}

NCDiffOp commutator(const NCDiffOp& p, const NCDiffOp& q) { return compose(p, q) - compose(q, p); }

NCDiffOp anticommutator(const NCDiffOp& p, const NCDiffOp& q) {
  return compose(p, q) + compose(q, p);
}

double residual_norm(const NCDiffOp& p) { return residual_norm_above(p, -1); }

double residual_norm_above(const NCDiffOp& p, int max_order) {
  double r = 0.0;
  for (const auto& [key, mat] : p.terms()) {
    if (order(key.alpha) > max_order) r = std::max(r, linalg::max_abs(mat));
  }
  return r;
}

HVector apply(const NCDiffOp& p, const HVector& v) {
  if (static_cast<int>(v.size()) != p.m())
    throw std::invalid_argument("apply: vector has " + std::to_string(v.size()) +
                                " components, operator acts on " + std::to_string(p.m()));
  const Torus& torus = *p.torus();
  HVector out(v.size(), TorusElement(torus.n()));
  for (const auto& [key, mat] : p.terms()) {
    for (int j = 0; j < p.m(); ++j) {
      const auto& vj = v[static_cast<std::size_t>(j)];
      if (vj.empty()) continue;
      if (vj.n() != torus.n()) throw std::invalid_argument("apply: dimension mismatch");
      for (const auto& [mm, x] : vj.coeffs()) {
        const Complex s = Torus::derivation_symbol(key.alpha, mm);
        if (s == Complex{}) continue;
        const Complex base = s * x * torus.product_phase(key.k, mm);
        const Exponent target = key.k + mm;
        for (int i = 0; i < p.m(); ++i) {
          if (mat(i, j) != Complex{}) out[static_cast<std::size_t>(i)].add_term(target, mat(i, j) * base);
        }
      }
    }
  }
  for (auto& e : out) e = e.pruned(torus.prune());
  return out;
}

Complex inner_product(const Torus& torus, const HVector& x, const HVector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("inner_product: length mismatch");
  Complex r = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& xi = x[i].empty() ? TorusElement::zero(torus.n()) : x[i];
    const auto& yi = y[i].empty() ? TorusElement::zero(torus.n()) : y[i];
    r += torus.trace(torus.mul(torus.star(xi), yi));
  }
  return r;
}

HVector basis_vector(int n, int m, const Exponent& k, int i) {
  HVector v(static_cast<std::size_t>(m), TorusElement(n));
  v.at(static_cast<std::size_t>(i)) = TorusElement::monomial(k);
  return v;
}

}  // namespace nck
