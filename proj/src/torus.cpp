#include "nck/torus.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace nck {

Exponent Exponent::unit(int n, int j) {
  if (j < 1 || j > n) throw std::invalid_argument("Exponent::unit: index out of range");
  Exponent e = zero(n);
  e.m[j - 1] = 1;
  return e;
}

bool Exponent::is_zero() const {
  return std::all_of(m.begin(), m.end(), [](int x) { return x == 0; });
}

int Exponent::max_abs() const {
  int r = 0;
  for (int x : m) r = std::max(r, std::abs(x));
  return r;
}

Exponent operator+(const Exponent& a, const Exponent& b) {
  if (a.size() != b.size()) throw std::invalid_argument("Exponent: dimension mismatch");
  Exponent r = a;
  for (int i = 0; i < r.size(); ++i) r.m[i] += b.m[i];
  return r;
}

Exponent operator-(const Exponent& a) {
  Exponent r = a;
  for (int& x : r.m) x = -x;
  return r;
}

// ---------------------------------------------------------------------------

ThetaMatrix::ThetaMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols())
    throw std::invalid_argument("ThetaMatrix: matrix must be square");
  const auto n = entries_.rows();
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("ThetaMatrix: n must be even and positive, got " +
                                std::to_string(n));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) {
      if (std::abs(entries_(j, k) + entries_(k, j)) > 1e-12)
        throw std::invalid_argument("ThetaMatrix: not skew-symmetric");
    }
  }
}

ThetaMatrix ThetaMatrix::from_upper(int n, const std::vector<std::vector<double>>& rows) {
  if (static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("ThetaMatrix: expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(rows[j].size()) != n)
      throw std::invalid_argument("ThetaMatrix: row " + std::to_string(j) + " has wrong length");
    for (int k = j + 1; k < n; ++k) {
      t(j, k) = rows[j][k];
      t(k, j) = -rows[j][k];
    }
  }
  return ThetaMatrix(std::move(t));
}

ThetaMatrix ThetaMatrix::zero(int n) { return ThetaMatrix(Eigen::MatrixXd::Zero(n, n)); }

ThetaMatrix ThetaMatrix::random(int n, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      t(j, k) = u(rng);
      t(k, j) = -t(j, k);
    }
  }
  return ThetaMatrix(std::move(t));
}

ThetaMatrix ThetaMatrix::standard(int n) {
  static constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                                    53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109,
                                    113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179,
                                    181, 191, 193, 197};
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  std::size_t p = 0;
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double s = std::sqrt(static_cast<double>(kPrimes[p % std::size(kPrimes)]));
      ++p;
      t(j, k) = s - std::floor(s);
      t(k, j) = -t(j, k);
    }
  }
  return ThetaMatrix(std::move(t));
}

bool ThetaMatrix::looks_rational() const {
  for (int j = 0; j < n(); ++j) {
    for (int k = j + 1; k < n(); ++k) {
      const double x = entries_(j, k);
      bool rational = false;
      for (int q = 1; q <= 1000 && !rational; ++q) {
        rational = std::abs(x * q - std::round(x * q)) < 1e-12 * q;
      }
      if (!rational) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

TorusElement::TorusElement(int n, Coeffs coeffs) : n_(n), coeffs_(std::move(coeffs)) {
  for (const auto& [m, c] : coeffs_) {
    if (m.size() != n_) throw std::invalid_argument("TorusElement: exponent dimension mismatch");
  }
}

TorusElement TorusElement::scalar(int n, Complex c) {
  return monomial(Exponent::zero(n), c);
}

TorusElement TorusElement::monomial(const Exponent& m, Complex c) {
  TorusElement e(m.size());
  e.coeffs_.emplace(m, c);
  return e;
}

TorusElement TorusElement::generator(int n, int j) { return monomial(Exponent::unit(n, j)); }

Complex TorusElement::coeff(const Exponent& m) const {
  auto it = coeffs_.find(m);
  return it == coeffs_.end() ? Complex{} : it->second;
}

double TorusElement::max_abs() const {
  double r = 0.0;
  for (const auto& [m, c] : coeffs_) r = std::max(r, std::abs(c));
  return r;
}

double TorusElement::norm_sq() const {
  double r = 0.0;
  for (const auto& [m, c] : coeffs_) r += std::norm(c);
  return r;
}

int TorusElement::radius() const {
  int r = 0;
  for (const auto& [m, c] : coeffs_) r = std::max(r, m.max_abs());
  return r;
}

TorusElement TorusElement::pruned(double prune) const {
  TorusElement r(n_);
  for (const auto& [m, c] : coeffs_) {
    if (std::abs(c) > prune) r.coeffs_.emplace_hint(r.coeffs_.end(), m, c);
  }
  return r;
}

void TorusElement::add_term(const Exponent& m, Complex c) {
  if (m.size() != n_) throw std::invalid_argument("TorusElement: exponent dimension mismatch");
  auto [it, inserted] = coeffs_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

TorusElement& TorusElement::operator+=(const TorusElement& other) {
  if (n_ == 0) n_ = other.n_;
  if (other.n_ != n_ && !other.empty())
    throw std::invalid_argument("TorusElement: dimension mismatch");
  for (const auto& [m, c] : other.coeffs_) add_term(m, c);
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& other) {
  if (n_ == 0) n_ = other.n_;
  if (other.n_ != n_ && !other.empty())
    throw std::invalid_argument("TorusElement: dimension mismatch");
  for (const auto& [m, c] : other.coeffs_) add_term(m, -c);
  return *this;
}

TorusElement& TorusElement::operator*=(Complex s) {
  for (auto& [m, c] : coeffs_) c *= s;
  return *this;
}

bool approx_equal(const TorusElement& a, const TorusElement& b, double tol) {
  return (a - b).max_abs() <= tol;
}

// ---------------------------------------------------------------------------

Torus::Torus(ThetaMatrix theta, double prune) : theta_(std::move(theta)), prune_(prune) {}

void Torus::check_dim(const TorusElement& a) const {
  if (a.n() != n())
    throw std::invalid_argument("Torus: element has " + std::to_string(a.n()) +
                                " generators, algebra has " + std::to_string(n()));
}

Complex Torus::product_phase(const Exponent& m, const Exponent& k) const {
  // Moving U_a^{k_a} left past U_b^{m_b} (a < b) costs exp(2 pi i Theta_ab m_b k_a).
  double angle = 0.0;
  const int dim = n();
  for (int a = 0; a < dim; ++a) {
    if (k[a] == 0) continue;
    for (int b = a + 1; b < dim; ++b) {
      angle += static_cast<double>(m[b]) * k[a] * theta_.matrix()(a, b);
    }
  }
  return std::polar(1.0, kTwoPi * angle);
}

Complex Torus::star_phase(const Exponent& m) const {
  double angle = 0.0;
  const int dim = n();
  for (int a = 0; a < dim; ++a) {
    for (int b = a + 1; b < dim; ++b) {
      angle += static_cast<double>(m[a]) * m[b] * theta_.matrix()(a, b);
    }
  }
  return std::polar(1.0, kTwoPi * angle);
}

TorusElement Torus::mul(const TorusElement& a, const TorusElement& b) const {
  check_dim(a);
  check_dim(b);
  TorusElement r(n());
  for (const auto& [m, x] : a.coeffs()) {
    for (const auto& [k, y] : b.coeffs()) {
      r.add_term(m + k, x * y * product_phase(m, k));
    }
  }
  return r.pruned(prune_);
}

TorusElement Torus::star(const TorusElement& a) const {
  check_dim(a);
  TorusElement r(n());
  for (const auto& [m, x] : a.coeffs()) r.add_term(-m, std::conj(x) * star_phase(m));
  return r;
}

Complex Torus::trace(const TorusElement& a) const {
  check_dim(a);
  return a.coeff(Exponent::zero(n()));
}

TorusElement Torus::derive(int j, const TorusElement& a) const {
  check_dim(a);
  if (j < 1 || j > n()) throw std::invalid_argument("Torus::derive: index out of range");
  TorusElement r(n());
  for (const auto& [m, x] : a.coeffs()) {
    if (m[j - 1] != 0) r.add_term(m, x * Complex(0.0, kTwoPi * m[j - 1]));
  }
  return r;
}

Complex Torus::derivation_symbol(std::span<const int> alpha, const Exponent& m) {
  Complex s = 1.0;
  for (std::size_t j = 0; j < alpha.size(); ++j) {
    for (int p = 0; p < alpha[j]; ++p) s *= Complex(0.0, kTwoPi * m[static_cast<int>(j)]);
  }
  return s;
}

TorusElement Torus::derive_multi(std::span<const int> alpha, const TorusElement& a) const {
  check_dim(a);
  if (static_cast<int>(alpha.size()) != n())
    throw std::invalid_argument("Torus::derive_multi: multi-index dimension mismatch");
  TorusElement r(n());
  for (const auto& [m, x] : a.coeffs()) {
    const Complex s = derivation_symbol(alpha, m);
    if (s != Complex{}) r.add_term(m, x * s);
  }
  return r;
}

TorusElement Torus::truncate(const TorusElement& a, int radius) {
  TorusElement r(a.n());
  for (const auto& [m, x] : a.coeffs()) {
    if (m.max_abs() <= radius) r.add_term(m, x);
  }
  return r;
}

TorusElement Torus::commutator(const TorusElement& a, const TorusElement& b) const {
  return (mul(a, b) - mul(b, a)).pruned(prune_);
}

std::vector<Exponent> box_exponents(int n, int radius) {
  std::vector<Exponent> out;
  if (radius < 0) return out;
  std::vector<int> cur(n, -radius);
  while (true) {
    out.emplace_back(cur);
    int i = n - 1;
    while (i >= 0 && cur[i] == radius) {
      cur[i] = -radius;
      --i;
    }
    if (i < 0) break;
    ++cur[i];
  }
  return out;
}

}  // namespace nck
