#pragma once

// Smooth noncommutative torus A_Theta modeled by finitely supported Fourier
// series in normal-ordered monomials U_1^{m_1} ... U_n^{m_n}.
//
// Generator and derivation indices are 1-based throughout the public API so
// that U_1, d_1, ... read the same in code as on paper.

#include <compare>
#include <complex>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nck {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kDefaultPrune = 1e-14;
inline constexpr double kDefaultTol = 1e-9;

/// Lattice point m in Z^n labelling the monomial U^m.
struct Exponent {
  std::vector<int> m;

  Exponent() = default;
  explicit Exponent(std::vector<int> entries) : m(std::move(entries)) {}

  static Exponent zero(int n) { return Exponent(std::vector<int>(n, 0)); }
  /// e_j, 1-based.
  static Exponent unit(int n, int j);

  int size() const { return static_cast<int>(m.size()); }
  int operator[](int i) const { return m[i]; }
  bool is_zero() const;
  int max_abs() const;

  friend Exponent operator+(const Exponent& a, const Exponent& b);
  friend Exponent operator-(const Exponent& a);
  auto operator<=>(const Exponent&) const = default;
};

/// Real skew-symmetric deformation matrix. U_j U_l = exp(2 pi i Theta_{lj}) U_l U_j.
class ThetaMatrix {
 public:
  ThetaMatrix() = default;
  /// Throws std::invalid_argument unless `entries` is square, of even size and
  /// skew-symmetric to within 1e-12.
  explicit ThetaMatrix(Eigen::MatrixXd entries);

  /// Builds Theta from its strict upper triangle; the rest follows by skew-symmetry.
  static ThetaMatrix from_upper(int n, const std::vector<std::vector<double>>& rows);
  /// Commutative torus.
  static ThetaMatrix zero(int n);
  /// Uniform(0,1) upper triangle from a fixed seed.
  static ThetaMatrix random(int n, unsigned long long seed);
  /// Deterministic default: fractional parts of square roots of primes.
  static ThetaMatrix standard(int n);

  int n() const { return static_cast<int>(entries_.rows()); }
  /// 1-based entry Theta_{jk}.
  double operator()(int j, int k) const { return entries_(j - 1, k - 1); }
  const Eigen::MatrixXd& matrix() const { return entries_; }

  /// True when every upper entry is p/q with q <= 1000 to within 1e-12. The
  /// C*-algebra is then not simple; no identity checked here depends on it.
  bool looks_rational() const;

 private:
  Eigen::MatrixXd entries_;
};

/// Finitely supported element sum_m alpha_m U^m. Immutable in spirit: all
/// algebra operations live on Torus and return new values.
class TorusElement {
 public:
  using Coeffs = std::map<Exponent, Complex>;

  TorusElement() = default;
  explicit TorusElement(int n) : n_(n) {}
  TorusElement(int n, Coeffs coeffs);

  static TorusElement zero(int n) { return TorusElement(n); }
  static TorusElement scalar(int n, Complex c);
  static TorusElement one(int n) { return scalar(n, 1.0); }
  static TorusElement monomial(const Exponent& m, Complex c = 1.0);
  /// U_j, 1-based.
  static TorusElement generator(int n, int j);

  int n() const { return n_; }
  const Coeffs& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }
  std::size_t support_size() const { return coeffs_.size(); }
  Complex coeff(const Exponent& m) const;

  /// Largest coefficient magnitude (0 for the zero element).
  double max_abs() const;
  /// sum |alpha_m|^2, which equals tau(a* a).
  double norm_sq() const;
  /// Largest |m_i| over the support.
  int radius() const;

  /// Drops coefficients with magnitude <= prune.
  TorusElement pruned(double prune = kDefaultPrune) const;

  void add_term(const Exponent& m, Complex c);

  TorusElement& operator+=(const TorusElement& other);
  TorusElement& operator-=(const TorusElement& other);
  TorusElement& operator*=(Complex s);
  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend TorusElement operator*(Complex s, TorusElement a) { return a *= s; }
  friend TorusElement operator-(TorusElement a) { return a *= -1.0; }

 private:
  int n_ = 0;
  Coeffs coeffs_;
};

/// Coefficient-wise agreement within `tol`.
bool approx_equal(const TorusElement& a, const TorusElement& b, double tol = kDefaultTol);

/// The algebra A_Theta: product, involution, trace and the canonical derivations.
class Torus {
 public:
  explicit Torus(ThetaMatrix theta, double prune = kDefaultPrune);

  int n() const { return theta_.n(); }
  const ThetaMatrix& theta() const { return theta_; }
  double prune() const { return prune_; }

  /// lambda(m,k) with U^m U^k = lambda(m,k) U^{m+k}.
  Complex product_phase(const Exponent& m, const Exponent& k) const;
  /// mu(m) with (U^m)* = mu(m) U^{-m}.
  Complex star_phase(const Exponent& m) const;

  TorusElement mul(const TorusElement& a, const TorusElement& b) const;
  TorusElement star(const TorusElement& a) const;
  Complex trace(const TorusElement& a) const;
  /// d_j(U^m) = 2 pi i m_j U^m, 1-based j.
  TorusElement derive(int j, const TorusElement& a) const;
  /// d^alpha for a multi-index alpha (all derivations commute).
  TorusElement derive_multi(std::span<const int> alpha, const TorusElement& a) const;
  /// Eigenvalue of d^alpha on U^m: prod_j (2 pi i m_j)^{alpha_j}.
  static Complex derivation_symbol(std::span<const int> alpha, const Exponent& m);

  /// Restricts the support to the box [-radius, radius]^n.
  static TorusElement truncate(const TorusElement& a, int radius);

  /// Commutator ab - ba.
  TorusElement commutator(const TorusElement& a, const TorusElement& b) const;

 private:
  void check_dim(const TorusElement& a) const;

  ThetaMatrix theta_;
  double prune_;
};

/// All exponents in [-radius, radius]^n in lexicographic order.
std::vector<Exponent> box_exponents(int n, int radius);

}  // namespace nck
