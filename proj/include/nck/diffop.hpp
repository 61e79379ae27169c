#pragma once

// Normal-ordered matrix-valued differential operators on A_Theta (x) C^m.
//
// A term is U^k d^alpha (x) M with M a constant m x m matrix; an operator is a
// finite sum of terms with distinct (alpha, k). Collecting the terms with a
// fixed alpha gives the matrix of torus elements multiplying d^alpha, which
// is what entry() returns. Two operators act identically on the smooth domain
// iff their normal forms agree, so identities reduce to coefficient checks.

#include <compare>
#include <map>
#include <memory>
#include <vector>

#include "nck/linalg.hpp"
#include "nck/torus.hpp"

namespace nck {

using linalg::Matrix;
using MultiIndex = std::vector<int>;
/// Element of the dense domain A_Theta^m.
using HVector = std::vector<TorusElement>;

struct TermKey {
  MultiIndex alpha;
  Exponent k;
  auto operator<=>(const TermKey&) const = default;
};

int order(const MultiIndex& alpha);

class NCDiffOp {
 public:
  using Terms = std::map<TermKey, Matrix>;

  NCDiffOp() = default;
  NCDiffOp(std::shared_ptr<const Torus> torus, int m);

  static NCDiffOp zero(std::shared_ptr<const Torus> torus, int m);
  static NCDiffOp identity(std::shared_ptr<const Torus> torus, int m);
  /// 1 (x) M.
  static NCDiffOp constant(std::shared_ptr<const Torus> torus, const Matrix& M);
  /// d_j (x) M, 1-based j.
  static NCDiffOp derivation(std::shared_ptr<const Torus> torus, int j, const Matrix& M);
  /// d_j (x) Id_m.
  static NCDiffOp derivation(std::shared_ptr<const Torus> torus, int j, int m);
  /// Left multiplication by a, tensored with M.
  static NCDiffOp multiplication(std::shared_ptr<const Torus> torus, const TorusElement& a,
                                 const Matrix& M);
  /// Left multiplication by a (x) Id_m.
  static NCDiffOp multiplication(std::shared_ptr<const Torus> torus, const TorusElement& a, int m);
  /// Left multiplication by a matrix of torus elements (rows of entries).
  static NCDiffOp multiplication(std::shared_ptr<const Torus> torus,
                                 const std::vector<std::vector<TorusElement>>& A);

  const std::shared_ptr<const Torus>& torus() const { return torus_; }
  int n() const { return torus_ ? torus_->n() : 0; }
  int m() const { return m_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds U^k d^alpha (x) M to the operator.
  void add_term(const MultiIndex& alpha, const Exponent& k, const Matrix& M);

  /// Highest derivation order present (0 for multiplication operators, -1 for zero).
  int degree() const;
  /// Torus element multiplying d^alpha in fiber position (i, j), 0-based.
  TorusElement entry(const MultiIndex& alpha, int i, int j) const;
  /// Multi-indices present, in lexicographic order.
  std::vector<MultiIndex> multi_indices() const;

  /// Drops matrix entries with magnitude <= prune and then empty terms.
  NCDiffOp pruned(double prune = kDefaultPrune) const;

  NCDiffOp& operator+=(const NCDiffOp& other);
  NCDiffOp& operator-=(const NCDiffOp& other);
  NCDiffOp& operator*=(Complex s);
  friend NCDiffOp operator+(NCDiffOp a, const NCDiffOp& b) { return a += b; }
  friend NCDiffOp operator-(NCDiffOp a, const NCDiffOp& b) { return a -= b; }
  friend NCDiffOp operator*(Complex s, NCDiffOp a) { return a *= s; }
  friend NCDiffOp operator-(NCDiffOp a) { return a *= -1.0; }
  /// Composition P Q (P applied last).
  friend NCDiffOp operator*(const NCDiffOp& p, const NCDiffOp& q);

  /// Throws std::invalid_argument unless both operators share fiber size and Theta.
  void check_compatible(const NCDiffOp& other) const;

 private:
  std::shared_ptr<const Torus> torus_;
  int m_ = 0;
  Terms terms_;
};

/// Normal-ordered product, parallel over term pairs when OpenMP is available.
/// Contributions are merged in a fixed order, so the result is identical to
/// compose_serial bit for bit.
NCDiffOp compose(const NCDiffOp& p, const NCDiffOp& q);
NCDiffOp compose_serial(const NCDiffOp& p, const NCDiffOp& q);

/// Formal adjoint for <x, y> = sum_i tau(x_i* y_i).
NCDiffOp adjoint(const NCDiffOp& p);
NCDiffOp commutator(const NCDiffOp& p, const NCDiffOp& q);
NCDiffOp anticommutator(const NCDiffOp& p, const NCDiffOp& q);

/// Largest coefficient magnitude over all terms and fiber entries.
double residual_norm(const NCDiffOp& p);
/// Same, restricted to terms with derivation order > max_order.
double residual_norm_above(const NCDiffOp& p, int max_order);

HVector apply(const NCDiffOp& p, const HVector& v);
Complex inner_product(const Torus& torus, const HVector& x, const HVector& y);

/// Basis vector U^k in fiber slot i (0-based) of A_Theta^m.
HVector basis_vector(int n, int m, const Exponent& k, int i);

}  // namespace nck
