#pragma once

// Holomorphic calculus on a 2n-torus: delta_j = d_2j + i d_2j-1, the algebra of
// holomorphic elements, delbar-connections on free modules, flatness, H^0,
// morphisms and the comparison with the Polishchuk-Schwarz d_tau on a 2-torus.
//
// Connections act on column vectors by left multiplication:
//   nabla_j xi = delta_j(xi) + A_j xi.

#include <functional>
#include <vector>

#include "nck/diffop.hpp"
#include "nck/torus.hpp"

namespace nck {

/// Square matrix of torus elements, row-major.
using ElementMatrix = std::vector<std::vector<TorusElement>>;

ElementMatrix element_matrix_zero(int n, int m);
ElementMatrix element_matrix_identity(int n, int m);
ElementMatrix element_matrix_mul(const Torus& torus, const ElementMatrix& a, const ElementMatrix& b);
/// Largest coefficient magnitude over all entries.
double element_matrix_max_abs(const ElementMatrix& a);

/// delta_j(a) = d_2j(a) + i d_2j-1(a), 1-based j.
TorusElement delta(const Torus& torus, int j, const TorusElement& a);
/// (delta_1(a), ..., delta_n(a)) for a 2n-torus.
std::vector<TorusElement> delbar_tuple(const Torus& torus, const TorusElement& a);
/// Eigenvalue of delta_j on U^m: 2 pi i (m_2j + i m_2j-1).
Complex delta_symbol(int j, const Exponent& m);

struct KernelBasis {
  std::vector<HVector> elements;
  int dim() const { return static_cast<int>(elements.size()); }
};

/// Diagonal symbol of an operator in the monomial basis.
using Symbol = std::function<Complex(const Exponent&)>;

/// Monomials U^m in box(R) annihilated by every symbol. The operators are
/// diagonal on monomials, so these span the kernel.
KernelBasis diagonal_kernel(int n, int radius, const std::vector<Symbol>& symbols,
                            double tol = kDefaultTol);
/// Holomorphic elements supported in box(R): the common kernel of delta_1..delta_n.
KernelBasis holomorphic_kernel(const Torus& torus, int radius, double tol = kDefaultTol);

struct Connection {
  int m = 0;
  /// One m x m matrix per delta_j.
  std::vector<ElementMatrix> A;
};

/// A_j = 0 for every j.
Connection grassmannian(int torus_dim, int m);

/// max over l < r of the largest coefficient of delta_l(A_r) - delta_r(A_l) + [A_l, A_r].
double flatness_check(const Torus& torus, const Connection& c);
/// The curvature matrix for one pair (l, r), 1-based.
ElementMatrix curvature(const Torus& torus, const Connection& c, int l, int r);

/// nabla_j as an operator on A_Theta^m.
NCDiffOp connection_operator(const std::shared_ptr<const Torus>& torus, const Connection& c, int j);

/// Basis of { xi supported in box(R)^m : delta_j(xi) + A_j xi = 0 for all j }.
/// Equations on modes outside the box are kept, so every returned xi is an exact
/// solution. Unknowns coupled by A are grouped and each group solved separately.
KernelBasis h0_solve(const Torus& torus, const Connection& c, int radius,
                     double tol = linalg::kRankTol);

/// max_j of the largest coefficient of delta_j(phi) + A2_j phi - phi A1_j, with
/// phi an m2 x m1 matrix.
double morphism_check(const Torus& torus, const std::vector<std::vector<TorusElement>>& phi,
                      const Connection& c1, const Connection& c2);

struct PsComparison {
  /// Scalar fixed on U_2.
  Complex c;
  /// Largest mismatch over the test set after scaling by c.
  double residual = 0.0;
};

/// Compares Phi([delbar, a]) with c d_tau(a), tau = i, on every monomial in box(R)
/// plus one random element; Phi reads off the coefficient of the single
/// (0,1)-form basis matrix. Requires a 2-torus.
PsComparison ps_compare(const std::shared_ptr<const Torus>& torus, int radius = 4);

/// d_tau(U1^r1 U2^r2) = 2 pi i (r1 tau + r2) U1^r1 U2^r2.
TorusElement d_tau(const Torus& torus, const TorusElement& a, Complex tau = Complex(0.0, 1.0));

}  // namespace nck
