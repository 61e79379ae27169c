#pragma once

// Irreducible representations of the complex Clifford algebra Cl(n), n even:
// gamma matrices with gamma_j* = -gamma_j and {gamma_j, gamma_k} = -2 delta_jk,
// the grading sigma, and the two charge conjugations J+ and J-.

#include <vector>

#include "nck/linalg.hpp"

namespace nck {

using linalg::Matrix;

inline constexpr int kMaxCliffordN = 10;

/// (epsilon, epsilon', epsilon'') with J^2 = eps, J gamma_j = eps' gamma_j J,
/// J sigma = eps'' sigma J.
struct SignTriple {
  int eps = 1;
  int eps_prime = 1;
  int eps_dprime = 1;
  friend bool operator==(const SignTriple&, const SignTriple&) = default;
};

enum class ConjVariant { plus, minus };

/// J = C o (entrywise conjugation).
struct ChargeConjugation {
  Matrix C;
  SignTriple signs;
  /// Largest defect among the defining relations and unitarity.
  double residual = 0.0;
};

struct GammaRep {
  int n = 0;
  int N = 0;
  std::vector<Matrix> gammas;
  Matrix sigma;
  Matrix conj_plus;
  Matrix conj_minus;
  SignTriple signs_plus;
  SignTriple signs_minus;

  /// gamma_j, 1-based.
  const Matrix& gamma(int j) const { return gammas.at(static_cast<std::size_t>(j - 1)); }
  const Matrix& conj(ConjVariant v) const { return v == ConjVariant::plus ? conj_plus : conj_minus; }
  const SignTriple& signs(ConjVariant v) const {
    return v == ConjVariant::plus ? signs_plus : signs_minus;
  }
};

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Builds the representation for even 2 <= n <= kMaxCliffordN, including both
/// charge conjugations. For n = 2 the matrices are
///   gamma_1 = i [[0,1],[1,0]], gamma_2 = i [[0,-i],[i,0]], sigma = diag(1,-1);
/// larger n use gamma_j (x) 1, sigma (x) i s_x, sigma (x) i s_y with the new grading
/// normalized so that gamma_1 ... gamma_n = c sigma (c = 1 if n/2 even, -i if odd).
GammaRep build_gamma(int n);

/// max over the defining relations: skew-adjointness, anticommutators,
/// sigma hermitian, sigma^2 = 1 and {sigma, gamma_j} = 0.
double relations_residual(const GammaRep& rep);

/// || gamma_1 ... gamma_n - c sigma ||_max with c = 1 (n/2 even) or -i (n/2 odd).
double grading_product_check(const GammaRep& rep);

/// Solves C conj(gamma_j) = eps' gamma_j C (eps' = +1 for plus, -1 for minus) as a
/// null-space problem, unitarizes and canonicalizes C (first nonzero entry, in
/// column-major order, real positive), then measures eps and eps''.
/// Throws std::logic_error if no unique unitary solution exists or the measured
/// signs disagree with the mod-8 table.
ChargeConjugation charge_conjugation(const GammaRep& rep, ConjVariant variant);

/// The mod-8 sign table for even n: column J+ or J-.
SignTriple expected_signs(int n, ConjVariant variant);

/// Dimension of the complex span of all 2^n ordered products gamma_{i1}...gamma_{ik},
/// i1 < ... < ik. Equals N^2 for an irreducible representation.
int clifford_span_rank(const GammaRep& rep);

}  // namespace nck
