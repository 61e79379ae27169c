#pragma once

// Ranks of the bimodules of (complex) differential forms on A_Theta. The
// coefficients of [d,a], [del,a], [delbar,a] are free over the span of constant
// fiber matrices, so each rank is the dimension of a matrix span.

#include <vector>

#include "nck/linalg.hpp"
#include "nck/report.hpp"
#include "nck/torus.hpp"

namespace nck {

using linalg::Matrix;

enum class FormFamily { mu, eta_bar, eta_hol };

/// Constant matrices carrying the one-forms (standard matching (1,2),(3,4),...).
///   mu_j      = 1 (x) gamma_j / 2 + (i eps'/2) gamma_j (x) sigma         j = 1..2n
///   eta_bar_p = 1 (x) eta_p / 4 + (i eps'/4) eta_p (x) sigma,  eta_p = gamma_2p - i gamma_2p-1
///   eta_hol_p = same with gamma_2p + i gamma_2p-1                        p = 1..n
/// so that [d,a] = sum_j d_j(a) mu_j and [delbar,a] = sum_p delta_p(a) eta_bar_p.
struct FormBasisMatrices {
  int torus_dim = 0;
  int eps_prime = 1;
  std::vector<Matrix> mu;
  std::vector<Matrix> eta_bar;
  std::vector<Matrix> eta_hol;

  const std::vector<Matrix>& family(FormFamily f) const;
};

FormBasisMatrices build_form_matrices(int torus_dim, int eps_prime = 1);

/// max over j, r of || X_j X_r + X_r X_j ||_max (j = r included).
double anticommutation_residual(const std::vector<Matrix>& family);

/// Orthonormal basis (as flattened columns) of the span of all level-fold
/// ordered products; level 0 gives the identity.
Matrix level_span(const std::vector<Matrix>& family, int level, double rel_tol = linalg::kRankTol);

/// Dimension of the span of all level-fold ordered products of the family.
int form_rank(const FormBasisMatrices& b, FormFamily family, int level);

/// For each r up to max_r (default: the torus dimension + 1):
///   rank(mu, r) = C(2n, r), the bidegree pieces hol^p bar^q have rank C(n,p) C(n,q),
///   sum over p+q=r of those ranks equals rank(mu, r), and the mu span equals the
///   span of mixed products (mutual containment).
VerificationReport bidegree_decomposition_check(int torus_dim, int max_r = -1,
                                                double tol = kVerifyTol);

/// (a_p b_q - a_q b_p) for 1 <= p < q <= n, ordered lexicographically in (p, q).
std::vector<TorusElement> product_map(const Torus& torus, const std::vector<TorusElement>& x,
                                      const std::vector<TorusElement>& y);

/// C(n, k) as an integer (0 outside 0 <= k <= n).
long binomial(int n, int k);

}  // namespace nck
