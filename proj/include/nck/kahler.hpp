#pragma once

// The Dirac operator on A_Theta (x) C^N, its lift to A_Theta (x) C^N (x) C^N,
// the matching-indexed complex structures and the resulting Kahler operators.
//
// Fiber convention: C^N (x) C^N is flattened with kron(first, second), so the
// paper's a (x) X (x) Y is kron(X, Y) here. The grading is 1 (x) sigma (x) sigma
// and the Hodge operator 1 (x) 1 (x) sigma.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nck/clifford.hpp"
#include "nck/diffop.hpp"
#include "nck/report.hpp"
#include "nck/torus.hpp"

namespace nck {

/// Perfect matching of {1, ..., 2k} into increasing pairs.
struct Matching {
  std::vector<std::pair<int, int>> pairs;

  int k() const { return static_cast<int>(pairs.size()); }
  /// "1-2,3-4".
  std::string to_string() const;
  /// (1,2), (3,4), ..., (n-1,n).
  static Matching standard(int n);
  /// Parses "1-2,3-4" and validates it for {1..n}. Throws std::invalid_argument
  /// with a message containing "not a perfect matching" when it is not one.
  static Matching parse(const std::string& text, int n);

  friend bool operator==(const Matching&, const Matching&) = default;
};

/// Throws std::invalid_argument ("not a perfect matching ...") unless `m`
/// partitions {1..n} into increasing pairs.
void validate_matching(const Matching& m, int n);

/// All perfect matchings of {1..two_k}: smallest unmatched element first,
/// partner ascending. Count (two_k - 1)!!.
std::vector<Matching> enumerate_matchings(int two_k);

/// D = sum_j d_j (x) gamma_j on the C^N fiber.
NCDiffOp build_dirac(const std::shared_ptr<const Torus>& torus, const GammaRep& rep);

struct LiftedOperators {
  NCDiffOp Dfrak;
  NCDiffOp Dfrak_bar;
  NCDiffOp d;
  NCDiffOp d_star;
};

/// Dfrak = sum d_j (x) 1 (x) gamma_j, Dfrak_bar = -eps' sum d_j (x) gamma_j (x) sigma,
/// d = (Dfrak - i Dfrak_bar)/2 and d* = (Dfrak + i Dfrak_bar)/2.
LiftedOperators build_lifted(const std::shared_ptr<const Torus>& torus, const GammaRep& rep,
                             int eps_prime);

/// sum_j (i eps'/2) 1 (x) gamma_j (x) gamma_j sigma.
NCDiffOp build_T_script(const std::shared_ptr<const Torus>& torus, const GammaRep& rep,
                        int eps_prime);

/// 1/2 sum over pairs (l,j) of 1 (x) (1 (x) gamma_l gamma_j + gamma_l gamma_j (x) 1).
NCDiffOp build_I(const std::shared_ptr<const Torus>& torus, const Matching& matching,
                 const GammaRep& rep);

/// Grading 1 (x) sigma (x) sigma.
Matrix grading_matrix(const GammaRep& rep);
/// Hodge operator 1 (x) 1 (x) sigma.
Matrix hodge_matrix(const GammaRep& rep);
/// 1 (x) sigma (x) 1, the intertwiner between the eps' = +1 and -1 packages.
Matrix pm_intertwiner(const GammaRep& rep);

struct KahlerPackage {
  std::shared_ptr<const Torus> torus;
  std::shared_ptr<const GammaRep> rep;
  int eps_prime = 1;
  Matching matching;

  NCDiffOp D;
  NCDiffOp Dfrak;
  NCDiffOp Dfrak_bar;
  NCDiffOp d;
  NCDiffOp d_star;
  NCDiffOp T_script;
  NCDiffOp I;
  NCDiffOp d2;
  NCDiffOp del;
  NCDiffOp delbar;
  NCDiffOp T;
  NCDiffOp T_bar;
  NCDiffOp grading;
  NCDiffOp hodge;
};

/// d2 = [I, d], del = (d - i d2)/2, delbar = (d + i d2)/2, T = (T_script - i I)/2,
/// T_bar = (T_script + i I)/2.
KahlerPackage build_kahler_package(const std::shared_ptr<const Torus>& torus,
                                   const Matching& matching, int eps_prime);
/// Same, reusing an existing gamma representation.
KahlerPackage build_kahler_package(const std::shared_ptr<const Torus>& torus,
                                   std::shared_ptr<const GammaRep> rep, const Matching& matching,
                                   int eps_prime);
/// Recomputes d2, del, delbar, T, T_bar from pkg.I (after replacing it).
void rebuild_from_I(KahlerPackage& pkg);

/// The explicit 4x4 del and delbar for n = 2 written out entry by entry.
std::pair<NCDiffOp, NCDiffOp> explicit_n2_differentials(const std::shared_ptr<const Torus>& torus,
                                                        int eps_prime);

/// Deterministic sample elements used for the [X, a] checks.
std::vector<TorusElement> sample_elements(int n, int count, unsigned long long seed);

/// The chain of Section 3 identities that produce the package: Dfrak^2 = Dfrak_bar^2,
/// {Dfrak, Dfrak_bar} = 0, d^2 = 0, [T_script, d] = d, the I relations and
/// {d, d2*} = {d*, d2} = 0.
VerificationReport verify_core(const KahlerPackage& pkg, double tol = kVerifyTol);

/// Every N=(1,1) and N=(2,2) axiom, the zeta = -1 Hodge relations and the
/// Laplacian equalities. Includes verify_core.
VerificationReport verify_n22(const KahlerPackage& pkg, double tol = kVerifyTol);

/// JD = eps' DJ, J^2 = eps and the zero- and first-order conditions for
/// J = (a -> a*) (x) J_N, sampled on monomials. J^2 and JD are tested on all
/// basis vectors in box(3) (box(1) for n > 4).
VerificationReport verify_real_structure(const std::shared_ptr<const Torus>& torus,
                                         const GammaRep& rep, ConjVariant variant,
                                         double tol = kVerifyTol);

/// max of ||S del+ - del- S|| and ||S delbar+ - delbar- S||.
double pm_conjugation_residual(const KahlerPackage& plus, const KahlerPackage& minus,
                               const Matrix& S);
/// Builds both packages and uses S = 1 (x) sigma (x) 1.
double verify_pm_conjugation(const std::shared_ptr<const Torus>& torus, const Matching& matching);

/// Smallest residual_norm(d2(M) - d2(M')) over distinct matchings (infinity if
/// there is only one).
double min_d2_separation(const std::shared_ptr<const Torus>& torus, int two_k);
/// True iff every pair of matchings gives d2 operators more than 0.1 apart.
bool verify_distinctness(const std::shared_ptr<const Torus>& torus, int two_k);

struct GridEntry {
  Matching matching;
  int eps_prime = 1;
  VerificationReport report;
};

/// verify_n22 for every matching of {1..n} and each listed eps', one package per
/// task; results are ordered by matching, then eps'.
std::vector<GridEntry> verify_grid(const std::shared_ptr<const Torus>& torus,
                                   const std::vector<Matching>& matchings,
                                   const std::vector<int>& eps_primes, double tol = kVerifyTol);

}  // namespace nck
