#include "nck/kahler.hpp"

#include <cmath>
#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace nck {

namespace {

constexpr Complex kI(0.0, 1.0);

void check_eps(int eps_prime) {
  if (eps_prime != 1 && eps_prime != -1)
    throw std::invalid_argument("eps_prime must be +1 or -1, got " + std::to_string(eps_prime));
}

void check_dims(const Torus& torus, const GammaRep& rep) {
  if (torus.n() != rep.n)
    throw std::invalid_argument("torus has " + std::to_string(torus.n()) +
                                " generators but the Clifford representation has n = " +
                                std::to_string(rep.n));
}

Matrix id(int N) { return Matrix::Identity(N, N); }

void extend_matchings(std::vector<int>& partner, int two_k, std::vector<Matching>& out) {
  int first = -1;
  for (int i = 0; i < two_k; ++i) {
    if (partner[static_cast<std::size_t>(i)] < 0) {
      first = i;
      break;
    }
  }
  if (first < 0) {
    Matching m;
    for (int i = 0; i < two_k; ++i) {
      const int j = partner[static_cast<std::size_t>(i)];
      if (i < j) m.pairs.emplace_back(i + 1, j + 1);
    }
    out.push_back(std::move(m));
    return;
  }
  for (int j = first + 1; j < two_k; ++j) {
    if (partner[static_cast<std::size_t>(j)] >= 0) continue;
    partner[static_cast<std::size_t>(first)] = j;
    partner[static_cast<std::size_t>(j)] = first;
    extend_matchings(partner, two_k, out);
    partner[static_cast<std::size_t>(first)] = -1;
    partner[static_cast<std::size_t>(j)] = -1;
  }
}

NCDiffOp laplacian(const std::shared_ptr<const Torus>& torus, int m) {
  NCDiffOp out(torus, m);
  for (int r = 1; r <= torus->n(); ++r) {
    const auto dr = NCDiffOp::derivation(torus, r, m);
    out += compose(dr, dr);
  }
  return out;
}

double max_over_samples(const std::vector<TorusElement>& samples,
                        const std::function<double(const TorusElement&)>& f) {
  double r = 0.0;
  for (const auto& a : samples) r = std::max(r, f(a));
  return r;
}

HVector apply_J(const Torus& torus, const Matrix& C, const HVector& v) {
  HVector out(v.size(), TorusElement(torus.n()));
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j].empty()) continue;
    const TorusElement s = torus.star(v[j]);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const Complex c = C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (c != Complex{}) out[i] += c * s;
    }
  }
  return out;
}

double hvector_max_abs(const HVector& v) {
  double r = 0.0;
  for (const auto& e : v) r = std::max(r, e.max_abs());
  return r;
}

HVector hvector_diff(const HVector& a, const HVector& b, Complex scale_b = 1.0) {
  HVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= scale_b * b[i];
  return out;
}

HVector left_mul(const Torus& torus, const TorusElement& a, const HVector& v) {
  HVector out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(e.empty() ? TorusElement(torus.n()) : torus.mul(a, e));
  return out;
}

std::vector<HVector> basis_vectors(int n, int m, int radius) {
  std::vector<HVector> out;
  for (const auto& k : box_exponents(n, radius)) {
    for (int i = 0; i < m; ++i) out.push_back(basis_vector(n, m, k, i));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string Matching::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) os << ',';
    os << pairs[i].first << '-' << pairs[i].second;
  }
  return os.str();
}

Matching Matching::standard(int n) {
  Matching m;
  for (int j = 1; j + 1 <= n; j += 2) m.pairs.emplace_back(j, j + 1);
  return m;
}

Matching Matching::parse(const std::string& text, int n) {
  Matching m;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos)
      throw std::invalid_argument("not a perfect matching: malformed pair '" + item + "'");
    try {
      std::size_t used = 0;
      const int a = std::stoi(item.substr(0, dash), &used);
      const std::string rest = item.substr(dash + 1);
      std::size_t used_b = 0;
      const int b = std::stoi(rest, &used_b);
      if (used_b != rest.size()) throw std::invalid_argument("trailing characters");
      m.pairs.emplace_back(a, b);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("not a perfect matching: malformed pair '" + item + "'");
    }
  }
  validate_matching(m, n);
  std::sort(m.pairs.begin(), m.pairs.end());
  return m;
}

void validate_matching(const Matching& m, int n) {
  if (n % 2 != 0 || n < 2)
    throw std::invalid_argument("not a perfect matching: n = " + std::to_string(n) +
                                " must be even and positive");
  std::set<int> seen;
  for (const auto& [a, b] : m.pairs) {
    if (a >= b)
      throw std::invalid_argument("not a perfect matching: pair " + std::to_string(a) + "-" +
                                  std::to_string(b) + " is not increasing");
    for (int x : {a, b}) {
      if (x < 1 || x > n)
        throw std::invalid_argument("not a perfect matching: index " + std::to_string(x) +
                                    " outside 1.." + std::to_string(n));
      if (!seen.insert(x).second)
        throw std::invalid_argument("not a perfect matching: index " + std::to_string(x) +
                                    " used twice");
    }
  }
  if (static_cast<int>(seen.size()) != n)
    throw std::invalid_argument("not a perfect matching: pairs cover " +
                                std::to_string(seen.size()) + " of " + std::to_string(n) +
                                " indices");
}

std::vector<Matching> enumerate_matchings(int two_k) {
  if (two_k < 2 || two_k % 2 != 0)
    throw std::invalid_argument("enumerate_matchings: need an even number >= 2, got " +
                                std::to_string(two_k));
  std::vector<Matching> out;
  std::vector<int> partner(static_cast<std::size_t>(two_k), -1);
  extend_matchings(partner, two_k, out);
  return out;
}

// ---------------------------------------------------------------------------

NCDiffOp build_dirac(const std::shared_ptr<const Torus>& torus, const GammaRep& rep) {
  check_dims(*torus, rep);
  NCDiffOp D(torus, rep.N);
  for (int j = 1; j <= rep.n; ++j) D += NCDiffOp::derivation(torus, j, rep.gamma(j));
  return D;
}

LiftedOperators build_lifted(const std::shared_ptr<const Torus>& torus, const GammaRep& rep,
                             int eps_prime) {
  check_dims(*torus, rep);
  check_eps(eps_prime);
  const int M = rep.N * rep.N;
  LiftedOperators out{NCDiffOp(torus, M), NCDiffOp(torus, M), NCDiffOp(torus, M),
                      NCDiffOp(torus, M)};
  for (int j = 1; j <= rep.n; ++j) {
    out.Dfrak += NCDiffOp::derivation(torus, j, kron(id(rep.N), rep.gamma(j)));
    out.Dfrak_bar +=
        NCDiffOp::derivation(torus, j, -static_cast<double>(eps_prime) * kron(rep.gamma(j), rep.sigma));
  }
  out.d = 0.5 * (out.Dfrak - kI * out.Dfrak_bar);
  out.d_star = 0.5 * (out.Dfrak + kI * out.Dfrak_bar);
  return out;
}

NCDiffOp build_T_script(const std::shared_ptr<const Torus>& torus, const GammaRep& rep,
                        int eps_prime) {
  check_dims(*torus, rep);
  check_eps(eps_prime);
  const int M = rep.N * rep.N;
  Matrix t = Matrix::Zero(M, M);
  for (int j = 1; j <= rep.n; ++j) t += kron(rep.gamma(j), rep.gamma(j) * rep.sigma);
  return NCDiffOp::constant(torus, (kI * (eps_prime / 2.0)) * t);
}

NCDiffOp build_I(const std::shared_ptr<const Torus>& torus, const Matching& matching,
                 const GammaRep& rep) {
  check_dims(*torus, rep);
  validate_matching(matching, rep.n);
  const int M = rep.N * rep.N;
  Matrix t = Matrix::Zero(M, M);
  for (const auto& [l, j] : matching.pairs) {
    const Matrix g = rep.gamma(l) * rep.gamma(j);
    t += kron(id(rep.N), g) + kron(g, id(rep.N));
  }
  return NCDiffOp::constant(torus, 0.5 * t);
}

Matrix grading_matrix(const GammaRep& rep) { return kron(rep.sigma, rep.sigma); }
Matrix hodge_matrix(const GammaRep& rep) { return kron(id(rep.N), rep.sigma); }
Matrix pm_intertwiner(const GammaRep& rep) { return kron(rep.sigma, id(rep.N)); }

void rebuild_from_I(KahlerPackage& pkg) {
  pkg.d2 = commutator(pkg.I, pkg.d);
  pkg.del = 0.5 * (pkg.d - kI * pkg.d2);
  pkg.delbar = 0.5 * (pkg.d + kI * pkg.d2);
  pkg.T = 0.5 * (pkg.T_script - kI * pkg.I);
  pkg.T_bar = 0.5 * (pkg.T_script + kI * pkg.I);
}

KahlerPackage build_kahler_package(const std::shared_ptr<const Torus>& torus,
                                   std::shared_ptr<const GammaRep> rep, const Matching& matching,
                                   int eps_prime) {
  KahlerPackage pkg;
  pkg.torus = torus;
  pkg.rep = std::move(rep);
  pkg.eps_prime = eps_prime;
  pkg.matching = matching;
  const GammaRep& r = *pkg.rep;

  pkg.D = build_dirac(torus, r);
  auto lifted = build_lifted(torus, r, eps_prime);
  pkg.Dfrak = std::move(lifted.Dfrak);
  pkg.Dfrak_bar = std::move(lifted.Dfrak_bar);
  pkg.d = std::move(lifted.d);
  pkg.d_star = std::move(lifted.d_star);
  pkg.T_script = build_T_script(torus, r, eps_prime);
  pkg.I = build_I(torus, matching, r);
  pkg.grading = NCDiffOp::constant(torus, grading_matrix(r));
  pkg.hodge = NCDiffOp::constant(torus, hodge_matrix(r));
  rebuild_from_I(pkg);
  return pkg;
}

KahlerPackage build_kahler_package(const std::shared_ptr<const Torus>& torus,
                                   const Matching& matching, int eps_prime) {
  return build_kahler_package(torus, std::make_shared<const GammaRep>(build_gamma(torus->n())),
                              matching, eps_prime);
}

std::pair<NCDiffOp, NCDiffOp> explicit_n2_differentials(const std::shared_ptr<const Torus>& torus,
                                                        int eps_prime) {
  if (torus->n() != 2) throw std::invalid_argument("explicit_n2_differentials: needs n = 2");
  check_eps(eps_prime);
  const Complex h = 0.5;
  const Complex e = kI * (eps_prime / 2.0);
  // del = (i d1 - d2) (x) A, delbar = (i d1 + d2) (x) B.
  Matrix A = Matrix::Zero(4, 4);
  A(1, 0) = h;
  A(2, 0) = e;
  A(3, 1) = -e;
  A(3, 2) = h;
  Matrix B = Matrix::Zero(4, 4);
  B(0, 1) = h;
  B(0, 2) = e;
  B(1, 3) = -e;
  B(2, 3) = h;
  NCDiffOp del = NCDiffOp::derivation(torus, 1, kI * A) + NCDiffOp::derivation(torus, 2, -A);
  NCDiffOp delbar = NCDiffOp::derivation(torus, 1, kI * B) + NCDiffOp::derivation(torus, 2, B);
  return {del, delbar};
}

std::vector<TorusElement> sample_elements(int n, int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> exp(-2, 2);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::vector<TorusElement> out;
  if (count > 0) out.push_back(TorusElement::generator(n, 1));
  while (static_cast<int>(out.size()) < count) {
    TorusElement a(n);
    for (int t = 0; t < 3; ++t) {
      std::vector<int> m(static_cast<std::size_t>(n));
      for (int& x : m) x = exp(rng);
      a.add_term(Exponent(std::move(m)), Complex(coef(rng), coef(rng)));
    }
    out.push_back(a.pruned());
  }
  return out;
}

// ---------------------------------------------------------------------------

VerificationReport verify_core(const KahlerPackage& pkg, double tol) {
  VerificationReport rep(tol);
  const auto& torus = pkg.torus;
  const int M = pkg.d.m();
  const auto samples = sample_elements(torus->n(), 3, 7);

  const NCDiffOp Df2 = compose(pkg.Dfrak, pkg.Dfrak);
  const NCDiffOp Dfb2 = compose(pkg.Dfrak_bar, pkg.Dfrak_bar);
  rep.add("Dfrak^2 = Dfrak_bar^2", residual_norm(Df2 - Dfb2));
  rep.add("Dfrak^2 = -sum d_r^2", residual_norm(Df2 + laplacian(torus, M)));
  rep.add("{Dfrak,Dfrak_bar} = 0", residual_norm(anticommutator(pkg.Dfrak, pkg.Dfrak_bar)));
  rep.add("d^2 = 0", residual_norm(compose(pkg.d, pkg.d)));
  rep.add("adjoint(d) = d*", residual_norm(adjoint(pkg.d) - pkg.d_star));
  rep.add("d + d* = Dfrak", residual_norm(pkg.d + pkg.d_star - pkg.Dfrak));
  rep.add("[Tscript,d] = d", residual_norm(commutator(pkg.T_script, pkg.d) - pkg.d));
  rep.add("Tscript* = Tscript", residual_norm(adjoint(pkg.T_script) - pkg.T_script));
  rep.add("[Tscript,a] = 0", max_over_samples(samples, [&](const TorusElement& a) {
            return residual_norm(commutator(pkg.T_script, NCDiffOp::multiplication(torus, a, M)));
          }));
  rep.add("I* = -I", residual_norm(adjoint(pkg.I) + pkg.I));
  rep.add("[I,Tscript] = 0", residual_norm(commutator(pkg.I, pkg.T_script)));
  rep.add("[I,grading] = 0", residual_norm(commutator(pkg.I, pkg.grading)));
  rep.add("[I,hodge] = 0", residual_norm(commutator(pkg.I, pkg.hodge)));
  rep.add("[I,a] = 0", max_over_samples(samples, [&](const TorusElement& a) {
            return residual_norm(commutator(pkg.I, NCDiffOp::multiplication(torus, a, M)));
          }));
  rep.add("[I,[I,d]] = -d", residual_norm(commutator(pkg.I, pkg.d2) + pkg.d));
  const NCDiffOp d2s = adjoint(pkg.d2);
  rep.add("{d,d2*} = 0", residual_norm(anticommutator(pkg.d, d2s)));
  rep.add("{d*,d2} = 0", residual_norm(anticommutator(pkg.d_star, pkg.d2)));
  return rep;
}

VerificationReport verify_n22(const KahlerPackage& pkg, double tol) {
  VerificationReport rep = verify_core(pkg, tol);
  const auto& torus = pkg.torus;
  const int M = pkg.d.m();
  const auto samples = sample_elements(torus->n(), 3, 11);
  const NCDiffOp one = NCDiffOp::identity(torus, M);
  auto mult = [&](const TorusElement& a) { return NCDiffOp::multiplication(torus, a, M); };

  const NCDiffOp& del = pkg.del;
  const NCDiffOp& delbar = pkg.delbar;
  const NCDiffOp del_s = adjoint(del);
  const NCDiffOp delbar_s = adjoint(delbar);
  const NCDiffOp& g = pkg.grading;
  const NCDiffOp& h = pkg.hodge;

  // N=(1,1) data for d = del + delbar.
  rep.add("d = del + delbar", residual_norm(pkg.d - del - delbar));
  rep.add("[d,a] bounded", max_over_samples(samples, [&](const TorusElement& a) {
            return residual_norm_above(commutator(pkg.d, mult(a)), 0);
          }));
  rep.add("grading* = grading", residual_norm(adjoint(g) - g));
  rep.add("grading^2 = 1", residual_norm(compose(g, g) - one));
  rep.add("[grading,a] = 0", max_over_samples(samples, [&](const TorusElement& a) {
            return residual_norm(commutator(g, mult(a)));
          }));
  rep.add("{grading,d} = 0", residual_norm(anticommutator(g, pkg.d)));
  rep.add("hodge unitary", residual_norm(compose(adjoint(h), h) - one));
  rep.add("hodge d = -d* hodge", residual_norm(compose(h, pkg.d) + compose(pkg.d_star, h)));
  rep.add("[hodge,a] = 0", max_over_samples(samples, [&](const TorusElement& a) {
            return residual_norm(commutator(h, mult(a)));
          }));
  rep.add("hodge^2 = 1", residual_norm(compose(h, h) - one));
  rep.add("[hodge,grading] = 0", residual_norm(commutator(h, g)));
  rep.add("{hodge,Dfrak} = 0", residual_norm(anticommutator(h, pkg.Dfrak)));
  rep.add("[hodge,Dfrak_bar] = 0", residual_norm(commutator(h, pkg.Dfrak_bar)));

  // N=(2,2) relations.
  rep.add("del^2 = 0", residual_norm(compose(del, del)));
  rep.add("delbar^2 = 0", residual_norm(compose(delbar, delbar)));
  rep.add("{del,delbar} = 0", residual_norm(anticommutator(del, delbar)));
  rep.add("[T,Tbar] = 0", residual_norm(commutator(pkg.T, pkg.T_bar)));
  rep.add("[T,del] = del", residual_norm(commutator(pkg.T, del) - del));
  rep.add("[T,delbar] = 0", residual_norm(commutator(pkg.T, delbar)));
  rep.add("[Tbar,del] = 0", residual_norm(commutator(pkg.T_bar, del)));
  rep.add("[Tbar,delbar] = delbar", residual_norm(commutator(pkg.T_bar, delbar) - delbar));
  rep.add("T* = T", residual_norm(adjoint(pkg.T) - pkg.T));
  rep.add("Tbar* = Tbar", residual_norm(adjoint(pkg.T_bar) - pkg.T_bar));
  rep.add("T, Tbar bounded",
          std::max(residual_norm_above(pkg.T, 0), residual_norm_above(pkg.T_bar, 0)));
  rep.add("Tscript = T + Tbar", residual_norm(pkg.T_script - pkg.T - pkg.T_bar));
  rep.add("[T,a] = [Tbar,a] = 0", max_over_samples(samples, [&](const TorusElement& a) {
            return std::max(residual_norm(commutator(pkg.T, mult(a))),
                            residual_norm(commutator(pkg.T_bar, mult(a))));
          }));
  rep.add("[del,a], [delbar,a] bounded", max_over_samples(samples, [&](const TorusElement& a) {
            return std::max(residual_norm_above(commutator(del, mult(a)), 0),
                            residual_norm_above(commutator(delbar, mult(a)), 0));
          }));
  rep.add("{del,[delbar,a]} bounded", max_over_samples(samples, [&](const TorusElement& a) {
            return residual_norm_above(anticommutator(del, commutator(delbar, mult(a))), 0);
          }));
  rep.add("{grading,del} = {grading,delbar} = 0",
          std::max(residual_norm(anticommutator(g, del)), residual_norm(anticommutator(g, delbar))));
  rep.add("[grading,T] = [grading,Tbar] = 0",
          std::max(residual_norm(commutator(g, pkg.T)), residual_norm(commutator(g, pkg.T_bar))));
  rep.add("hodge del = -delbar* hodge", residual_norm(compose(h, del) + compose(delbar_s, h)));
  rep.add("hodge delbar = -del* hodge", residual_norm(compose(h, delbar) + compose(del_s, h)));
  rep.add("{del,delbar*} = 0", residual_norm(anticommutator(del, delbar_s)));
  rep.add("{delbar,del*} = 0", residual_norm(anticommutator(delbar, del_s)));
  const NCDiffOp lap_del = anticommutator(del, del_s);
  const NCDiffOp lap_delbar = anticommutator(delbar, delbar_s);
  rep.add("{del,del*} = {delbar,delbar*}", residual_norm(lap_del - lap_delbar));

  const NCDiffOp lap_d = anticommutator(pkg.d, pkg.d_star);
  rep.add("{d,d*} = {d2,d2*}", residual_norm(lap_d - anticommutator(pkg.d2, adjoint(pkg.d2))));
  rep.add("{d,d*} = 2{delbar,delbar*}", residual_norm(lap_d - 2.0 * lap_delbar));
  return rep;
}

// ---------------------------------------------------------------------------

VerificationReport verify_real_structure(const std::shared_ptr<const Torus>& torus,
                                         const GammaRep& rep, ConjVariant variant, double tol) {
  check_dims(*torus, rep);
  VerificationReport out(tol);
  const Torus& t = *torus;
  const Matrix& C = rep.conj(variant);
  const SignTriple signs = rep.signs(variant);
  const NCDiffOp D = build_dirac(torus, rep);
  const int n = rep.n;

  double j2 = 0.0;
  double jd = 0.0;
  for (const auto& v : basis_vectors(n, rep.N, n <= 4 ? 3 : 1)) {
    j2 = std::max(j2, hvector_max_abs(hvector_diff(apply_J(t, C, apply_J(t, C, v)), v,
                                                   static_cast<double>(signs.eps))));
    jd = std::max(jd, hvector_max_abs(hvector_diff(apply_J(t, C, nck::apply(D, v)),
                                                   nck::apply(D, apply_J(t, C, v)),
                                                   static_cast<double>(signs.eps_prime))));
  }
  out.add("J^2 = eps", j2);
  out.add("JD = eps' DJ", jd);

  // Monomial pairs: (U1, U2) first, then random ones.
  std::vector<std::pair<TorusElement, TorusElement>> pairs;
  pairs.emplace_back(TorusElement::generator(n, 1), TorusElement::generator(n, 2));
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> e(-2, 2);
  auto random_monomial = [&] {
    std::vector<int> m(static_cast<std::size_t>(n));
    for (int& x : m) x = e(rng);
    return TorusElement::monomial(Exponent(std::move(m)));
  };
  while (pairs.size() < 20) {
    auto a = random_monomial();
    auto b = random_monomial();
    pairs.emplace_back(std::move(a), std::move(b));
  }

  // J* = J^{-1} = eps J.
  auto JaJ = [&](const TorusElement& a, const HVector& v) {
    HVector w = apply_J(t, C, left_mul(t, a, apply_J(t, C, v)));
    for (auto& x : w) x *= static_cast<double>(signs.eps);
    return w;
  };
  const auto test_vectors = basis_vectors(n, rep.N, n <= 2 ? 2 : 1);
  double zero_order = 0.0;
  double first_order = 0.0;
  for (const auto& [a, b] : pairs) {
    const NCDiffOp Db = commutator(D, NCDiffOp::multiplication(torus, b, rep.N));
    for (const auto& v : test_vectors) {
      zero_order = std::max(
          zero_order, hvector_max_abs(hvector_diff(JaJ(a, left_mul(t, b, v)), left_mul(t, b, JaJ(a, v)))));
      first_order = std::max(
          first_order, hvector_max_abs(hvector_diff(JaJ(a, nck::apply(Db, v)), nck::apply(Db, JaJ(a, v)))));
    }
  }
  out.add("[JaJ*,b] = 0", zero_order);
  out.add("[JaJ*,[D,b]] = 0", first_order);
  return out;
}

double pm_conjugation_residual(const KahlerPackage& plus, const KahlerPackage& minus,
                               const Matrix& S) {
  const NCDiffOp s = NCDiffOp::constant(plus.torus, S);
  return std::max(residual_norm(compose(s, plus.del) - compose(minus.del, s)),
                  residual_norm(compose(s, plus.delbar) - compose(minus.delbar, s)));
}

double verify_pm_conjugation(const std::shared_ptr<const Torus>& torus, const Matching& matching) {
  auto rep = std::make_shared<const GammaRep>(build_gamma(torus->n()));
  const auto plus = build_kahler_package(torus, rep, matching, +1);
  const auto minus = build_kahler_package(torus, rep, matching, -1);
  return pm_conjugation_residual(plus, minus, pm_intertwiner(*rep));
}

double min_d2_separation(const std::shared_ptr<const Torus>& torus, int two_k) {
  if (torus->n() != two_k)
    throw std::invalid_argument("min_d2_separation: torus dimension differs from 2k");
  auto rep = std::make_shared<const GammaRep>(build_gamma(two_k));
  std::vector<NCDiffOp> d2s;
  for (const auto& m : enumerate_matchings(two_k))
    d2s.push_back(build_kahler_package(torus, rep, m, +1).d2);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d2s.size(); ++i) {
    for (std::size_t j = i + 1; j < d2s.size(); ++j)
      best = std::min(best, residual_norm(d2s[i] - d2s[j]));
  }
  return best;
}

bool verify_distinctness(const std::shared_ptr<const Torus>& torus, int two_k) {
  return min_d2_separation(torus, two_k) > 0.1;
}

std::vector<GridEntry> verify_grid(const std::shared_ptr<const Torus>& torus,
                                   const std::vector<Matching>& matchings,
                                   const std::vector<int>& eps_primes, double tol) {
  auto rep = std::make_shared<const GammaRep>(build_gamma(torus->n()));
  const long tasks = static_cast<long>(matchings.size() * eps_primes.size());
  std::vector<GridEntry> out(static_cast<std::size_t>(tasks));
  std::vector<std::string> errors(static_cast<std::size_t>(tasks));
#ifdef NCK_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long idx = 0; idx < tasks; ++idx) {
    const auto i = static_cast<std::size_t>(idx);
    const auto& m = matchings[i / eps_primes.size()];
    const int eps = eps_primes[i % eps_primes.size()];
    try {
      const auto pkg = build_kahler_package(torus, rep, m, eps);
      out[i] = GridEntry{m, eps, verify_n22(pkg, tol)};
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw std::invalid_argument(e);
  }
  return out;
}

}  // namespace nck
