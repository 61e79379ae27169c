#include "nck/holomorphic.hpp"

#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "nck/forms.hpp"
#include "nck/kahler.hpp"

namespace nck {

namespace {

constexpr Complex kI(0.0, 1.0);

int complex_dim(const Torus& torus) {
  if (torus.n() % 2 != 0) throw std::invalid_argument("holomorphic calculus needs an even torus");
  return torus.n() / 2;
}

void check_connection(const Torus& torus, const Connection& c) {
  const int p = complex_dim(torus);
  if (static_cast<int>(c.A.size()) != p)
    throw std::invalid_argument("connection has " + std::to_string(c.A.size()) +
                                " matrices, expected " + std::to_string(p));
  for (const auto& a : c.A) {
    if (static_cast<int>(a.size()) != c.m)
      throw std::invalid_argument("connection matrix has wrong row count");
    for (const auto& row : a) {
      if (static_cast<int>(row.size()) != c.m)
        throw std::invalid_argument("connection matrix has wrong column count");
    }
  }
}

TorusElement safe(const Torus& torus, const TorusElement& e) {
  return e.empty() ? TorusElement::zero(torus.n()) : e;
}

ElementMatrix entrywise_delta(const Torus& torus, int j, const ElementMatrix& a) {
  ElementMatrix out = a;
  for (auto& row : out) {
    for (auto& e : row) e = delta(torus, j, safe(torus, e));
  }
  return out;
}

ElementMatrix combine(const ElementMatrix& a, const ElementMatrix& b, Complex sb) {
  ElementMatrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += sb * b[i][j];
  }
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

struct RowKey {
  int j;
  int i;
  Exponent k;
  auto operator<=>(const RowKey&) const = default;
};

}  // namespace

ElementMatrix element_matrix_zero(int n, int m) {
  return ElementMatrix(static_cast<std::size_t>(m),
                       std::vector<TorusElement>(static_cast<std::size_t>(m), TorusElement(n)));
}

ElementMatrix element_matrix_identity(int n, int m) {
  auto out = element_matrix_zero(n, m);
  for (int i = 0; i < m; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = TorusElement::one(n);
  return out;
}

ElementMatrix element_matrix_mul(const Torus& torus, const ElementMatrix& a, const ElementMatrix& b) {
  const std::size_t rows = a.size();
  const std::size_t inner = b.size();
  const std::size_t cols = inner ? b.front().size() : 0;
  for (const auto& row : a) {
    if (row.size() != inner) throw std::invalid_argument("element_matrix_mul: shape mismatch");
  }
  ElementMatrix out(rows, std::vector<TorusElement>(cols, TorusElement(torus.n())));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      for (std::size_t k = 0; k < inner; ++k) {
        if (a[i][k].empty() || b[k][j].empty()) continue;
        out[i][j] += torus.mul(a[i][k], b[k][j]);
      }
      out[i][j] = out[i][j].pruned(torus.prune());
    }
  }
  return out;
}

double element_matrix_max_abs(const ElementMatrix& a) {
  double r = 0.0;
  for (const auto& row : a) {
    for (const auto& e : row) r = std::max(r, e.max_abs());
  }
  return r;
}

Complex delta_symbol(int j, const Exponent& m) {
  return Complex(0.0, kTwoPi) * (static_cast<double>(m[2 * j - 1]) + kI * static_cast<double>(m[2 * j - 2]));
}

TorusElement delta(const Torus& torus, int j, const TorusElement& a) {
  const int p = complex_dim(torus);
  if (j < 1 || j > p) throw std::invalid_argument("delta: index out of range");
  return (torus.derive(2 * j, a) + kI * torus.derive(2 * j - 1, a)).pruned(torus.prune());
}

std::vector<TorusElement> delbar_tuple(const Torus& torus, const TorusElement& a) {
  std::vector<TorusElement> out;
  for (int j = 1; j <= complex_dim(torus); ++j) out.push_back(delta(torus, j, a));
  return out;
}

KernelBasis diagonal_kernel(int n, int radius, const std::vector<Symbol>& symbols, double tol) {
  KernelBasis out;
  for (const auto& m : box_exponents(n, radius)) {
    bool zero = true;
    for (const auto& s : symbols) {
      if (std::abs(s(m)) > tol) {
        zero = false;
        break;
      }
    }
    if (zero) out.elements.push_back({TorusElement::monomial(m)});
  }
  return out;
}

KernelBasis holomorphic_kernel(const Torus& torus, int radius, double tol) {
  std::vector<Symbol> symbols;
  for (int j = 1; j <= complex_dim(torus); ++j)
    symbols.push_back([j](const Exponent& m) { return delta_symbol(j, m); });
  return diagonal_kernel(torus.n(), radius, symbols, tol);
}

Connection grassmannian(int torus_dim, int m) {
  if (m < 1) throw std::invalid_argument("grassmannian: rank must be >= 1");
  if (torus_dim < 2 || torus_dim % 2 != 0)
    throw std::invalid_argument("grassmannian: torus dimension must be even");
  Connection c;
  c.m = m;
  c.A.assign(static_cast<std::size_t>(torus_dim / 2), element_matrix_zero(torus_dim, m));
  return c;
}

ElementMatrix curvature(const Torus& torus, const Connection& c, int l, int r) {
  check_connection(torus, c);
  const auto& Al = c.A.at(static_cast<std::size_t>(l - 1));
  const auto& Ar = c.A.at(static_cast<std::size_t>(r - 1));
  ElementMatrix out = combine(entrywise_delta(torus, l, Ar), entrywise_delta(torus, r, Al), -1.0);
  out = combine(out, element_matrix_mul(torus, Al, Ar), 1.0);
  out = combine(out, element_matrix_mul(torus, Ar, Al), -1.0);
  for (auto& row : out) {
    for (auto& e : row) e = e.pruned(torus.prune());
  }
  return out;
}

double flatness_check(const Torus& torus, const Connection& c) {
  check_connection(torus, c);
  const int p = complex_dim(torus);
  double r = 0.0;
  for (int l = 1; l <= p; ++l) {
    for (int s = l + 1; s <= p; ++s) r = std::max(r, element_matrix_max_abs(curvature(torus, c, l, s)));
  }
  return r;
}

NCDiffOp connection_operator(const std::shared_ptr<const Torus>& torus, const Connection& c, int j) {
  check_connection(*torus, c);
  Matrix id = Matrix::Identity(c.m, c.m);
  NCDiffOp op = NCDiffOp::derivation(torus, 2 * j, id) + NCDiffOp::derivation(torus, 2 * j - 1, kI * id);
  return op + NCDiffOp::multiplication(torus, c.A.at(static_cast<std::size_t>(j - 1)));
}

KernelBasis h0_solve(const Torus& torus, const Connection& c, int radius, double tol) {
  check_connection(torus, c);
  const int p = complex_dim(torus);
  const auto modes = box_exponents(torus.n(), radius);
  const int nm = static_cast<int>(modes.size());
  const int unknowns = c.m * nm;
  auto col = [&](int i, int t) { return i * nm + t; };

  std::map<RowKey, std::map<int, Complex>> rows;
  for (int j = 1; j <= p; ++j) {
    const auto& A = c.A[static_cast<std::size_t>(j - 1)];
    for (int i = 0; i < c.m; ++i) {
      for (int t = 0; t < nm; ++t) {
        const auto& mm = modes[static_cast<std::size_t>(t)];
        rows[RowKey{j, i, mm}][col(i, t)] += delta_symbol(j, mm);
        for (int k = 0; k < c.m; ++k) {
          for (const auto& [s, a] : A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].coeffs())
            rows[RowKey{j, i, s + mm}][col(k, t)] += a * torus.product_phase(s, mm);
        }
      }
    }
  }

  UnionFind uf(unknowns);
  for (const auto& [key, entries] : rows) {
    const int first = entries.begin()->first;
    for (const auto& [cidx, v] : entries) {
      if (std::abs(v) > 0.0) uf.unite(first, cidx);
    }
  }
  std::map<int, std::vector<int>> components;
  for (int u = 0; u < unknowns; ++u) components[uf.find(u)].push_back(u);
  std::map<int, std::vector<const std::map<int, Complex>*>> comp_rows;
  for (const auto& [key, entries] : rows) {
    for (const auto& [cidx, v] : entries) {
      if (std::abs(v) > 0.0) {
        comp_rows[uf.find(cidx)].push_back(&entries);
        break;
      }
    }
  }

  KernelBasis out;
  for (const auto& [root, cols] : components) {
    std::map<int, int> local;
    for (std::size_t q = 0; q < cols.size(); ++q) local.emplace(cols[q], static_cast<int>(q));
    const auto& rs = comp_rows[root];
    Matrix kernel;
    if (rs.empty()) {
      kernel = Matrix::Identity(static_cast<Eigen::Index>(cols.size()), static_cast<Eigen::Index>(cols.size()));
    } else {
      Matrix sys = Matrix::Zero(static_cast<Eigen::Index>(rs.size()), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t rr = 0; rr < rs.size(); ++rr) {
        for (const auto& [cidx, v] : *rs[rr]) sys(static_cast<Eigen::Index>(rr), local.at(cidx)) += v;
      }
      kernel = linalg::null_space(sys, tol);
    }
    for (Eigen::Index kc = 0; kc < kernel.cols(); ++kc) {
      HVector v(static_cast<std::size_t>(c.m), TorusElement(torus.n()));
      for (std::size_t q = 0; q < cols.size(); ++q) {
        const Complex x = kernel(static_cast<Eigen::Index>(q), kc);
        if (std::abs(x) <= torus.prune()) continue;
        const int i = cols[q] / nm;
        const int t = cols[q] % nm;
        v[static_cast<std::size_t>(i)].add_term(modes[static_cast<std::size_t>(t)], x);
      }
      out.elements.push_back(std::move(v));
    }
  }
  return out;
}

double morphism_check(const Torus& torus, const std::vector<std::vector<TorusElement>>& phi,
                      const Connection& c1, const Connection& c2) {
  check_connection(torus, c1);
  check_connection(torus, c2);
  if (static_cast<int>(phi.size()) != c2.m)
    throw std::invalid_argument("morphism_check: phi must have " + std::to_string(c2.m) + " rows");
  for (const auto& row : phi) {
    if (static_cast<int>(row.size()) != c1.m)
      throw std::invalid_argument("morphism_check: phi must have " + std::to_string(c1.m) +
                                  " columns");
  }
  double r = 0.0;
  for (int j = 1; j <= complex_dim(torus); ++j) {
    ElementMatrix e = entrywise_delta(torus, j, phi);
    e = combine(e, element_matrix_mul(torus, c2.A[static_cast<std::size_t>(j - 1)], phi), 1.0);
    e = combine(e, element_matrix_mul(torus, phi, c1.A[static_cast<std::size_t>(j - 1)]), -1.0);
    for (auto& row : e) {
      for (auto& x : row) x = x.pruned(torus.prune());
    }
    r = std::max(r, element_matrix_max_abs(e));
  }
  return r;
}

TorusElement d_tau(const Torus& torus, const TorusElement& a, Complex tau) {
  if (torus.n() != 2) throw std::invalid_argument("d_tau: needs a 2-torus");
  TorusElement out(2);
  for (const auto& [m, x] : a.coeffs())
    out.add_term(m, Complex(0.0, kTwoPi) * (static_cast<double>(m[0]) * tau + static_cast<double>(m[1])) * x);
  return out.pruned(torus.prune());
}

PsComparison ps_compare(const std::shared_ptr<const Torus>& torus, int radius) {
  if (torus->n() != 2) throw std::invalid_argument("ps_compare: needs a 2-torus");
  const auto pkg = build_kahler_package(torus, Matching::standard(2), +1);
  const Matrix E = build_form_matrices(2, +1).eta_bar.at(0);
  const Complex ee = (E.adjoint() * E).trace();
  const int M = pkg.delbar.m();

  // Phi([delbar, a]) and the part of [delbar, a] outside the span of E.
  auto phi = [&](const TorusElement& a, double& leftover) {
    const NCDiffOp op = commutator(pkg.delbar, NCDiffOp::multiplication(torus, a, M));
    TorusElement out(2);
    for (const auto& [key, mat] : op.terms()) {
      const Complex x = (E.adjoint() * mat).trace() / ee;
      leftover = std::max(leftover, linalg::max_abs(mat - x * E));
      leftover = std::max(leftover, order(key.alpha) > 0 ? linalg::max_abs(mat) : 0.0);
      out.add_term(key.k, x);
    }
    return out.pruned(torus->prune());
  };

  PsComparison res;
  double leftover = 0.0;
  const TorusElement u2 = TorusElement::generator(2, 2);
  res.c = phi(u2, leftover).coeff(Exponent::unit(2, 2)) / d_tau(*torus, u2).coeff(Exponent::unit(2, 2));

  std::vector<TorusElement> tests;
  for (const auto& m : box_exponents(2, radius)) tests.push_back(TorusElement::monomial(m));
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TorusElement random(2);
  for (const auto& m : box_exponents(2, radius)) random.add_term(m, Complex(u(rng), u(rng)));
  tests.push_back(random);

  double r = 0.0;
  for (const auto& a : tests) {
    const TorusElement lhs = phi(a, leftover);
    r = std::max(r, (lhs - res.c * d_tau(*torus, a)).max_abs());
  }
  res.residual = std::max(r, leftover);
  return res;
}

}  // namespace nck
