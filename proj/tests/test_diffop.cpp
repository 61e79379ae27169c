#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "nck/diffop.hpp"
#include "oracles.hpp"

using namespace nck;

namespace {

std::shared_ptr<const Torus> make(int n, unsigned long long seed = 21) {
  return std::make_shared<const Torus>(ThetaMatrix::random(n, seed));
}

Matrix id(int m) { return Matrix::Identity(m, m); }

}  // namespace

TEST(NCDiffOp, LeibnizRule) {
  const auto t = make(2);
  std::mt19937_64 rng(1);
  const auto b = oracle::random_element(2, 3, 2, rng);
  for (int j = 1; j <= 2; ++j) {
    const auto dj = NCDiffOp::derivation(t, j, 1);
    const auto mb = NCDiffOp::multiplication(t, b, 1);
    const auto lhs = compose(dj, mb);
    const auto rhs = NCDiffOp::multiplication(t, t->derive(j, b), 1) + compose(mb, dj);
    EXPECT_LT(residual_norm(lhs - rhs), 1e-12);
  }
}

TEST(NCDiffOp, ConstantCoefficientSecondOrder) {
  const auto t = make(2);
  std::mt19937_64 rng(2);
  const Matrix A = oracle::random_matrix(3, rng);
  const Matrix B = oracle::random_matrix(3, rng);
  const auto p = compose(NCDiffOp::derivation(t, 1, A), NCDiffOp::derivation(t, 2, B));
  ASSERT_EQ(p.terms().size(), 1u);
  const auto& [key, M] = *p.terms().begin();
  EXPECT_EQ(key.alpha, (MultiIndex{1, 1}));
  EXPECT_TRUE(key.k.is_zero());
  EXPECT_LT(linalg::max_abs(M - A * B), 1e-12);
}

TEST(NCDiffOp, ComposeMatchesSequentialApplication) {
  const auto t = make(2);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto P = oracle::random_operator(t, 2, 3, 2, rng);
    const auto Q = oracle::random_operator(t, 2, 3, 2, rng);
    const auto v = oracle::random_vector(2, 2, 3, 2, rng);
    EXPECT_LT(oracle::max_diff(nck::apply(compose(P, Q), v), nck::apply(P, nck::apply(Q, v))), 1e-8);
  }
}

TEST(NCDiffOp, ApplyAgreesWithTermwiseOracle) {
  const auto t = make(4);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto P = oracle::random_operator(t, 2, 4, 2, rng);
    const auto v = oracle::random_vector(4, 2, 3, 2, rng);
    EXPECT_LT(oracle::max_diff(nck::apply(P, v), oracle::act(P, v)), 1e-9);
  }
}

TEST(NCDiffOp, ApplyBasics) {
  const auto t = make(2);
  std::mt19937_64 rng(5);
  const auto v = oracle::random_vector(2, 3, 3, 2, rng);
  EXPECT_LT(oracle::max_diff(nck::apply(NCDiffOp::identity(t, 3), v), v), 1e-15);

  const HVector u{TorusElement::generator(2, 1), TorusElement(2)};
  const auto du = nck::apply(NCDiffOp::derivation(t, 1, 2), u);
  EXPECT_NEAR(std::abs(du[0].coeff(Exponent::unit(2, 1)) - Complex(0.0, kTwoPi)), 0.0, 1e-14);
  EXPECT_TRUE(du[1].pruned().empty());

  const auto P = oracle::random_operator(t, 3, 3, 1, rng);
  const auto w = oracle::random_vector(2, 3, 3, 2, rng);
  HVector lin;
  for (std::size_t i = 0; i < v.size(); ++i) lin.push_back(v[i] + Complex(2.0, -1.0) * w[i]);
  HVector expected = nck::apply(P, v);
  const HVector pw = nck::apply(P, w);
  for (std::size_t i = 0; i < expected.size(); ++i) expected[i] += Complex(2.0, -1.0) * pw[i];
  EXPECT_LT(oracle::max_diff(nck::apply(P, lin), expected), 1e-9);

  EXPECT_THROW(nck::apply(P, u), std::invalid_argument);
}

TEST(NCDiffOp, AdjointContract) {
  const auto t = make(2);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const auto P = oracle::random_operator(t, 2, 3, 2, rng);
    const auto x = oracle::random_vector(2, 2, 3, 2, rng);
    const auto y = oracle::random_vector(2, 2, 3, 2, rng);
    const Complex lhs = oracle::inner(oracle::act(P, x), y);
    const Complex rhs = oracle::inner(x, oracle::act(adjoint(P), y));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-8 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(NCDiffOp, AdjointExamples) {
  const auto t = make(4);
  for (int j = 1; j <= 4; ++j) {
    const auto d = NCDiffOp::derivation(t, j, 2);
    EXPECT_LT(residual_norm(adjoint(d) + d), 1e-15);
  }
  std::mt19937_64 rng(7);
  const auto a = oracle::random_element(4, 4, 2, rng);
  EXPECT_LT(residual_norm(adjoint(NCDiffOp::multiplication(t, a, 2)) -
                          NCDiffOp::multiplication(t, t->star(a), 2)),
            1e-13);
  const auto P = oracle::random_operator(t, 2, 3, 2, rng);
  EXPECT_LT(residual_norm(adjoint(adjoint(P)) - P), 1e-10);
}

TEST(NCDiffOp, CommutatorIdentities) {
  const auto t = make(2);
  std::mt19937_64 rng(8);
  const auto P = oracle::random_operator(t, 2, 3, 2, rng);
  EXPECT_LT(residual_norm(commutator(P, P)), 1e-15);

  Matrix g(2, 2);
  g << 1.0, 0.0, 0.0, -1.0;
  const auto G = NCDiffOp::constant(t, g);
  EXPECT_LT(residual_norm(anticommutator(G, G) - 2.0 * compose(G, G)), 1e-15);

  for (int trial = 0; trial < 10; ++trial) {
    const auto A = oracle::random_operator(t, 2, 2, 1, rng);
    const auto B = oracle::random_operator(t, 2, 2, 1, rng);
    const auto C = oracle::random_operator(t, 2, 2, 1, rng);
    const auto jacobi = commutator(A, commutator(B, C)) + commutator(B, commutator(C, A)) +
                        commutator(C, commutator(A, B));
    EXPECT_LT(residual_norm(jacobi), 1e-9);
  }
}

TEST(NCDiffOp, ResidualNorm) {
  const auto t = make(2);
  EXPECT_EQ(residual_norm(NCDiffOp::zero(t, 3)), 0.0);
  EXPECT_EQ(residual_norm(NCDiffOp::identity(t, 3)), 1.0);
  std::mt19937_64 rng(9);
  const auto P = oracle::random_operator(t, 3, 4, 2, rng);
  EXPECT_LT(residual_norm(P - P), 1e-15);
  EXPECT_EQ(residual_norm_above(NCDiffOp::identity(t, 2) + NCDiffOp::derivation(t, 1, 2), 0), 1.0);
}

TEST(NCDiffOp, NormalFormEqualityMatchesActionEquality) {
  const auto t = make(2, 31);
  std::mt19937_64 rng(10);
  int agree = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto A = oracle::random_operator(t, 2, 2, 1, rng);
    const auto B = oracle::random_operator(t, 2, 2, 1, rng);
    const auto C = oracle::random_operator(t, 2, 2, 1, rng);
    NCDiffOp p = compose(compose(A, B), C);
    NCDiffOp q = compose(A, compose(B, C));
    if (trial % 2 == 1) q.add_term({0, 1}, Exponent({1, 0}), 1e-3 * id(2));
    const bool normal = residual_norm(p - q) < 1e-9 * std::max(1.0, residual_norm(p));
    const bool action = oracle::equal_by_action(p, q, 3, 1e-6);
    if (normal == action) ++agree;
    EXPECT_EQ(normal, trial % 2 == 0);
  }
  EXPECT_EQ(agree, 50);
}

TEST(NCDiffOp, EntryView) {
  const auto t = make(2);
  Matrix M(2, 2);
  M << 1.0, 2.0, 3.0, 4.0;
  NCDiffOp p(t, 2);
  p.add_term({1, 0}, Exponent({0, 1}), M);
  p.add_term({1, 0}, Exponent({1, 0}), M);
  const auto e = p.entry({1, 0}, 1, 0);
  EXPECT_EQ(e.coeff(Exponent({0, 1})), Complex(3.0));
  EXPECT_EQ(e.coeff(Exponent({1, 0})), Complex(3.0));
  EXPECT_EQ(p.degree(), 1);
  EXPECT_EQ(p.multi_indices().size(), 1u);
  EXPECT_EQ(NCDiffOp::zero(t, 2).degree(), -1);
}

TEST(NCDiffOp, IncompatibleOperatorsThrow) {
  const auto t2 = make(2);
  const auto t2b = make(2, 99);
  EXPECT_THROW(compose(NCDiffOp::identity(t2, 2), NCDiffOp::identity(t2, 3)), std::invalid_argument);
  EXPECT_THROW(compose(NCDiffOp::identity(t2, 2), NCDiffOp::identity(t2b, 2)), std::invalid_argument);
}

TEST(NCDiffOp, ParallelComposeIsBitIdentical) {
  const auto t = make(4);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto P = oracle::random_operator(t, 4, 20, 2, rng);
    const auto Q = oracle::random_operator(t, 4, 20, 2, rng);
    const auto a = compose(P, Q);
    const auto b = compose_serial(P, Q);
    ASSERT_EQ(a.terms().size(), b.terms().size());
    auto ia = a.terms().begin();
    auto ib = b.terms().begin();
    for (; ia != a.terms().end(); ++ia, ++ib) {
      EXPECT_EQ(ia->first, ib->first);
      EXPECT_TRUE(ia->second == ib->second);
    }
  }
}

TEST(InnerProduct, Basics) {
  const auto t = make(2);
  const auto e0 = basis_vector(2, 2, Exponent({1, 0}), 0);
  const auto e1 = basis_vector(2, 2, Exponent({1, 0}), 1);
  EXPECT_EQ(inner_product(*t, e0, e0), Complex(1.0));
  EXPECT_EQ(inner_product(*t, e0, e1), Complex(0.0));
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const auto x = oracle::random_vector(2, 2, 4, 2, rng);
    const Complex xx = inner_product(*t, x, x);
    EXPECT_GE(xx.real(), 0.0);
    EXPECT_NEAR(std::abs(xx - oracle::inner(x, x)), 0.0, 1e-10);
    const auto y = oracle::random_vector(2, 2, 4, 2, rng);
    EXPECT_NEAR(std::abs(inner_product(*t, x, y) - oracle::inner(x, y)), 0.0, 1e-10);
  }
}

TEST(InnerProduct, TensorForm) {
  // <xi (x) eta, xi' (x) eta'> = sum tau(eta_l* xi_j* xi'_j eta'_l) with
  // (xi (x) eta)_{jl} = xi_j eta_l.
  const auto t = make(2);
  std::mt19937_64 rng(15);
  const auto xi = oracle::random_vector(2, 2, 2, 1, rng);
  const auto xi2 = oracle::random_vector(2, 2, 2, 1, rng);
  const auto eta = oracle::random_vector(2, 2, 2, 1, rng);
  const auto eta2 = oracle::random_vector(2, 2, 2, 1, rng);
  HVector f, g;
  Complex expected = 0.0;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t l = 0; l < 2; ++l) {
      f.push_back(t->mul(xi[j], eta[l]));
      g.push_back(t->mul(xi2[j], eta2[l]));
      expected += t->trace(t->mul(t->mul(t->star(eta[l]), t->star(xi[j])), t->mul(xi2[j], eta2[l])));
    }
  EXPECT_NEAR(std::abs(inner_product(*t, f, g) - expected), 0.0, 1e-10);
}
