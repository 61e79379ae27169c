#include <gtest/gtest.h>

#include <random>

#include "nck/torus.hpp"
#include "oracles.hpp"

using namespace nck;

namespace {

Torus torus4() { return Torus(ThetaMatrix::standard(4)); }

}  // namespace

TEST(ThetaMatrix, SkewSymmetryAndValidation) {
  const ThetaMatrix t = ThetaMatrix::standard(4);
  for (int j = 1; j <= 4; ++j)
    for (int k = 1; k <= 4; ++k) EXPECT_DOUBLE_EQ(t(j, k), -t(k, j));
  EXPECT_FALSE(t.looks_rational());
  EXPECT_TRUE(ThetaMatrix::from_upper(2, {{0, 0.5}, {0, 0}}).looks_rational());
  Eigen::MatrixXd bad(2, 2);
  bad << 0, 0.3, 0.3, 0;
  EXPECT_THROW(ThetaMatrix{bad}, std::invalid_argument);
  EXPECT_THROW(ThetaMatrix::standard(3), std::invalid_argument);
}

TEST(Torus, CommutativeProduct) {
  const Torus t(ThetaMatrix::zero(2));
  const auto p = t.mul(TorusElement::generator(2, 1), TorusElement::generator(2, 2));
  EXPECT_EQ(p.support_size(), 1u);
  EXPECT_EQ(p.coeff(Exponent({1, 1})), Complex(1.0));
}

TEST(Torus, GeneratorRelation) {
  const ThetaMatrix theta = ThetaMatrix::standard(2);
  const Torus t(theta);
  const auto p = t.mul(TorusElement::generator(2, 2), TorusElement::generator(2, 1));
  const Complex expected = std::exp(Complex(0.0, kTwoPi * theta(1, 2)));
  EXPECT_NEAR(std::abs(p.coeff(Exponent({1, 1})) - expected), 0.0, 1e-14);
}

TEST(Torus, ProductPhaseMatchesGeneratorSwaps) {
  const ThetaMatrix theta = ThetaMatrix::random(4, 7);
  const Torus t(theta);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Exponent m = oracle::random_exponent(4, 3, rng);
    const Exponent k = oracle::random_exponent(4, 3, rng);
    EXPECT_NEAR(std::abs(t.product_phase(m, k) - oracle::generator_swap_phase(theta, m, k)), 0.0, 1e-12);
  }
}

TEST(Torus, Associativity) {
  const Torus t = torus4();
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_element(4, 3, 2, rng);
    const auto b = oracle::random_element(4, 3, 2, rng);
    const auto c = oracle::random_element(4, 3, 2, rng);
    EXPECT_TRUE(approx_equal(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)), 1e-10));
  }
}

TEST(Torus, Star) {
  const ThetaMatrix theta = ThetaMatrix::standard(4);
  const Torus t(theta);
  const auto s1 = t.star(TorusElement::generator(4, 1));
  EXPECT_EQ(s1.support_size(), 1u);
  EXPECT_NEAR(std::abs(s1.coeff(Exponent({-1, 0, 0, 0})) - 1.0), 0.0, 1e-15);

  const auto u12 = t.mul(TorusElement::generator(4, 1), TorusElement::generator(4, 2));
  const auto s12 = t.star(u12);
  const Exponent m({1, 1, 0, 0});
  EXPECT_NEAR(std::abs(s12.coeff(-m) - oracle::generator_swap_star_phase(theta, m)), 0.0, 1e-14);

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Exponent e = oracle::random_exponent(4, 3, rng);
    EXPECT_NEAR(std::abs(t.star_phase(e) - oracle::generator_swap_star_phase(theta, e)), 0.0, 1e-12);
    const auto a = oracle::random_element(4, 4, 2, rng);
    EXPECT_TRUE(approx_equal(t.star(t.star(a)), a, 1e-12));
    const auto b = oracle::random_element(4, 3, 2, rng);
    EXPECT_TRUE(approx_equal(t.star(t.mul(a, b)), t.mul(t.star(b), t.star(a)), 1e-10));
  }
}

TEST(Torus, Trace) {
  const Torus t = torus4();
  EXPECT_EQ(t.trace(TorusElement::one(4)), Complex(1.0));
  EXPECT_EQ(t.trace(TorusElement::generator(4, 1)), Complex(0.0));
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = oracle::random_element(4, 4, 2, rng);
    const auto b = oracle::random_element(4, 4, 2, rng);
    EXPECT_NEAR(std::abs(t.trace(t.mul(a, b)) - t.trace(t.mul(b, a))), 0.0, 1e-10);
    EXPECT_NEAR(t.trace(t.mul(t.star(a), a)).real(), a.norm_sq(), 1e-10);
  }
}

TEST(Torus, Derivations) {
  const Torus t = torus4();
  const auto d = t.derive(1, TorusElement::generator(4, 1));
  EXPECT_NEAR(std::abs(d.coeff(Exponent::unit(4, 1)) - Complex(0.0, kTwoPi)), 0.0, 1e-15);
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = oracle::random_element(4, 4, 2, rng);
    const auto b = oracle::random_element(4, 4, 2, rng);
    for (int j = 1; j <= 4; ++j) {
      EXPECT_NEAR(std::abs(t.trace(t.derive(j, a))), 0.0, 1e-12);
      const auto lhs = t.derive(j, t.mul(a, b));
      const auto rhs = t.mul(t.derive(j, a), b) + t.mul(a, t.derive(j, b));
      EXPECT_TRUE(approx_equal(lhs, rhs, 1e-9));
    }
  }
}

TEST(Torus, Truncate) {
  EXPECT_TRUE(approx_equal(Torus::truncate(TorusElement::one(2), 0), TorusElement::one(2)));
  EXPECT_TRUE(Torus::truncate(TorusElement::generator(2, 1), 0).empty());
  std::mt19937_64 rng(1);
  const auto a = oracle::random_element(2, 5, 2, rng);
  EXPECT_TRUE(approx_equal(Torus::truncate(a, 2), a));
}

TEST(Torus, DimensionMismatchThrows) {
  const Torus t = torus4();
  EXPECT_THROW(t.mul(TorusElement::generator(2, 1), TorusElement::generator(4, 1)), std::invalid_argument);
}

TEST(Torus, BoxExponents) {
  EXPECT_EQ(box_exponents(2, 1).size(), 9u);
  EXPECT_EQ(box_exponents(3, 0).size(), 1u);
}
