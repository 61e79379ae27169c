#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "nck/forms.hpp"
#include "nck/holomorphic.hpp"
#include "nck/kahler.hpp"
#include "oracles.hpp"

using namespace nck;

TEST(Forms, OneFormsReproduceCommutators) {
  const auto t = std::make_shared<const Torus>(ThetaMatrix::random(4, 3));
  const auto pkg = build_kahler_package(t, Matching::standard(4), 1);
  const FormBasisMatrices b = build_form_matrices(4, 1);
  std::mt19937_64 rng(1);
  const auto a = oracle::random_element(4, 3, 2, rng);
  const int M = pkg.d.m();
  const auto A = NCDiffOp::multiplication(t, a, M);

  NCDiffOp da(t, M);
  for (int j = 1; j <= 4; ++j) da += NCDiffOp::multiplication(t, t->derive(j, a), b.mu[static_cast<std::size_t>(j - 1)]);
  EXPECT_LT(residual_norm(commutator(pkg.d, A) - da), 1e-10);

  NCDiffOp dba(t, M);
  for (int p = 1; p <= 2; ++p) {
    dba += NCDiffOp::multiplication(t, delta(*t, p, a), b.eta_bar[static_cast<std::size_t>(p - 1)]);
  }
  EXPECT_LT(residual_norm(commutator(pkg.delbar, A) - dba), 1e-10);
}

TEST(Forms, Anticommutation) {
  for (int dim : {2, 4, 6}) {
    const FormBasisMatrices b = build_form_matrices(dim);
    EXPECT_LT(anticommutation_residual(b.mu), 1e-12);
    EXPECT_LT(anticommutation_residual(b.eta_bar), 1e-12);
    EXPECT_LT(anticommutation_residual(b.eta_hol), 1e-12);
  }
}

TEST(Forms, RanksFourTorus) {
  const FormBasisMatrices b = build_form_matrices(4);
  for (int l = 0; l <= 5; ++l) EXPECT_EQ(form_rank(b, FormFamily::mu, l), binomial(4, l)) << l;
  EXPECT_EQ(form_rank(b, FormFamily::eta_bar, 1), 2);
  EXPECT_EQ(form_rank(b, FormFamily::eta_bar, 2), 1);
  EXPECT_EQ(form_rank(b, FormFamily::eta_bar, 3), 0);
  EXPECT_EQ(form_rank(b, FormFamily::eta_hol, 2), 1);
  EXPECT_EQ(form_rank(b, FormFamily::eta_hol, 3), 0);
}

TEST(Forms, TwoTorusTopDegree) {
  const FormBasisMatrices b = build_form_matrices(2);
  EXPECT_EQ(form_rank(b, FormFamily::eta_bar, 1), 1);
  EXPECT_EQ(form_rank(b, FormFamily::eta_bar, 2), 0);
  EXPECT_EQ(form_rank(b, FormFamily::mu, 2), 1);
  EXPECT_EQ(form_rank(b, FormFamily::mu, 3), 0);
}

TEST(Forms, BidegreeDecomposition) {
  for (int dim : {2, 4}) {
    const VerificationReport r = bidegree_decomposition_check(dim);
    for (const auto& c : r.checks()) EXPECT_TRUE(c.pass) << dim << " " << c.name << " " << c.residual;
  }
  EXPECT_EQ(binomial(4, 2), 6);
  EXPECT_EQ(binomial(2, 0) * binomial(2, 2) + binomial(2, 1) * binomial(2, 1) + binomial(2, 2) * binomial(2, 0), 6);
  EXPECT_EQ(binomial(3, 4), 0);
  EXPECT_EQ(binomial(3, -1), 0);
}

TEST(ProductMap, BasisPairing) {
  const Torus t(ThetaMatrix::standard(6));
  const auto one = TorusElement::one(6);
  const auto zero = TorusElement::zero(6);
  const auto out = product_map(t, {one, zero, zero}, {zero, one, zero});
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(approx_equal(out[0], one));
  EXPECT_TRUE(out[1].pruned().empty());
  EXPECT_TRUE(out[2].pruned().empty());
  const auto swapped = product_map(t, {zero, one, zero}, {one, zero, zero});
  EXPECT_TRUE(approx_equal(swapped[0], -one));
  EXPECT_THROW(product_map(t, {one}, {one, zero}), std::invalid_argument);
}

TEST(ProductMap, AgreesWithOperatorProduct) {
  for (int dim : {4, 6}) {
    const auto t = std::make_shared<const Torus>(ThetaMatrix::random(dim, 17));
    const FormBasisMatrices b = build_form_matrices(dim);
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<TorusElement> x, y;
      for (int p = 0; p < dim / 2; ++p) {
        x.push_back(oracle::random_element(dim, 2, 1, rng));
        y.push_back(oracle::random_element(dim, 2, 1, rng));
      }
      const auto direct = product_map(*t, x, y);
      const auto via_ops = oracle::product_map_via_operators(t, b.eta_bar, x, y);
      ASSERT_EQ(direct.size(), via_ops.size());
      for (std::size_t c = 0; c < direct.size(); ++c) EXPECT_TRUE(approx_equal(direct[c], via_ops[c], 1e-9));
    }
  }
}
