#include "chenlee/estimates.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include <gtest/gtest.h>

#include "chenlee/errors.hpp"
#include "chenlee/fourier_field.hpp"
#include "chenlee/random_field.hpp"

using namespace chenlee;

namespace {

const ModelParams kUnit{1.0, 1.0};

RandomFieldSpec small_spec(int K, unsigned long long seed) {
  RandomFieldSpec spec;
  spec.K = K;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST(LinearEstimates, SemigroupBoundsHoldOnSmallCampaign) {
  const auto rep = estimates::verify_linear_estimates({-0.4, 1.0}, {0.25, 1.0}, kUnit,
                                                      small_spec(32, 11), 6);
  EXPECT_TRUE(rep.pass);
  ASSERT_FALSE(rep.lhs.empty());
  ASSERT_EQ(rep.lhs.size(), rep.rhs.size());
  ASSERT_EQ(rep.lhs.size(), rep.grid.size());
  for (std::size_t i = 0; i < rep.lhs.size(); ++i)
    EXPECT_LE(rep.lhs[i], rep.rhs[i] * (1.0 + 1e-12)) << rep.grid[i];
  EXPECT_GT(rep.fitted_constant, 0.0);
}

TEST(BilinearEstimates, SupRatioIsPositiveAndSmallForUnitParams) {
  const double r = estimates::bilinear_sup_ratio(0.0, 1.0, kUnit, small_spec(16, 5), 8, 16);
  EXPECT_GT(r, 0.0);
  EXPECT_LT(r, 1.0);
  const double r2 = estimates::bilinear_sup_ratio(0.0, 1.0, kUnit, small_spec(16, 5), 8, 32);
  EXPECT_NEAR(r2 / r, 1.0, 0.1);  // discretization-stable
}

TEST(BilinearEstimates, WeakerDampingGivesLargerRatio) {
  const ModelParams weak{1.0, 0.05};
  const ModelParams strong{1.0, 4.0};
  const double rw = estimates::bilinear_sup_ratio(0.0, 1.0, weak, small_spec(16, 5), 6, 16);
  const double rs = estimates::bilinear_sup_ratio(0.0, 1.0, strong, small_spec(16, 5), 6, 16);
  EXPECT_GT(rw, rs);
}

TEST(BilinearEstimates, SweepIsBoundedAsHorizonShrinks) {
  const auto rep =
      estimates::verify_bilinear_estimate({0.0}, 2, 4, small_spec(16, 5), kUnit, 4);
  EXPECT_TRUE(rep.pass);
  EXPECT_EQ(rep.grid.size(), 3u);
  EXPECT_GT(rep.fitted_constant, 0.0);
  EXPECT_THROW(estimates::verify_bilinear_estimate({0.0}, 4, 2, small_spec(16, 5), kUnit, 4),
               precondition_error);
}

TEST(ProductBound, HandComputedSingleModePair) {
  // phi with only mode 2, psi with only mode 3: the product is the single
  // mode 5 and both sides of the weighted inequality are closed-form.
  const double a = 3.0, r = 2.0;
  FourierField phi(8), psi(8);
  phi.mark_complex();
  psi.mark_complex();
  phi.set(2, cdouble(0.7, -0.1));
  psi.set(3, cdouble(-0.4, 0.9));
  const FourierField prod = pseudospectral_product(phi, psi);
  const auto w = [&](int k) { return std::pow(1.0 + (a * k) * (a * k), r / 2.0); };
  const double lhs = w(5) * std::abs(prod.at(5));
  const double rhs =
      std::pow(2.0, r / 2.0) * w(2) * std::abs(phi.at(2)) * w(3) * std::abs(psi.at(3));
  EXPECT_NEAR(std::abs(prod.at(5) - phi.at(2) * psi.at(3)), 0.0, 1e-15);
  EXPECT_LT(lhs, rhs);
}

TEST(ProductBound, RandomCampaignHasNoViolations) {
  const auto rep = estimates::verify_product_bound(2.0, 1.5, 100, small_spec(32, 7));
  EXPECT_TRUE(rep.pass);
  EXPECT_GT(rep.fitted_constant, 0.0);
  EXPECT_LE(rep.fitted_constant, 1.0 + 1e-12);
  EXPECT_EQ(rep.grid.size(), 64u);  // capped row recording
}

TEST(ProductBound, ScaledConstantBreaksTheInequality) {
  const auto rep = estimates::verify_product_bound(2.0, 1.5, 50, small_spec(32, 7), 1e-3);
  EXPECT_FALSE(rep.pass);
  EXPECT_GT(rep.fitted_constant, 1.0);
  EXPECT_THROW(estimates::verify_product_bound(2.0, 1.5, 10, small_spec(32, 7), 0.0),
               precondition_error);
  EXPECT_THROW(estimates::verify_product_bound(-1.0, 1.5, 10, small_spec(32, 7)),
               precondition_error);
}

TEST(KernelLemmas, BoundsAndSmallTimeExponent) {
  const auto rep = estimates::verify_kernel_lemmas({0.5, 1.0}, {1.0}, {0.25, 1.0});
  EXPECT_TRUE(rep.pass);
  ASSERT_TRUE(rep.has_exponent);
  // -(1 + 2 lambda)/4 for the worst lambda in {0.5, 1}: between -0.75 and -0.5
  EXPECT_GT(rep.fitted_exponent, -0.81);
  EXPECT_LT(rep.fitted_exponent, -0.44);
  EXPECT_LT(rep.exponent_half_width, 0.05);
}

TEST(Contraction, MeasuredConstantFloorsAtLinearPart) {
  const double c = estimates::measure_contraction_constant(0.0, kUnit, small_spec(16, 5), 4);
  EXPECT_DOUBLE_EQ(c, 1.0);  // unit-parameter ratios sit far below the floor
}
