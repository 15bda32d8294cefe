#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "levywalk/fx.hpp"
#include "levywalk/quadrature.hpp"
#include "levywalk/theory.hpp"

namespace levywalk::fx {
namespace {

MarketData repaired_market() {
  MarketData m = reference_market();
  m.corr = nearest_correlation(m.corr);
  return m;
}

TEST(BuildSigma, IdentityCorrelationGivesDiagonal) {
  const auto s = build_sigma({0.1, 0.2, 0.3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(s, (std::vector<double>{0.1, 0, 0, 0, 0.2, 0, 0, 0, 0.3}));
}

TEST(BuildSigma, HandCholesky) {
  const auto s = build_sigma({0.1, 0.2}, {1.0, 0.5, 0.5, 1.0});
  EXPECT_NEAR(s[0], 0.1, 1e-16);
  EXPECT_EQ(s[1], 0.0);
  EXPECT_NEAR(s[2], 0.1, 1e-16);
  EXPECT_NEAR(s[3], 0.17320508075688773, 1e-15);
}

TEST(BuildSigma, TabulatedCorrelationIsIndefinite) {
  const MarketData m = reference_market();
  EXPECT_LT(min_eigenvalue(m.corr), 0.0);
  EXPECT_THROW(build_sigma(m.vols, m.corr), std::domain_error);
}

TEST(NearestCorrelation, RepairIsSmallAndFactorizable) {
  const MarketData raw = reference_market();
  const MarketData m = repaired_market();
  const std::size_t n = m.n_ccy();
  EXPECT_GE(min_eigenvalue(m.corr), 1e-3 * (1.0 - 1e-6));
  double dist = 0.0;
  for (std::size_t i = 0; i < n * n; ++i) dist += std::pow(m.corr[i] - raw.corr[i], 2);
  EXPECT_LT(std::sqrt(dist), 0.1);
  for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(m.corr[i * n + i], 1.0);

  const auto s = build_sigma(m.vols, m.corr);
  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += s[i * n + k] * s[j * n + k];
      const double a = m.vols[i] * m.vols[j] * m.corr[i * n + j];
      residual = std::max(residual, std::abs(acc - a));
    }
  }
  EXPECT_LT(residual, 1e-12);
  // Valid input is returned untouched; repairing twice changes nothing material.
  const std::vector<double> valid{1.0, 0.3, -0.2, 0.3, 1.0, 0.4, -0.2, 0.4, 1.0};
  EXPECT_EQ(nearest_correlation(valid), valid);
  const auto twice = nearest_correlation(m.corr);
  for (std::size_t i = 0; i < n * n; ++i) EXPECT_NEAR(twice[i], m.corr[i], 1e-9);
}

TEST(MartingaleDrift, NoJumpsLeavesTheItoCorrection) {
  const MarketData m = repaired_market();
  JumpModelParams p = reference_jump_model(0.1, 1.0);
  p.jump_factors = {0.0, 0.0, 0.0, 0.0};
  const auto s = build_sigma(m.vols, m.corr);
  for (std::size_t i = 0; i < 4; ++i) {
    double q = 0.0;
    for (std::size_t j = 0; j < 4; ++j) q += s[i * 4 + j] * s[i * 4 + j];
    EXPECT_NEAR(martingale_drift(i, p, m), m.foreign_rates[i] - 0.5 * q, 1e-16);
    EXPECT_NEAR(q, m.vols[i] * m.vols[i], 1e-15);
  }
}

// e^{fz} - 1 - fz 1_{|z|<1} without cancellation near z = 0.
double compensated_exponential(double f, double z) {
  const double x = f * z;
  if (std::abs(z) >= 1.0) return std::expm1(x);
  if (std::abs(x) > 1e-2) return std::expm1(x) - x;
  double term = x * x / 2.0, sum = 0.0;
  for (int n = 3; n < 12; ++n) {
    sum += term;
    term *= x / n;
  }
  return sum;
}

TEST(MartingaleDrift, CompensatorAgreesWithQuadrature) {
  const JumpModelParams p = reference_jump_model(0.1, 1.0);
  const LevyMeasure nu(p.measure);
  for (double f : p.jump_factors) {
    const double oracle = quadrature_oracle(
        nu, [f](double z) { return compensated_exponential(f, z); }, JumpRegion{});
    EXPECT_NEAR(exponential_compensator(f, p.measure), oracle, 1e-8 * std::abs(oracle)) << f;
  }
  for (double alpha : {0.5, 1.0, 1.5}) {
    const SingularTempered st{2.0, 0.4, 2.5, alpha};
    const double f = -0.8;
    const double oracle = quadrature_oracle(
        LevyMeasure(st), [f](double z) { return compensated_exponential(f, z); },
        JumpRegion{});
    EXPECT_NEAR(exponential_compensator(f, st), oracle, 1e-8 * std::abs(oracle)) << alpha;
  }
}

TEST(MartingaleDrift, SeriesTailIsNegligibleByTwentyTerms) {
  const double f = 0.15, alpha = 1.5;
  double term = 1.0;
  for (int n = 1; n <= 20; ++n) term *= f / n;
  EXPECT_LT(1.5 * term / (20 - alpha), 1e-14 * 1e-3);
}

TEST(MartingaleDrift, IntegrabilityIsEnforced) {
  JumpModelParams p = reference_jump_model(0.1, 1.0);
  p.jump_factors[1] = 3.0;
  EXPECT_THROW(martingale_drift(1, p, repaired_market()), std::domain_error);
}

class FxPricing : public ::testing::Test {
 protected:
  MarketData market = repaired_market();
  BasketOption option = reference_option();
  JumpModelParams params = reference_jump_model(0.3, optimal_h(0.3, 1.5, 1.0));
  static constexpr std::uint64_t kPaths = 20000;
  static constexpr std::uint64_t kSeed = 4;
};

TEST_F(FxPricing, BarriersAboveSpotsGiveTheVanillaPrice) {
  BasketOption high = option;
  for (std::size_t i = 0; i < 4; ++i) high.barriers[i] = 2.0 * market.spots[i];
  const PriceReport r = price_report(market, high, params, kPaths, kSeed);
  EXPECT_EQ(r.knock_in.u_hat, r.vanilla.u_hat);
  EXPECT_EQ(r.knock_in.var_hat, r.vanilla.var_hat);
}

TEST_F(FxPricing, ZeroBarriersNeverKnockIn) {
  BasketOption none = option;
  none.barriers.assign(4, 0.0);
  const McEstimate e = price_down_and_in_put(market, none, params, kPaths, kSeed);
  EXPECT_EQ(e.u_hat, 0.0);
  EXPECT_EQ(e.var_hat, 0.0);
}

TEST_F(FxPricing, OrderingBoundsAndBarrierMonotonicity) {
  const double discount = std::exp(-market.domestic_rate * (option.T - option.t0));
  double prev = -1.0;
  for (double scale : {0.8, 1.0, 1.1, 1.25}) {
    BasketOption o = option;
    for (auto& b : o.barriers) b *= scale;
    const PriceReport r = price_report(market, o, params, kPaths, kSeed);
    EXPECT_LE(r.knock_in.u_hat, r.vanilla.u_hat);
    EXPECT_GE(r.knock_in.u_hat, 0.0);
    EXPECT_LE(r.knock_in.u_hat, discount * o.strike);
    EXPECT_GE(r.knock_in.u_hat, prev);
    prev = r.knock_in.u_hat;
  }
}

TEST_F(FxPricing, DiscountedSpotsAreMartingales) {
  const PriceReport r = price_report(market, option, params, 200000, kSeed);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LT(std::abs(r.discounted_spots[i].u_hat - market.spots[i]), 3.0 * r.discounted_spots[i].half_width) << i;
  }
}

TEST_F(FxPricing, WorkerCountDoesNotMatter) {
  const McEstimate a = price_down_and_in_put(market, option, params, 3 * kBlockPaths + 5, kSeed, 1);
  const McEstimate b = price_down_and_in_put(market, option, params, 3 * kBlockPaths + 5, kSeed, 3);
  EXPECT_EQ(a.u_hat, b.u_hat);
}

TEST(FxValidation, InconsistentInputsAreRejected) {
  MarketData m = reference_market();
  m.vols.pop_back();
  EXPECT_THROW(m.validate(), std::invalid_argument);
  BasketOption o = reference_option();
  o.barriers[0] = 1.0;
  EXPECT_NO_THROW(o.validate(4));
  EXPECT_THROW(o.validate_against(reference_market()), std::invalid_argument);
  o.strike = 0.0;
  EXPECT_THROW(o.validate(4), std::invalid_argument);
}

}  // namespace
}  // namespace levywalk::fx
