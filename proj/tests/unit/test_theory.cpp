#include <cmath>

#include <gtest/gtest.h>

#include "levywalk/theory.hpp"

namespace levywalk {
namespace {

TEST(BiasProfile, SymmetricMeasureHasUnitGammaFactor) {
  const LevyMeasure nu(SingularTempered{0.5, 0.5, 3.0, 1.5});
  const double eps = 0.01, h = 0.02;
  const BiasProfile p = bias_profile(nu, eps, h);
  const double lambda = intensity(nu, eps);
  const double x = lambda * h;
  EXPECT_NEAR(p.term_restricted, 1.0 / lambda - h * std::exp(-x) / (1.0 - std::exp(-x)), 1e-14);
}

TEST(BiasProfile, SmallStepLimitIsHalfTheCap) {
  const LevyMeasure nu(SingularTempered{0.1, 1.0, 3.0, 0.5});
  const double eps = 0.01;
  const double lambda = intensity(nu, eps);
  const double gamma = drift_compensator(nu, eps);
  const double h = 0.01 / lambda;  // lambda h = 0.01
  const BiasProfile p = bias_profile(nu, eps, h);
  const double series = h / 2.0 - lambda * h * h / 12.0;
  EXPECT_NEAR(p.term_restricted / (1.0 + gamma * gamma), series, 0.01 * series);
  EXPECT_NEAR(p.term_restricted / (1.0 + gamma * gamma), h / 2.0, 0.01 * h / 2.0);
}

TEST(BiasProfile, TermsAreNonNegativeOnALogGrid) {
  const LevyMeasure nu(SingularTempered{1.0, 25.0, 3.0, 1.5});
  for (double eps = 1e-4; eps < 0.9; eps *= 3.0) {
    for (double h = 1e-9; h < 10.0; h *= 7.0) {
      const BiasProfile p = bias_profile(nu, eps, h);
      EXPECT_GE(p.term_restricted, 0.0);
      EXPECT_GE(p.term_boundary, 0.0);
      EXPECT_GE(p.term_smalljump, 0.0);
    }
  }
}

TEST(BiasProfile, SmallJumpTermScalesWithThreeMinusAlpha) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const LevyMeasure nu(SingularTempered{0.3, 1.2, 3.0, alpha});
    const double a = bias_profile(nu, 0.01, 1.0).term_smalljump;
    const double b = bias_profile(nu, 0.005, 1.0).term_smalljump;
    EXPECT_NEAR(a / b, std::pow(2.0, 3.0 - alpha), 1e-6 * std::pow(2.0, 3.0 - alpha));
  }
}

TEST(BiasProfile, OptimalCapGivesTheSmallJumpRate) {
  const LevyMeasure nu(SingularTempered{1.0, 25.0, 3.0, 1.5});
  for (double eps : {1e-3, 1e-4}) {
    const double a = bias_profile(nu, eps, optimal_h(eps, 1.5, 1.0)).total();
    const double b = bias_profile(nu, eps / 2, optimal_h(eps / 2, 1.5, 1.0)).total();
    EXPECT_NEAR(a / b, std::pow(2.0, 1.5), 0.1 * std::pow(2.0, 1.5)) << eps;
  }
}

TEST(StepsBound, TabulatedIntensity) {
  EXPECT_NEAR(steps_bound(42.17, 1.0, 1.0), 43.2, 0.05);
  EXPECT_GT(steps_bound(42.17, 1.0, 1.0), 17.10);
}

TEST(StepsBound, Limits) {
  EXPECT_NEAR(steps_bound(1e4, 1.0, 2.0), 2e4 + 1.0, 1e-9);
  const double lambda = 1e-3, h = 0.01, horizon = 1.0;
  EXPECT_NEAR(steps_bound(lambda, h, horizon), horizon / h + 1.0, horizon * lambda);
}

TEST(OptimalH, Regimes) {
  EXPECT_NEAR(optimal_h(0.01, 1.5, 1.0), 1e-5, 1e-18);
  EXPECT_EQ(optimal_h(0.01, 0.5, 2.0), 2.0);
  EXPECT_EQ(optimal_h(0.3, 1.0, 1.0), 1.0);
  EXPECT_THROW(optimal_h(0.0, 1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(optimal_h(0.1, 2.0, 1.0), std::invalid_argument);
}

TEST(Cost, ClosedFormAndMonotonicity) {
  EXPECT_NEAR(cost(1.0, std::log(2.0)), 2.0, 1e-14);
  EXPECT_NEAR(cost(5.0, 1e3), 5.0, 1e-12);
  double prev = INFINITY;
  for (double h = 1e-6; h < 8.0; h *= 2.0) {
    const double c = cost(3.0, h);
    EXPECT_LT(c, prev);
    prev = c;
  }
  EXPECT_THROW(cost(0.0, 1.0), std::invalid_argument);
}

TEST(Cost, OptimalCapScalesAsInverseStep) {
  const LevyMeasure nu(SingularTempered{1.0, 25.0, 3.0, 1.5});
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    const double a = cost(intensity(nu, eps), optimal_h(eps, 1.5, 1.0));
    const double b = cost(intensity(nu, eps / 2), optimal_h(eps / 2, 1.5, 1.0));
    EXPECT_NEAR(b / a, std::pow(2.0, 2.5), 0.05 * std::pow(2.0, 2.5)) << eps;
  }
}

}  // namespace
}  // namespace levywalk
