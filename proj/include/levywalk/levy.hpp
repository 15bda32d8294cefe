#pragma once

#include <stdexcept>
#include <string>
#include <variant>

namespace levywalk {

/// Two-sided exponential density: c_minus * exp(-mu|z|) on z < 0 and
/// c_plus * exp(-mu|z|) on z > 0. Finite activity.
struct ExponentialTails {
  double c_plus;
  double c_minus;
  double mu;
};

/// Power core |z|^{-(1+alpha)} on 0 < |z| <= 1 glued to exponential tails
/// exp(-mu(|z| - 1)) beyond, each side scaled by its own constant.
struct SingularTempered {
  double c_plus;
  double c_minus;
  double mu;
  double alpha;
};

/// Classical tempered stable density c_{+-} exp(-lambda_{+-}|z|) / |z|^{1+alpha}.
struct TemperedStable {
  double c_plus;
  double c_minus;
  double lambda_plus;
  double lambda_minus;
  double alpha;
};

/// Raised when the jump intensity of an infinite-activity measure is
/// requested without a positive cutoff.
class InfiniteIntensityError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Scalar Levy measure. Immutable and validated on construction.
class LevyMeasure {
 public:
  using Params = std::variant<ExponentialTails, SingularTempered, TemperedStable>;

  LevyMeasure(ExponentialTails p);
  LevyMeasure(SingularTempered p);
  LevyMeasure(TemperedStable p);

  const Params& params() const noexcept { return params_; }
  double c_plus() const noexcept;
  double c_minus() const noexcept;

  /// True when the density is an even function of z.
  bool symmetric() const noexcept;
  /// True when the total mass is finite (no cutoff needed).
  bool finite_activity() const noexcept;
  /// Density of nu at z != 0.
  double density(double z) const noexcept;

  std::string describe() const;

 private:
  Params params_;
};

/// Quantities derived from a cutoff eps that every chain step consumes.
struct CutoffQuantities {
  double eps = 0.0;
  double lambda = 0.0;  ///< intensity of jumps with |z| > eps
  double gamma = 0.0;   ///< compensator drift, integral of z over eps <= |z| <= 1
  double b = 0.0;       ///< small-jump second moment, integral of z^2 over |z| < eps
  double beta = 0.0;    ///< sqrt(b)
};

struct SmallJumpCovariance {
  double b;
  double beta;
};

/// Mass of {|z| > eps}. eps = 0 is only accepted for finite-activity measures.
double intensity(const LevyMeasure& nu, double eps);

/// Integral of z over eps <= |z| <= 1. Requires eps <= 1; eps = 0 is accepted
/// for finite-activity measures.
double drift_compensator(const LevyMeasure& nu, double eps);

/// Integral of z^2 over |z| < eps, and its square root.
SmallJumpCovariance small_jump_covariance(const LevyMeasure& nu, double eps);

/// Integral of |z|^3 over |z| <= eps.
double third_moment_tail(const LevyMeasure& nu, double eps);

/// All cutoff quantities at once.
CutoffQuantities cutoff_quantities(const LevyMeasure& nu, double eps);

/// Exact inverse-CDF sampler for the normalized large-jump density
/// nu(z) 1{|z| > eps} / lambda_eps. Construction does the expensive work;
/// each draw is a pure function of one uniform variate.
class JumpSampler {
 public:
  JumpSampler(const LevyMeasure& nu, double eps);

  /// Quantile at u in (0, 1). Monotone non-decreasing in u, |result| > eps.
  double operator()(double u) const;

  double eps() const noexcept { return eps_; }
  double lambda() const noexcept { return lambda_; }
  /// Probability that a jump is negative.
  double negative_mass() const noexcept { return p_neg_; }

 private:
  // Distance r >= eps on one side such that the side's tail mass beyond r
  // equals `mass`.
  double tail_quantile(bool negative, double mass) const;

  LevyMeasure nu_;
  double eps_;
  double lambda_;
  double p_neg_;
};

/// Convenience wrapper building a JumpSampler for a single draw.
double sample_jump(const LevyMeasure& nu, double eps, double u);

}  // namespace levywalk
