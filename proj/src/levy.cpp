#include "levywalk/levy.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/binomial.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/roots.hpp>

namespace levywalk {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate_constants(double c_plus, double c_minus) {
  require(std::isfinite(c_plus) && std::isfinite(c_minus), "levy: constants must be finite");
  require(c_plus >= 0.0 && c_minus >= 0.0, "levy: c_plus and c_minus must be non-negative");
  require(c_plus > 0.0 || c_minus > 0.0, "levy: c_plus and c_minus cannot both be zero");
}

void validate_alpha(double alpha) {
  require(alpha > 0.0 && alpha < 2.0, "levy: alpha must lie strictly inside (0, 2)");
}

void validate_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::domain_error("levy: cutoff must be finite and >= 0");
}

// Upper incomplete gamma Gamma(s, x) for s > -2 (s = 0, -1 included), x > 0.
double upper_gamma(double s, double x) {
  if (s > 0.0) return boost::math::tgamma(s, x);
  if (s == 0.0) return boost::math::expint(1, x);
  return (upper_gamma(s + 1.0, x) - std::pow(x, s) * std::exp(-x)) / s;
}

// Lower incomplete gamma gamma(a, x), a > 0, with gamma(a, 0) = 0.
double lower_gamma(double a, double x) {
  if (x <= 0.0) return 0.0;
  return boost::math::tgamma_lower(a, x);
}

// Integral over [0, x] of s^k exp(-mu s) ds.
double exp_moment(int k, double mu, double x) {
  return lower_gamma(k + 1.0, mu * x) / std::pow(mu, k + 1);
}

// Integral over [1, r] of z^n exp(-mu (z - 1)) dz, r >= 1, expanded around 1
// so that r close to 1 keeps full relative accuracy.
double shifted_exp_moment(int n, double mu, double r) {
  const double span = r - 1.0;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    sum += boost::math::binomial_coefficient<double>(n, k) * exp_moment(k, mu, span);
  }
  return sum;
}

// (1 - eps^{p}) / p with the p -> 0 limit -ln(eps).
double power_integral(double p, double eps) {
  if (p == 0.0) return -std::log(eps);
  return -std::expm1(p * std::log(eps)) / p;
}

// Per-side tail mass beyond r for the unit-constant side density.
double side_tail(const LevyMeasure::Params& p, bool negative, double r) {
  return std::visit(
      overloaded{
          [&](const ExponentialTails& e) { return std::exp(-e.mu * r) / e.mu; },
          [&](const SingularTempered& s) {
            if (r >= 1.0) return std::exp(-s.mu * (r - 1.0)) / s.mu;
            return std::expm1(-s.alpha * std::log(r)) / s.alpha + 1.0 / s.mu;
          },
          [&](const TemperedStable& t) {
            const double rate = negative ? t.lambda_minus : t.lambda_plus;
            return std::pow(rate, t.alpha) * upper_gamma(-t.alpha, rate * r);
          }},
      p);
}

// Per-side integral of |z|^n over |z| < eps for the unit-constant side
// density, n >= 2.
double side_small_moment(const LevyMeasure::Params& p, bool negative, int n, double eps) {
  if (eps <= 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const ExponentialTails& e) { return exp_moment(n, e.mu, eps); },
          [&](const SingularTempered& s) {
            const double core_power = n - s.alpha;
            if (eps <= 1.0) return std::pow(eps, core_power) / core_power;
            return 1.0 / core_power + shifted_exp_moment(n, s.mu, eps);
          },
          [&](const TemperedStable& t) {
            const double rate = negative ? t.lambda_minus : t.lambda_plus;
            const double a = n - t.alpha;
            return std::pow(rate, -a) * lower_gamma(a, rate * eps);
          }},
      p);
}

// Per-side integral of |z| over eps <= |z| <= 1 for the unit-constant side
// density.
double side_first_moment(const LevyMeasure::Params& p, bool negative, double eps) {
  return std::visit(
      overloaded{
          [&](const ExponentialTails& e) {
            return exp_moment(1, e.mu, 1.0) - exp_moment(1, e.mu, eps);
          },
          [&](const SingularTempered& s) { return power_integral(1.0 - s.alpha, eps); },
          [&](const TemperedStable& t) {
            const double rate = negative ? t.lambda_minus : t.lambda_plus;
            const double s = 1.0 - t.alpha;
            return std::pow(rate, -s) * (upper_gamma(s, rate * eps) - upper_gamma(s, rate));
          }},
      p);
}

}  // namespace

LevyMeasure::LevyMeasure(ExponentialTails p) : params_(p) {
  validate_constants(p.c_plus, p.c_minus);
  require(p.mu > 0.0 && std::isfinite(p.mu), "levy: mu must be positive");
}

LevyMeasure::LevyMeasure(SingularTempered p) : params_(p) {
  validate_constants(p.c_plus, p.c_minus);
  require(p.mu > 0.0 && std::isfinite(p.mu), "levy: mu must be positive");
  validate_alpha(p.alpha);
}

LevyMeasure::LevyMeasure(TemperedStable p) : params_(p) {
  validate_constants(p.c_plus, p.c_minus);
  require(p.lambda_plus > 0.0 && p.lambda_minus > 0.0, "levy: tempering rates must be positive");
  validate_alpha(p.alpha);
}

double LevyMeasure::c_plus() const noexcept {
  return std::visit([](const auto& p) { return p.c_plus; }, params_);
}

double LevyMeasure::c_minus() const noexcept {
  return std::visit([](const auto& p) { return p.c_minus; }, params_);
}

bool LevyMeasure::symmetric() const noexcept {
  if (const auto* t = std::get_if<TemperedStable>(&params_)) {
    return t->c_plus == t->c_minus && t->lambda_plus == t->lambda_minus;
  }
  return c_plus() == c_minus();
}

bool LevyMeasure::finite_activity() const noexcept {
  return std::holds_alternative<ExponentialTails>(params_);
}

double LevyMeasure::density(double z) const noexcept {
  const bool negative = z < 0.0;
  const double r = std::abs(z);
  const double c = negative ? c_minus() : c_plus();
  if (c == 0.0 || r == 0.0) return 0.0;
  return std::visit(
      overloaded{
          [&](const ExponentialTails& e) { return c * std::exp(-e.mu * r); },
          [&](const SingularTempered& s) {
            if (r > 1.0) return c * std::exp(-s.mu * (r - 1.0));
            return c * std::pow(r, -(s.alpha + 1.0));
          },
          [&](const TemperedStable& t) {
            const double rate = negative ? t.lambda_minus : t.lambda_plus;
            return c * std::exp(-rate * r) * std::pow(r, -(t.alpha + 1.0));
          }},
      params_);
}

std::string LevyMeasure::describe() const {
  std::ostringstream os;
  os.precision(17);
  std::visit(overloaded{[&](const ExponentialTails& e) {
                          os << "ExponentialTails{c_plus=" << e.c_plus << ", c_minus=" << e.c_minus
                             << ", mu=" << e.mu << "}";
                        },
                        [&](const SingularTempered& s) {
                          os << "SingularTempered{c_plus=" << s.c_plus << ", c_minus=" << s.c_minus
                             << ", mu=" << s.mu << ", alpha=" << s.alpha << "}";
                        },
                        [&](const TemperedStable& t) {
                          os << "TemperedStable{c_plus=" << t.c_plus << ", c_minus=" << t.c_minus
                             << ", lambda_plus=" << t.lambda_plus
                             << ", lambda_minus=" << t.lambda_minus << ", alpha=" << t.alpha << "}";
                        }},
             params_);
  return os.str();
}

double intensity(const LevyMeasure& nu, double eps) {
  validate_eps(eps);
  if (eps == 0.0 && !nu.finite_activity()) {
    throw InfiniteIntensityError("levy: infinite-activity measure has infinite intensity at eps = 0");
  }
  double total = 0.0;
  if (nu.c_minus() > 0.0) total += nu.c_minus() * side_tail(nu.params(), true, eps);
  if (nu.c_plus() > 0.0) total += nu.c_plus() * side_tail(nu.params(), false, eps);
  return total;
}

double drift_compensator(const LevyMeasure& nu, double eps) {
  validate_eps(eps);
  if (eps > 1.0) throw std::domain_error("levy: drift compensator needs eps <= 1");
  if (eps == 0.0 && !nu.finite_activity()) {
    throw InfiniteIntensityError("levy: drift compensator diverges at eps = 0 for infinite activity");
  }
  if (nu.symmetric()) return 0.0;
  const double plus = nu.c_plus() > 0.0 ? nu.c_plus() * side_first_moment(nu.params(), false, eps) : 0.0;
  const double minus =
      nu.c_minus() > 0.0 ? nu.c_minus() * side_first_moment(nu.params(), true, eps) : 0.0;
  return plus - minus;
}

SmallJumpCovariance small_jump_covariance(const LevyMeasure& nu, double eps) {
  validate_eps(eps);
  const double b = nu.c_plus() * side_small_moment(nu.params(), false, 2, eps) +
                   nu.c_minus() * side_small_moment(nu.params(), true, 2, eps);
  return {b, std::sqrt(b)};
}

double third_moment_tail(const LevyMeasure& nu, double eps) {
  validate_eps(eps);
  return nu.c_plus() * side_small_moment(nu.params(), false, 3, eps) +
         nu.c_minus() * side_small_moment(nu.params(), true, 3, eps);
}

CutoffQuantities cutoff_quantities(const LevyMeasure& nu, double eps) {
  CutoffQuantities q;
  q.eps = eps;
  q.lambda = intensity(nu, eps);
  q.gamma = drift_compensator(nu, eps);
  const auto cov = small_jump_covariance(nu, eps);
  q.b = cov.b;
  q.beta = cov.beta;
  return q;
}

JumpSampler::JumpSampler(const LevyMeasure& nu, double eps)
    : nu_(nu), eps_(eps), lambda_(intensity(nu, eps)) {
  const double neg = nu.c_minus() > 0.0 ? nu.c_minus() * side_tail(nu.params(), true, eps) : 0.0;
  p_neg_ = neg / lambda_;
}

double JumpSampler::tail_quantile(bool negative, double mass) const {
  const double c = negative ? nu_.c_minus() : nu_.c_plus();
  const double q = mass / c;
  const double r = std::visit(
      overloaded{
          [&](const ExponentialTails& e) { return -std::log(e.mu * q) / e.mu; },
          [&](const SingularTempered& s) {
            if (q <= 1.0 / s.mu) return 1.0 - std::log(s.mu * q) / s.mu;
            return std::exp(-std::log1p(s.alpha * (q - 1.0 / s.mu)) / s.alpha);
          },
          [&](const TemperedStable&) {
            // No closed-form inverse: bracket and solve the monotone tail equation.
            const auto f = [&](double r) { return side_tail(nu_.params(), negative, r) - q; };
            double lo = eps_;
            double hi = std::max(2.0 * eps_, 1.0);
            while (f(hi) > 0.0) hi *= 2.0;
            boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
            std::uintmax_t iters = 200;
            const auto root = boost::math::tools::toms748_solve(f, lo, hi, tol, iters);
            return 0.5 * (root.first + root.second);
          }},
      nu_.params());
  return r > eps_ ? r : std::nextafter(eps_, std::numeric_limits<double>::infinity());
}

double JumpSampler::operator()(double u) const {
  if (!(u > 0.0 && u < 1.0)) throw std::invalid_argument("levy: uniform variate must lie in (0, 1)");
  if (u <= p_neg_) return -tail_quantile(true, u * lambda_);
  return tail_quantile(false, (1.0 - u) * lambda_);
}

double sample_jump(const LevyMeasure& nu, double eps, double u) { return JumpSampler(nu, eps)(u); }

}  // namespace levywalk
