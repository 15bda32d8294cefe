#include "levywalk/theory.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace levywalk {
namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("theory: ") + what + " must be positive");
}

// 1 - x / (e^x - 1), accurate for small x.
double restricted_bracket(double x) {
  if (x < 1e-3) {
    const double x2 = x * x;
    return x / 2.0 - x2 / 12.0 + x2 * x2 / 720.0;
  }
  return 1.0 - x / std::expm1(x);
}

}  // namespace

BiasProfile bias_profile(const LevyMeasure& nu, double eps, double h) {
  require_positive(eps, "eps");
  require_positive(h, "h");
  const CutoffQuantities q = cutoff_quantities(nu, eps);
  const double x = q.lambda * h;
  BiasProfile p;
  p.term_restricted = (1.0 + q.gamma * q.gamma) * restricted_bracket(x) / q.lambda;
  p.term_boundary = -std::expm1(-x) / q.lambda;
  p.term_smalljump = third_moment_tail(nu, eps);
  return p;
}

double steps_bound(double lambda_eps, double h, double horizon) {
  require_positive(horizon, "horizon");
  return horizon * cost(lambda_eps, h) + 1.0;
}

double optimal_h(double eps, double alpha, double horizon) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("theory: eps must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 2.0)) throw std::invalid_argument("theory: alpha must lie in (0, 2)");
  require_positive(horizon, "horizon");
  return alpha > 1.0 ? std::pow(eps, 1.0 + alpha) : horizon;
}

double cost(double lambda_eps, double h) {
  require_positive(lambda_eps, "lambda");
  require_positive(h, "h");
  return lambda_eps / -std::expm1(-lambda_eps * h);
}

}  // namespace levywalk
