#pragma once

#include <functional>
#include <limits>
#include <stdexcept>

#include "levywalk/levy.hpp"

namespace levywalk {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Set of jump sizes {lo < |z| < hi}; hi may be +infinity. Endpoints carry no
/// mass for the measures in this library.
struct JumpRegion {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();

  static JumpRegion small_jumps(double eps) { return {0.0, eps}; }
  static JumpRegion large_jumps(double eps) { return {eps, std::numeric_limits<double>::infinity()}; }
  static JumpRegion annulus(double lo, double hi) { return {lo, hi}; }
};

using Integrand = std::function<double(double)>;

/// Adaptive numeric integral of f against nu over a symmetric region, to a
/// relative tolerance of 1e-10. Validation oracle; not used on simulation
/// paths. Throws QuadratureError when the error estimate does not converge.
double quadrature_oracle(const LevyMeasure& nu, const Integrand& f, JumpRegion region);

/// Integral of f against nu over the signed interval [a, b] (either end may
/// be infinite).
double integrate_interval(const LevyMeasure& nu, const Integrand& f, double a, double b);

}  // namespace levywalk
