#include "levywalk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace levywalk {
namespace {

constexpr double kRelTol = 1e-10;
constexpr double kGeometricRatio = 4.0;
constexpr int kMaxDepth = 24;
constexpr int kMaxTailPanels = 64;
constexpr double kPanelTol = 1e-11;

struct Partial {
  double value = 0.0;
  double error = 0.0;
  double l1 = 0.0;

  Partial& operator+=(const Partial& o) {
    value += o.value;
    error += o.error;
    l1 += o.l1;
    return *this;
  }
};

// One 31-point Gauss-Kronrod panel on [a, b]. Boost 1.74 leaves the error
// estimate unscaled on intervals other than [-1, 1], so map explicitly.
template <class F>
Partial panel(const F& g, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto mapped = [&](double t) { return g(mid + half * t); };
  Partial p;
  p.value = half * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(mapped, -1.0, 1.0, 0, 0.0, &p.error,
                                                                                 &p.l1);
  p.error *= half;
  p.l1 *= half;
  return p;
}

template <class F>
Partial bisect(const F& g, double a, double b, double abs_tol, int depth = 0) {
  const Partial p = panel(g, a, b);
  if (depth >= kMaxDepth || p.error <= std::max(kPanelTol * p.l1, abs_tol)) return p;
  const double m = 0.5 * (a + b);
  Partial left = bisect(g, a, m, abs_tol, depth + 1);
  left += bisect(g, m, b, abs_tol, depth + 1);
  return left;
}

// Integral of g over [lo, hi] with 0 <= lo < hi <= inf. Any kink or
// singularity of g sits at an endpoint.
template <class F>
Partial integrate_positive(const F& g, double lo, double hi) {
  Partial out;
  if (std::isinf(hi)) {
    // Panels of doubling width until the tail no longer registers.
    double a = lo;
    double width = std::max(1.0, lo);
    for (int i = 0; i < kMaxTailPanels; ++i) {
      const Partial piece = bisect(g, a, a + width, kPanelTol * out.l1);
      out += piece;
      if (piece.l1 <= 1e-18 * out.l1 && i >= 4) return out;
      a += width;
      width *= 2.0;
    }
    out.error = std::numeric_limits<double>::infinity();
    return out;
  }
  if (lo == 0.0) {
    // Geometric panels towards the singular endpoint; the last sliver gets a
    // single panel, its contribution is far below the tolerance.
    double b = hi;
    while (b > hi * 1e-30) {
      out += bisect(g, b / kGeometricRatio, b, kPanelTol * out.l1);
      b /= kGeometricRatio;
    }
    out += panel(g, 0.0, b);
    return out;
  }
  // Power-law integrands vary over decades near the origin; split geometrically.
  double a = lo;
  while (a < hi) {
    const double b = (hi / a > kGeometricRatio) ? a * kGeometricRatio : hi;
    out += bisect(g, a, b, 1e-300);
    a = b;
  }
  return out;
}

Partial integrate_signed(const LevyMeasure& nu, const Integrand& f, double a, double b) {
  std::vector<double> cuts{a};
  for (double p : {-1.0, 0.0, 1.0}) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);

  Partial total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    if (hi <= lo) continue;
    if (hi <= 0.0) {
      const auto g = [&](double s) { return f(-s) * nu.density(-s); };
      total += integrate_positive(g, -hi, -lo);
    } else {
      const auto g = [&](double s) { return f(s) * nu.density(s); };
      total += integrate_positive(g, lo, hi);
    }
  }
  return total;
}

std::string format(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double checked(const Partial& p) {
  if (!std::isfinite(p.value) || !(p.error <= kRelTol * p.l1 + 1e-300)) {
    throw QuadratureError("quadrature: integral did not converge (value " + format(p.value) +
                          ", error estimate " + format(p.error) + ")");
  }
  return p.value;
}

}  // namespace

double integrate_interval(const LevyMeasure& nu, const Integrand& f, double a, double b) {
  if (!(a < b)) return 0.0;
  return checked(integrate_signed(nu, f, a, b));
}

double quadrature_oracle(const LevyMeasure& nu, const Integrand& f, JumpRegion region) {
  if (!(region.lo >= 0.0) || !(region.hi > region.lo)) {
    throw std::invalid_argument("quadrature: region needs 0 <= lo < hi");
  }
  Partial total = integrate_signed(nu, f, -region.hi, -region.lo);
  total += integrate_signed(nu, f, region.lo, region.hi);
  return checked(total);
}

}  // namespace levywalk
