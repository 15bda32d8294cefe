#pragma once

#include "levywalk/levy.hpp"

namespace levywalk {

/// Error profile of the restricted scheme with every unknown constant set to 1.
struct BiasProfile {
  double term_restricted = 0.0;  ///< (1 + gamma^2)(1/lambda - h e^{-lambda h} / (1 - e^{-lambda h}))
  double term_boundary = 0.0;    ///< (1 - e^{-lambda h}) / lambda
  double term_smalljump = 0.0;   ///< int_{|z|<=eps} |z|^3 nu(dz)

  double total() const noexcept { return term_restricted + term_boundary + term_smalljump; }
};

BiasProfile bias_profile(const LevyMeasure& nu, double eps, double h);

/// Upper bound on the mean number of chain steps:
/// horizon * lambda / (1 - e^{-lambda h}) + 1.
double steps_bound(double lambda_eps, double h, double horizon);

/// eps^{1 + alpha} for alpha > 1, otherwise the whole horizon.
double optimal_h(double eps, double alpha, double horizon);

/// Expected steps per unit time, lambda / (1 - e^{-lambda h}).
double cost(double lambda_eps, double h);

}  // namespace levywalk
