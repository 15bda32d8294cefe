#pragma once

#include <cstdint>
#include <vector>

#include "levywalk/levy.hpp"
#include "levywalk/mc.hpp"
#include "levywalk/model.hpp"
#include "levywalk/walk.hpp"

namespace levywalk::fx {

struct MarketData {
  std::vector<double> spots;
  std::vector<double> foreign_rates;
  double domestic_rate = 0.0;
  std::vector<double> vols;
  std::vector<double> corr;  ///< row-major n x n, unit diagonal

  std::size_t n_ccy() const noexcept { return spots.size(); }
  /// Throws std::invalid_argument on inconsistent sizes, non-positive spots
  /// or vols, or a correlation matrix without unit diagonal or symmetry.
  void validate() const;
};

/// Down-and-in basket put.
struct BasketOption {
  std::vector<double> barriers;
  std::vector<double> weights;
  double strike = 0.0;
  double t0 = 0.0;
  double T = 1.0;

  /// Barriers must be non-negative here; the stricter "positive and below
  /// spot" check lives in validate_against().
  void validate(std::size_t n_ccy) const;
  void validate_against(const MarketData& market) const;
};

struct JumpModelParams {
  std::vector<double> jump_factors;
  SingularTempered measure{0.3, 1.2, 3.0, 1.5};
  double eps = 0.1;
  double h = 1.0;
};

/// USD, EUR, JPY, CHF against GBP.
MarketData reference_market();
BasketOption reference_option();
JumpModelParams reference_jump_model(double eps, double h);

/// Nearest correlation matrix (Frobenius norm) with every eigenvalue at least
/// min_eigenvalue, by alternating projections with Dykstra's correction.
/// Returns the input unchanged when it already satisfies the floor.
std::vector<double> nearest_correlation(const std::vector<double>& corr, double min_eigenvalue = 1e-3);

/// Smallest eigenvalue of a symmetric row-major matrix.
double min_eigenvalue(const std::vector<double>& sym);

/// Lower-triangular sigma with sigma sigma^T = a, a_ij = vol_i vol_j corr_ij.
std::vector<double> build_sigma(const std::vector<double>& vols, const std::vector<double>& corr);

/// int (e^{f z} - 1 - f z 1_{|z|<1}) nu(dz) in closed form plus the power-core
/// series. Throws std::domain_error when |f| >= mu.
double exponential_compensator(double f, const SingularTempered& nu);

/// Drift b_i making e^{-r_dom t} S_i(t) a martingale:
///   r_i - 1/2 sum_j sigma_ij^2 - exponential_compensator(f_i).
double martingale_drift(std::size_t i, const JumpModelParams& params, const MarketData& market);
std::vector<double> martingale_drifts(const JumpModelParams& params, const MarketData& market);

/// Log-spot increments X on R^n with constant coefficients and c = g = 0.
class FxProblem final : public PideProblem {
 public:
  FxProblem(const MarketData& market, const BasketOption& option, const JumpModelParams& params);

  void drift(double, std::span<const double>, std::span<double> out) const override;
  void diffusion(double, std::span<const double>, std::span<double> sigma) const override;
  void jump_coefficient(double, std::span<const double>, std::span<double> out) const override;
  double potential(double, std::span<const double>) const override { return 0.0; }
  double source(double, std::span<const double>) const override { return 0.0; }
  double boundary_value(double, std::span<const double>) const override { return 0.0; }
  std::optional<double> potential_bound() const override { return 0.0; }

 private:
  std::vector<double> drift_, sigma_, jump_;
};

/// S_i(t) = S_i(0) exp((r_dom - r_i)(t - t0) + X_i).
class SpotMonitor final : public PathMonitor {
 public:
  SpotMonitor(const MarketData& market, double t0);
  std::size_t size() const override { return spots_.size(); }
  void observe(double t, std::span<const double> x, std::span<double> out) const override;

 private:
  std::vector<double> spots_, carry_;
  double t0_;
};

struct PriceReport {
  McEstimate knock_in;
  McEstimate vanilla;
  std::vector<McEstimate> discounted_spots;  ///< e^{-r_dom (T - t0)} S_i(T)
};

/// Knock-in price, vanilla basket put and discounted terminal spots from the
/// same paths. Prices are already discounted.
PriceReport price_report(const MarketData& market, const BasketOption& option, const JumpModelParams& params,
                         std::uint64_t paths, std::uint64_t seed, unsigned workers = 1);

McEstimate price_down_and_in_put(const MarketData& market, const BasketOption& option,
                                 const JumpModelParams& params, std::uint64_t paths, std::uint64_t seed,
                                 unsigned workers = 1);

}  // namespace levywalk::fx
