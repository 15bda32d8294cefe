#include "levywalk/fx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace levywalk::fx {
namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

void MarketData::validate() const {
  const std::size_t n = n_ccy();
  require(n > 0, "fx: no currencies");
  require(foreign_rates.size() == n && vols.size() == n && corr.size() == n * n, "fx: market data sizes disagree");
  for (std::size_t i = 0; i < n; ++i) {
    require(spots[i] > 0.0 && std::isfinite(spots[i]), "fx: spots must be positive");
    require(vols[i] > 0.0 && std::isfinite(vols[i]), "fx: vols must be positive");
    require(corr[i * n + i] == 1.0, "fx: correlation diagonal must be one");
    for (std::size_t j = 0; j < i; ++j) {
      require(corr[i * n + j] == corr[j * n + i], "fx: correlation matrix must be symmetric");
      require(std::abs(corr[i * n + j]) <= 1.0, "fx: correlations must lie in [-1, 1]");
    }
  }
}

void BasketOption::validate(std::size_t n_ccy) const {
  require(barriers.size() == n_ccy && weights.size() == n_ccy, "fx: option sizes disagree with the market");
  for (double b : barriers) require(b >= 0.0 && std::isfinite(b), "fx: barriers must be non-negative");
  require(strike > 0.0, "fx: strike must be positive");
  require(T > t0, "fx: maturity must follow the start time");
}

void BasketOption::validate_against(const MarketData& market) const {
  validate(market.n_ccy());
  for (std::size_t i = 0; i < barriers.size(); ++i) {
    require(barriers[i] > 0.0 && barriers[i] < market.spots[i], "fx: barriers must be positive and below spot");
  }
}

MarketData reference_market() {
  MarketData m;
  m.spots = {0.81, 0.88, 0.0075, 0.90};
  m.foreign_rates = {0.02, 0.00, -0.011, 0.075};
  m.domestic_rate = 0.01;
  m.vols = {0.095, 0.089, 0.071, 0.110};
  m.corr = {1.00, 0.87, 0.94, 0.86,
            0.87, 1.00, 0.77, 0.93,
            0.94, 0.77, 1.00, 0.96,
            0.86, 0.93, 0.96, 1.00};
  return m;
}

BasketOption reference_option() {
  BasketOption o;
  o.barriers = {0.50, 0.60, 0.0045, 0.55};
  o.weights = {0.20, 0.25, 0.45, 0.10};
  o.strike = 0.5;
  o.t0 = 0.0;
  o.T = 1.0;
  return o;
}

JumpModelParams reference_jump_model(double eps, double h) {
  JumpModelParams p;
  p.jump_factors = {0.10, 0.15, 0.05, 0.12};
  p.measure = SingularTempered{0.3, 1.2, 3.0, 1.5};
  p.eps = eps;
  p.h = h;
  return p;
}

namespace {

using Matrix = Eigen::MatrixXd;

Matrix to_matrix(const std::vector<double>& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (static_cast<std::size_t>(n * n) != v.size()) throw std::invalid_argument("fx: matrix is not square");
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  }
  return m;
}

Matrix clip_spectrum(const Matrix& m, double floor) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(floor);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

double min_eigenvalue(const std::vector<double>& sym) {
  const Eigen::SelfAdjointEigenSolver<Matrix> es(to_matrix(sym), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<double> nearest_correlation(const std::vector<double>& corr, double floor) {
  if (!(floor > 0.0 && floor < 1.0)) throw std::invalid_argument("fx: eigenvalue floor must lie in (0, 1)");
  const Matrix a = to_matrix(corr);
  const Eigen::Index n = a.rows();
  if (min_eigenvalue(corr) >= floor) return corr;

  Matrix y = a, x = a, correction = Matrix::Zero(n, n);
  for (int iter = 0; iter < 10000; ++iter) {
    const Matrix r = y - correction;
    x = clip_spectrum(r, floor);
    correction = x - r;
    const Matrix y_prev = y;
    y = x;
    y.diagonal().setOnes();
    if ((y - y_prev).norm() < 1e-14 * y.norm() && (y - x).norm() < 1e-12) break;
  }
  // Restore the floor exactly and rescale back to a unit diagonal.
  Matrix z = clip_spectrum(y, floor);
  const Eigen::VectorXd d = z.diagonal().cwiseSqrt().cwiseInverse();
  z = d.asDiagonal() * z * d.asDiagonal();
  z = 0.5 * (z + z.transpose());
  z.diagonal().setOnes();

  std::vector<double> out(corr.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) out[static_cast<std::size_t>(i * n + j)] = z(i, j);
  }
  return out;
}

std::vector<double> build_sigma(const std::vector<double>& vols, const std::vector<double>& corr) {
  const std::size_t n = vols.size();
  if (corr.size() != n * n) throw std::invalid_argument("fx: correlation matrix has the wrong size");
  std::vector<double> a(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = vols[i] * vols[j] * (i == j ? 1.0 : corr[i * n + j]);
  }
  return factorize_diffusion(a, n);
}

double exponential_compensator(double f, const SingularTempered& nu) {
  if (!(std::abs(f) < nu.mu)) throw std::domain_error("fx: jump factor must satisfy |f| < mu");
  const double cp = nu.c_plus, cm = nu.c_minus, mu = nu.mu, a = nu.alpha;
  const double tails = cm * std::exp(-f) / (mu + f) + cp * std::exp(f) / (mu - f) - (cp + cm) / mu;

  // Core: sum_{n>=2} (C+ + C- (-1)^n) f^n / (n! (n - alpha)).
  double core = 0.0;
  double power = f;  // f^n / n!
  for (int n = 2; n < 400; ++n) {
    power *= f / n;
    const double weight = (n % 2 == 0) ? cp + cm : cp - cm;
    const double term = weight * power / (n - a);
    core += term;
    if (std::abs(term) <= 1e-14 * std::abs(core) || power == 0.0) break;
  }
  return tails + core;
}

double martingale_drift(std::size_t i, const JumpModelParams& params, const MarketData& market) {
  const std::size_t n = market.n_ccy();
  if (i >= n || params.jump_factors.size() != n) throw std::invalid_argument("fx: currency index out of range");
  const std::vector<double> sigma = build_sigma(market.vols, market.corr);
  double quadratic = 0.0;
  for (std::size_t j = 0; j < n; ++j) quadratic += sigma[i * n + j] * sigma[i * n + j];
  return market.foreign_rates[i] - 0.5 * quadratic - exponential_compensator(params.jump_factors[i], params.measure);
}

std::vector<double> martingale_drifts(const JumpModelParams& params, const MarketData& market) {
  std::vector<double> b(market.n_ccy());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = martingale_drift(i, params, market);
  return b;
}

FxProblem::FxProblem(const MarketData& market, const BasketOption& option, const JumpModelParams& params)
    : PideProblem(market.n_ccy(), option.t0, option.T, Domain(WholeSpace{}), LevyMeasure(params.measure)),
      drift_(martingale_drifts(params, market)),
      sigma_(build_sigma(market.vols, market.corr)),
      jump_(params.jump_factors) {}

void FxProblem::drift(double, std::span<const double>, std::span<double> out) const {
  std::copy(drift_.begin(), drift_.end(), out.begin());
}

void FxProblem::diffusion(double, std::span<const double>, std::span<double> sigma) const {
  std::copy(sigma_.begin(), sigma_.end(), sigma.begin());
}

void FxProblem::jump_coefficient(double, std::span<const double>, std::span<double> out) const {
  std::copy(jump_.begin(), jump_.end(), out.begin());
}

SpotMonitor::SpotMonitor(const MarketData& market, double t0) : spots_(market.spots), t0_(t0) {
  carry_.resize(spots_.size());
  for (std::size_t i = 0; i < spots_.size(); ++i) carry_[i] = market.domestic_rate - market.foreign_rates[i];
}

void SpotMonitor::observe(double t, std::span<const double> x, std::span<double> out) const {
  for (std::size_t i = 0; i < spots_.size(); ++i) out[i] = spots_[i] * std::exp(carry_[i] * (t - t0_) + x[i]);
}

PriceReport price_report(const MarketData& market, const BasketOption& option, const JumpModelParams& params,
                         std::uint64_t paths, std::uint64_t seed, unsigned workers) {
  market.validate();
  option.validate(market.n_ccy());
  const std::size_t n = market.n_ccy();
  const FxProblem problem(market, option, params);
  const SpotMonitor monitor(market, option.t0);
  const double discount = std::exp(-market.domestic_rate * (option.T - option.t0));

  Payoffs payoffs;
  payoffs.outputs = 2 + n;
  payoffs.monitor = &monitor;
  payoffs.evaluate = [&](const PideProblem&, const WalkOutcome& w, std::span<double> out) {
    double basket = 0.0;
    bool knocked_in = false;
    for (std::size_t i = 0; i < n; ++i) {
      const double growth = std::exp(-market.foreign_rates[i] * (option.T - option.t0) + w.x_exit[i]);
      const double spot_T = market.spots[i] * growth / discount;
      basket += option.weights[i] * spot_T;
      knocked_in = knocked_in || w.coord_minima[i] < option.barriers[i];
      out[2 + i] = market.spots[i] * growth;
    }
    const double put = discount * std::max(option.strike - basket, 0.0);
    out[0] = knocked_in ? put : 0.0;
    out[1] = put;
  };

  McSettings settings;
  settings.eps = params.eps;
  settings.h = params.h;
  settings.paths = paths;
  settings.seed = seed;
  settings.workers = workers;
  const std::vector<double> x0(n, 0.0);
  const std::vector<McEstimate> est = estimate_many(problem, x0, settings, payoffs);

  PriceReport report;
  report.knock_in = est[0];
  report.vanilla = est[1];
  report.discounted_spots.assign(est.begin() + 2, est.end());
  return report;
}

McEstimate price_down_and_in_put(const MarketData& market, const BasketOption& option,
                                 const JumpModelParams& params, std::uint64_t paths, std::uint64_t seed,
                                 unsigned workers) {
  return price_report(market, option, params, paths, seed, workers).knock_in;
}

}  // namespace levywalk::fx
