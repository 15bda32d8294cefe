#include "levywalk/model.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Core>

namespace levywalk {

Domain::Domain(Ball ball) : shape_(std::move(ball)) {
  const auto& b = std::get<Ball>(shape_);
  if (!(b.radius > 0.0)) throw std::invalid_argument("domain: ball radius must be positive");
}

bool Domain::contains(std::span<const double> x) const noexcept {
  const auto* ball = std::get_if<Ball>(&shape_);
  if (ball == nullptr) return true;
  double r2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - ball->center[i];
    r2 += d * d;
  }
  return r2 < ball->radius * ball->radius;
}

PideProblem::PideProblem(std::size_t dim, double t0, double T, Domain domain, LevyMeasure measure)
    : dim_(dim), t0_(t0), T_(T), domain_(std::move(domain)), measure_(std::move(measure)) {
  if (dim == 0) throw std::invalid_argument("problem: dimension must be positive");
  if (!(T > t0)) throw std::invalid_argument("problem: terminal time must exceed initial time");
  if (const auto* ball = std::get_if<Ball>(&domain_.shape()); ball && ball->center.size() != dim) {
    throw std::invalid_argument("problem: ball centre has the wrong dimension");
  }
}

void PideProblem::diffusion_matrix(double t, std::span<const double> x, std::span<double> out) const {
  const std::size_t d = dim();
  std::vector<double> s(d * d);
  diffusion(t, x, s);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) acc += s[i * d + k] * s[j * d + k];
      out[i * d + j] = acc;
    }
  }
}

std::vector<double> factorize_diffusion(std::span<const double> a, std::size_t dim) {
  if (a.size() != dim * dim) throw std::invalid_argument("factorize_diffusion: size mismatch");
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMatrix> m(a.data(), static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  if (!m.isApprox(m.transpose(), 1e-14)) throw std::domain_error("factorize_diffusion: matrix is not symmetric");
  const Eigen::LLT<RowMatrix> llt(m);
  if (llt.info() != Eigen::Success) throw std::domain_error("factorize_diffusion: matrix is not positive definite");
  RowMatrix lower = llt.matrixL();
  return {lower.data(), lower.data() + lower.size()};
}

CallbackProblem::CallbackProblem(std::size_t dim, double t0, double T, Domain domain, LevyMeasure measure,
                                 Coefficients coefficients)
    : PideProblem(dim, t0, T, std::move(domain), std::move(measure)), k_(std::move(coefficients)) {
  if (!k_.drift || !k_.diffusion || !k_.jump_coefficient || !k_.potential || !k_.source || !k_.boundary_value) {
    throw std::invalid_argument("problem: every coefficient except the exact solution is required");
  }
}

void CallbackProblem::drift(double t, std::span<const double> x, std::span<double> out) const { k_.drift(t, x, out); }
void CallbackProblem::diffusion(double t, std::span<const double> x, std::span<double> sigma) const {
  k_.diffusion(t, x, sigma);
}
void CallbackProblem::jump_coefficient(double t, std::span<const double> x, std::span<double> out) const {
  k_.jump_coefficient(t, x, out);
}
double CallbackProblem::potential(double t, std::span<const double> x) const { return k_.potential(t, x); }
double CallbackProblem::source(double t, std::span<const double> x) const { return k_.source(t, x); }
double CallbackProblem::boundary_value(double t, std::span<const double> x) const {
  return k_.boundary_value(t, x);
}
std::optional<double> CallbackProblem::exact_solution(double t, std::span<const double> x) const {
  if (!k_.exact_solution) return std::nullopt;
  return k_.exact_solution(t, x);
}

// The printed solution has exp(T - t); the tables are only reproduced by
// exp(-(T - t)), which is also the sign that makes g consistent with u.
BallTestProblem::BallTestProblem(Kind kind, double f, LevyMeasure measure, double T)
    : PideProblem(3, 0.0, T, Domain::unit_ball(3), std::move(measure)), kind_(kind), f_(f) {
  const double cp = this->measure().c_plus();
  const double cm = this->measure().c_minus();
  const double odd = cp - cm;
  const double even = cp + cm;
  if (kind == Kind::Nonsingular) {
    const auto* e = std::get_if<ExponentialTails>(&this->measure().params());
    if (e == nullptr) throw std::invalid_argument("nonsingular example needs an ExponentialTails measure");
    const double mu = e->mu;
    // g carries the uncompensated jump integral; b = F * int_{|z|<=1} z nu(dz)
    // expresses the same generator in compensated form.
    drift_ = f * drift_compensator(this->measure(), 0.0);
    k_cubic_ = odd * 4.0 * f / (mu * mu);
    k_quad_ = even * 12.0 * f * f / std::pow(mu, 3);
    k_lin_ = odd * 24.0 * std::pow(f, 3) / std::pow(mu, 4);
    k_const_ = even * 48.0 * std::pow(f, 4) / std::pow(mu, 5);
  } else {
    const auto* s = std::get_if<SingularTempered>(&this->measure().params());
    if (s == nullptr) throw std::invalid_argument("singular example needs a SingularTempered measure");
    const double mu = s->mu;
    const double a = s->alpha;
    const double m2 = mu * mu, m3 = m2 * mu, m4 = m3 * mu, m5 = m4 * mu;
    drift_ = 0.0;
    k_cubic_ = odd * f * (4.0 / mu + 4.0 / m2);
    k_quad_ = even * f * f * (6.0 / (2.0 - a) + 6.0 / mu + 12.0 / m2 + 12.0 / m3);
    k_lin_ = odd * std::pow(f, 3) * (4.0 / (3.0 - a) + 4.0 / mu + 12.0 / m2 + 24.0 / m3 + 24.0 / m4);
    k_const_ = even * std::pow(f, 4) *
               (2.0 / (4.0 - a) + 2.0 / mu + 8.0 / m2 + 24.0 / m3 + 48.0 / m4 + 48.0 / m5);
  }
}

double BallTestProblem::time_factor(double t) const noexcept {
  return 1.0 - 0.5 * std::exp(t - terminal_time());
}

void BallTestProblem::drift(double, std::span<const double>, std::span<double> out) const {
  out[0] = out[1] = out[2] = drift_;
}

void BallTestProblem::diffusion(double, std::span<const double> x, std::span<double> sigma) const {
  for (auto& v : sigma) v = 0.0;
  sigma[0] = std::sqrt(1.21 - x[1] * x[1] - x[2] * x[2]);
  sigma[4] = 1.0;
  sigma[8] = 1.0;
}

void BallTestProblem::jump_coefficient(double, std::span<const double>, std::span<double> out) const {
  out[0] = out[1] = out[2] = f_;
}

double BallTestProblem::source(double t, std::span<const double> x) const {
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  const double e = std::exp(t - terminal_time());
  const double s = 1.0 - 0.5 * e;
  const double x1s = x1 * x1, x2s = x2 * x2;
  const double w = 1.21 - x1s * x1s - x2s * x2s;
  const double diffusive = 6.0 * (x1s * (1.21 - x2s - x3 * x3) + x2s);
  const double jumps = k_cubic_ * (x1s * x1 + x2s * x2) + k_quad_ * (x1s + x2s) + k_lin_ * (x1 + x2) + k_const_;
  return 0.5 * e * w + s * (diffusive + jumps);
}

double BallTestProblem::boundary_value(double t, std::span<const double> x) const {
  const double x1s = x[0] * x[0], x2s = x[1] * x[1];
  return time_factor(t) * (1.21 - x1s * x1s - x2s * x2s);
}

std::optional<double> BallTestProblem::exact_solution(double t, std::span<const double> x) const {
  return boundary_value(t, x);
}

BallTestProblem example_nonsingular(double f, double c_plus, double c_minus, double mu, double T) {
  return BallTestProblem(BallTestProblem::Kind::Nonsingular, f, LevyMeasure(ExponentialTails{c_plus, c_minus, mu}),
                         T);
}

BallTestProblem example_singular(double f, double c_plus, double c_minus, double mu, double alpha, double T) {
  return BallTestProblem(BallTestProblem::Kind::Singular, f,
                         LevyMeasure(SingularTempered{c_plus, c_minus, mu, alpha}), T);
}

}  // namespace levywalk
