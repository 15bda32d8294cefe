#include "levywalk/walk.hpp"

#include <limits>
#include <stdexcept>

namespace levywalk {
namespace {

struct Coefficients {
  std::span<double> b;
  std::span<double> sigma;
  std::span<double> f;
};

// Shared by euler_step and ChainRunner so both follow the same arithmetic.
void advance(const PideProblem& problem, const CutoffQuantities& cut, double t, std::span<const double> x,
             double y, double z, double theta, double sqrt_theta, std::span<const int> xi, int eta,
             std::optional<double> jump, Coefficients k, std::span<double> x_out, double& y_out, double& z_out) {
  const std::size_t d = problem.dim();
  problem.drift(t, x, k.b);
  problem.diffusion(t, x, k.sigma);
  problem.jump_coefficient(t, x, k.f);
  const double c = problem.potential(t, x);
  const double g = problem.source(t, x);

  for (std::size_t i = 0; i < d; ++i) {
    double noise = k.f[i] * cut.beta * eta;
    for (std::size_t j = 0; j < d; ++j) noise += k.sigma[i * d + j] * xi[j];
    double next = x[i] + theta * (k.b[i] - k.f[i] * cut.gamma) + sqrt_theta * noise;
    if (jump) next += k.f[i] * *jump;
    x_out[i] = next;
  }
  z_out = z + theta * g * y;
  y_out = y * (1.0 + theta * c);
}

}  // namespace

StepTime sample_step_time(double lambda, double h, double u1, double u2) {
  if (!(lambda > 0.0) || !(h > 0.0)) throw std::invalid_argument("walk: lambda and h must be positive");
  return detail::step_time(-std::expm1(-lambda * h), lambda, h, u1, u2);
}

ChainState euler_step(const ChainState& state, const StepDraw& draw, const PideProblem& problem,
                      const CutoffQuantities& cut) {
  const std::size_t d = problem.dim();
  if (state.x.size() != d || draw.xi.size() != d) throw std::invalid_argument("walk: dimension mismatch");
  if (draw.jump_occurred != draw.jump_size.has_value()) {
    throw std::invalid_argument("walk: jump size must be present exactly when a jump occurs");
  }
  std::vector<double> b(d), sigma(d * d), f(d);
  ChainState next;
  next.x.resize(d);
  advance(problem, cut, state.time, state.x, state.y, state.z, draw.theta, std::sqrt(draw.theta), draw.xi,
          draw.eta, draw.jump_size, {b, sigma, f}, next.x, next.y, next.z);
  next.time = state.time + draw.theta;
  next.step = state.step + 1;
  return next;
}

ChainRunner::ChainRunner(const PideProblem& problem, const CutoffQuantities& cut, double h,
                         const PathMonitor* monitor)
    : problem_(problem),
      cut_(cut),
      h_(h),
      monitor_(monitor),
      sampler_(problem.measure(), cut.eps),
      p_jump_(-std::expm1(-cut.lambda * h)),
      sqrt_h_(std::sqrt(h)),
      y_bound_(std::numeric_limits<double>::infinity()) {
  if (!(h > 0.0)) throw std::invalid_argument("walk: step cap h must be positive");
  if (!(cut.lambda > 0.0)) throw std::invalid_argument("walk: jump intensity must be positive");
  if (const auto c_bar = problem.potential_bound()) {
    y_bound_ = std::exp(std::max(*c_bar, 0.0) * (problem.horizon() + h));
  }
  const std::size_t d = problem.dim();
  x_.resize(d);
  x_next_.resize(d);
  b_.resize(d);
  sigma_.resize(d * d);
  f_.resize(d);
  xi_.resize(d);
  if (monitor_) observed_.resize(monitor_->size());
}

void ChainRunner::run(std::span<const double> x0, RandomStream& stream, WalkOutcome& out) {
  const std::size_t d = problem_.dim();
  if (x0.size() != d) throw std::invalid_argument("walk: starting point has the wrong dimension");
  const Domain& domain = problem_.domain();
  if (!domain.contains(x0)) throw std::invalid_argument("walk: starting point must lie inside the domain");

  const double T = problem_.terminal_time();
  double t = problem_.initial_time();
  double y = 1.0;
  double z = 0.0;
  std::size_t k = 0;
  std::copy(x0.begin(), x0.end(), x_.begin());

  if (monitor_) {
    out.coord_minima.resize(observed_.size());
    monitor_->observe(t, x_, out.coord_minima);
  } else {
    out.coord_minima.clear();
  }

  for (;;) {
    for (auto& s : xi_) s = stream.sign();
    const int eta = stream.sign();
    const double u1 = stream.uniform();
    StepTime step{false, h_};
    std::optional<double> jump;
    if (u1 < p_jump_) {
      step = detail::step_time(p_jump_, cut_.lambda, h_, u1, stream.uniform());
      jump = sampler_(stream.uniform());
    }
    const double sqrt_theta = step.jump_occurred ? std::sqrt(step.theta) : sqrt_h_;

    double y_next, z_next;
    advance(problem_, cut_, t, x_, y, z, step.theta, sqrt_theta, xi_, eta, jump, {b_, sigma_, f_}, x_next_,
            y_next, z_next);
    t += step.theta;
    y = y_next;
    z = z_next;
    ++k;
    if (!(y <= y_bound_ * (1.0 + 1e-12))) throw std::logic_error("walk: multiplicative functional exceeded its bound");

    const bool time_exit = t >= T;
    const bool space_exit = !domain.contains(x_next_);
    if (monitor_) {
      monitor_->observe(time_exit ? T : t, x_next_, observed_);
      for (std::size_t i = 0; i < observed_.size(); ++i) {
        out.coord_minima[i] = std::min(out.coord_minima[i], observed_[i]);
      }
    }
    x_.swap(x_next_);
    if (time_exit || space_exit) {
      out.exit_time = time_exit ? T : t;
      out.exit_kind = time_exit ? ExitKind::Time : ExitKind::Space;
      out.x_exit.assign(x_.begin(), x_.end());
      out.y_exit = y;
      out.z_exit = z;
      out.steps = k;
      return;
    }
  }
}

WalkOutcome run_chain(const PideProblem& problem, const CutoffQuantities& cut, double h,
                      std::span<const double> x0, RandomStream& stream, const PathMonitor* monitor) {
  ChainRunner runner(problem, cut, h, monitor);
  WalkOutcome out;
  runner.run(x0, stream, out);
  return out;
}

}  // namespace levywalk
