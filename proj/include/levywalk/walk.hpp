#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "levywalk/levy.hpp"
#include "levywalk/model.hpp"
#include "levywalk/random.hpp"

namespace levywalk {

enum class ExitKind { Time, Space };

struct StepTime {
  bool jump_occurred;
  double theta;
};

namespace detail {

// jump_probability = 1 - exp(-lambda h), precomputed by callers that step often.
inline StepTime step_time(double jump_probability, double lambda, double h, double u1, double u2) noexcept {
  if (!(u1 < jump_probability)) return {false, h};
  const double theta = -std::log1p(-u2 * jump_probability) / lambda;
  return {true, std::min(theta, h)};
}

}  // namespace detail

/// Jump indicator ~ Bernoulli(1 - exp(-lambda h)) from u1; on a jump, theta
/// is drawn from the exponential density truncated to [0, h] by inverting
/// its CDF at u2. Without a jump theta = h.
StepTime sample_step_time(double lambda, double h, double u1, double u2);

/// Random inputs of one chain step.
struct StepDraw {
  bool jump_occurred = false;
  double theta = 0.0;
  std::vector<int> xi;  ///< d signs
  int eta = 1;
  std::optional<double> jump_size;
};

/// (time, X, Y, Z) and the step index.
struct ChainState {
  double time = 0.0;
  std::vector<double> x;
  double y = 1.0;
  double z = 0.0;
  std::size_t step = 0;
};

/// One step of the weak Euler scheme with coefficients frozen at (time, x):
///   X' = x + theta (b - F gamma) + sqrt(theta) (sigma xi + F beta eta) [+ F J]
///   Y' = y (1 + theta c),  Z' = z + theta g y.
ChainState euler_step(const ChainState& state, const StepDraw& draw, const PideProblem& problem,
                      const CutoffQuantities& cut);

/// Per-step observable of the chain (e.g. spot prices for barrier checks).
/// The chain records the running minimum of every component.
class PathMonitor {
 public:
  virtual ~PathMonitor() = default;
  virtual std::size_t size() const = 0;
  virtual void observe(double t, std::span<const double> x, std::span<double> out) const = 0;
};

struct WalkOutcome {
  double exit_time = 0.0;  ///< clamped to T on a time exit
  std::vector<double> x_exit;
  double y_exit = 1.0;
  double z_exit = 0.0;
  std::size_t steps = 0;
  ExitKind exit_kind = ExitKind::Time;
  std::vector<double> coord_minima;  ///< empty without a monitor
};

/// Reusable chain simulator. Holds scratch buffers, so one instance per
/// thread; the referenced problem and monitor must outlive it.
class ChainRunner {
 public:
  ChainRunner(const PideProblem& problem, const CutoffQuantities& cut, double h,
              const PathMonitor* monitor = nullptr);

  /// Runs one chain from (t0, x0). Throws std::invalid_argument when x0 is
  /// outside the domain and std::logic_error if Y leaves its a-priori bound.
  void run(std::span<const double> x0, RandomStream& stream, WalkOutcome& out);

  double h() const noexcept { return h_; }
  double jump_probability() const noexcept { return p_jump_; }
  /// exp(max(c_bar, 0) (T - t0 + h)), or +inf when the problem has no bound.
  double y_bound() const noexcept { return y_bound_; }

 private:
  const PideProblem& problem_;
  CutoffQuantities cut_;
  double h_;
  const PathMonitor* monitor_;
  JumpSampler sampler_;
  double p_jump_;
  double sqrt_h_;
  double y_bound_;

  std::vector<double> x_, x_next_, b_, sigma_, f_, observed_;
  std::vector<int> xi_;
};

WalkOutcome run_chain(const PideProblem& problem, const CutoffQuantities& cut, double h,
                      std::span<const double> x0, RandomStream& stream, const PathMonitor* monitor = nullptr);

}  // namespace levywalk
