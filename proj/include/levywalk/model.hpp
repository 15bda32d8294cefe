#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "levywalk/levy.hpp"

namespace levywalk {

/// Open ball {x : |x - center| < radius}.
struct Ball {
  std::vector<double> center;
  double radius = 1.0;
};

/// All of R^d: the Cauchy problem, where chains only stop on time.
struct WholeSpace {};

class Domain {
 public:
  Domain(Ball ball);
  Domain(WholeSpace) {}

  static Domain unit_ball(std::size_t dim) { return Domain(Ball{std::vector<double>(dim, 0.0), 1.0}); }

  bool bounded() const noexcept { return std::holds_alternative<Ball>(shape_); }
  bool contains(std::span<const double> x) const noexcept;
  const std::variant<Ball, WholeSpace>& shape() const noexcept { return shape_; }

 private:
  std::variant<Ball, WholeSpace> shape_ = WholeSpace{};
};

inline bool contains(const Domain& domain, std::span<const double> x) noexcept { return domain.contains(x); }

/// Dirichlet/Cauchy problem for
///   u_t + L u + c u + g = 0 in [t0, T) x G,  u = phi on the complement,
/// with L the generator of dX = b dt + sigma dw + F z N^(dz, dt) for a scalar
/// jump noise z ~ nu. Coefficient hooks must be pure; implementations are
/// evaluated concurrently.
class PideProblem {
 public:
  PideProblem(std::size_t dim, double t0, double T, Domain domain, LevyMeasure measure);
  virtual ~PideProblem() = default;

  std::size_t dim() const noexcept { return dim_; }
  double initial_time() const noexcept { return t0_; }
  double terminal_time() const noexcept { return T_; }
  double horizon() const noexcept { return T_ - t0_; }
  const Domain& domain() const noexcept { return domain_; }
  const LevyMeasure& measure() const noexcept { return measure_; }

  /// b(t, x).
  virtual void drift(double t, std::span<const double> x, std::span<double> out) const = 0;
  /// sigma(t, x) as a row-major d x d matrix with sigma sigma^T = a.
  virtual void diffusion(double t, std::span<const double> x, std::span<double> sigma) const = 0;
  /// F(t, x), one column because the jump noise is scalar.
  virtual void jump_coefficient(double t, std::span<const double> x, std::span<double> out) const = 0;
  /// c(t, x).
  virtual double potential(double t, std::span<const double> x) const = 0;
  /// g(t, x).
  virtual double source(double t, std::span<const double> x) const = 0;
  /// phi(t, x), used on exit from the cylinder.
  virtual double boundary_value(double t, std::span<const double> x) const = 0;

  virtual std::optional<double> exact_solution(double, std::span<const double>) const { return std::nullopt; }
  /// Maximum of c over the closed cylinder, when known. Enables the per-step
  /// bound on the multiplicative functional.
  virtual std::optional<double> potential_bound() const { return std::nullopt; }

  /// a(t, x) = sigma sigma^T, row-major.
  virtual void diffusion_matrix(double t, std::span<const double> x, std::span<double> out) const;

 private:
  std::size_t dim_;
  double t0_;
  double T_;
  Domain domain_;
  LevyMeasure measure_;
};

/// Lower-triangular sigma with sigma sigma^T = a for a symmetric positive
/// definite row-major d x d matrix. Throws std::domain_error otherwise.
std::vector<double> factorize_diffusion(std::span<const double> a, std::size_t dim);

/// Problem assembled from plain callables, for user-defined coefficients.
class CallbackProblem final : public PideProblem {
 public:
  using VectorField = std::function<void(double, std::span<const double>, std::span<double>)>;
  using ScalarField = std::function<double(double, std::span<const double>)>;

  struct Coefficients {
    VectorField drift;
    VectorField diffusion;
    VectorField jump_coefficient;
    ScalarField potential;
    ScalarField source;
    ScalarField boundary_value;
    ScalarField exact_solution;          // optional
    std::optional<double> potential_bound;
  };

  CallbackProblem(std::size_t dim, double t0, double T, Domain domain, LevyMeasure measure,
                  Coefficients coefficients);

  void drift(double t, std::span<const double> x, std::span<double> out) const override;
  void diffusion(double t, std::span<const double> x, std::span<double> sigma) const override;
  void jump_coefficient(double t, std::span<const double> x, std::span<double> out) const override;
  double potential(double t, std::span<const double> x) const override;
  double source(double t, std::span<const double> x) const override;
  double boundary_value(double t, std::span<const double> x) const override;
  std::optional<double> exact_solution(double t, std::span<const double> x) const override;
  std::optional<double> potential_bound() const override { return k_.potential_bound; }

 private:
  Coefficients k_;
};

/// The two built-in test problems on the open unit ball of R^3 with an
/// explicitly known solution
///   u(t, x) = (1 - exp(-(T - t)) / 2) (1.21 - x1^4 - x2^4).
class BallTestProblem final : public PideProblem {
 public:
  enum class Kind { Nonsingular, Singular };

  BallTestProblem(Kind kind, double f, LevyMeasure measure, double T);

  Kind kind() const noexcept { return kind_; }
  double jump_factor() const noexcept { return f_; }

  void drift(double t, std::span<const double> x, std::span<double> out) const override;
  void diffusion(double t, std::span<const double> x, std::span<double> sigma) const override;
  void jump_coefficient(double t, std::span<const double> x, std::span<double> out) const override;
  double potential(double, std::span<const double>) const override { return 0.0; }
  double source(double t, std::span<const double> x) const override;
  double boundary_value(double t, std::span<const double> x) const override;
  std::optional<double> exact_solution(double t, std::span<const double> x) const override;
  std::optional<double> potential_bound() const override { return 0.0; }

 private:
  double time_factor(double t) const noexcept;

  Kind kind_;
  double f_;
  double drift_;  // identical in every coordinate
  // Jump-generated polynomial blocks of g: cubic, quadratic, linear, constant.
  double k_cubic_, k_quad_, k_lin_, k_const_;
};

/// Jump-diffusion example: ExponentialTails measure, finite activity.
BallTestProblem example_nonsingular(double f, double c_plus, double c_minus, double mu, double T);

/// Infinite-activity example: SingularTempered measure.
BallTestProblem example_singular(double f, double c_plus, double c_minus, double mu, double alpha, double T);

}  // namespace levywalk
