#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "levywalk/fx.hpp"

namespace levywalk {

/// Bad config text or values. The CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSeed = 20240917;

/// Step-cap rule of one grid entry.
struct StepCap {
  enum class Kind { Fixed, Horizon, Optimal };
  Kind kind = Kind::Horizon;
  double value = 0.0;  ///< used by Fixed only

  static StepCap parse(std::string_view token);
  std::string label() const;
  double resolve(double eps, double alpha, double horizon) const;
};

enum class Experiment { Nonsingular, Singular, Fx, Sweep };

Experiment parse_experiment(std::string_view name);
std::string_view experiment_name(Experiment e);

struct ExperimentConfig {
  Experiment experiment = Experiment::Nonsingular;
  std::uint64_t m_paths = 0;
  std::uint64_t seed = kDefaultSeed;
  unsigned workers = 1;
  std::string output;

  // Ball problems.
  double c_plus = 0.0;
  double c_minus = 0.0;
  double mu = 0.0;
  double alpha = 0.0;
  double f = 0.0;
  double T = 1.0;
  std::vector<double> x0;

  std::vector<double> eps_grid;
  std::vector<StepCap> h_grid;

  // FX.
  fx::MarketData market;
  fx::BasketOption option;
  std::vector<double> jump_factors;
  /// Replace an indefinite correlation matrix by the nearest one whose
  /// eigenvalues are at least corr_floor (key `corr_repair = nearest|none`).
  bool corr_repair = true;
  double corr_floor = 1e-3;

  /// Market data the pricer actually uses, after any correlation repair.
  fx::MarketData effective_market() const;

  /// Throws ConfigError when the grids are empty, m_paths < 2, or a value is
  /// out of range for the experiment.
  void validate() const;
};

/// Built-in parameters for an experiment, before any file overrides.
ExperimentConfig default_config(Experiment e);

/// Grammar, one entry per line:
///   line  := blank | '#' comment | key '=' value [ '#' comment ]
///   value := item (',' item)*
/// Keys are case sensitive; an unknown or repeated key is an error. If the
/// text sets `experiment`, it must agree with `experiment` given here.
ExperimentConfig parse_config(std::string_view text, Experiment experiment, std::string_view source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path, Experiment experiment);

}  // namespace levywalk
