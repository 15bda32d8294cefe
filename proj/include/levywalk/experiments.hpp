#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "levywalk/config.hpp"
#include "levywalk/mc.hpp"
#include "levywalk/theory.hpp"

namespace levywalk {

/// Least-squares line through (log x, log y). Points with non-positive
/// coordinates are skipped; fewer than two points leave slope NaN.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

LogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

struct NonsingularRow {
  double h;
  McEstimate est;
  double error;
};

struct NonsingularResult {
  std::vector<NonsingularRow> rows;
  LogFit error_vs_h;
};

struct SingularRow {
  double eps;
  double h;
  std::string h_rule;
  McEstimate est;
  double error;
  double lambda_eps;
  double gamma_eps;
  double cost;  ///< horizon * lambda / (1 - e^{-lambda h})
  BiasProfile profile;
};

struct SingularResult {
  std::vector<SingularRow> rows;
  /// One pair of fits per step-cap rule, in h_grid order.
  std::vector<std::string> rules;
  std::vector<LogFit> error_vs_eps;
  std::vector<LogFit> error_vs_cost;
};

struct FxRow {
  double eps;
  double h;
  std::string h_rule;
  fx::PriceReport report;
};

struct FxResult {
  std::vector<FxRow> rows;
};

NonsingularResult run_nonsingular(const ExperimentConfig& config);
/// Singular ball problem over eps x h_grid.
SingularResult run_singular(const ExperimentConfig& config);
/// Same runs as run_singular; the CSV additionally carries the bias profile.
SingularResult sweep(const ExperimentConfig& config);
FxResult run_fx(const ExperimentConfig& config);

/// CSV writers. Numbers use 17 significant digits; footers start with '#'.
void write_csv(std::ostream& out, const NonsingularResult& r);
void write_csv(std::ostream& out, const SingularResult& r, bool with_profile);
void write_csv(std::ostream& out, const FxResult& r, const ExperimentConfig& config);

/// Runs the configured experiment and writes its CSV.
void run_experiment(const ExperimentConfig& config, std::ostream& out);

std::string format_number(double v);

}  // namespace levywalk
