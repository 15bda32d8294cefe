#include "levywalk/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "levywalk/levy.hpp"
#include "levywalk/model.hpp"

namespace levywalk {
namespace {

McSettings settings_for(const ExperimentConfig& c, double eps, double h) {
  McSettings s;
  s.eps = eps;
  s.h = h;
  s.paths = c.m_paths;
  s.seed = c.seed;
  s.workers = c.workers;
  return s;
}

void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
  out << '\n';
}

void write_fit(std::ostream& out, const std::string& name, const LogFit& fit) {
  write_row(out, {"#fit", name, "slope", format_number(fit.slope), "intercept", format_number(fit.intercept), "points",
                  std::to_string(fit.points)});
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

LogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("fit_loglog: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  LogFit fit;
  fit.points = n;
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) {
    fit.slope = fit.intercept = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  return fit;
}

NonsingularResult run_nonsingular(const ExperimentConfig& c) {
  c.validate();
  const BallTestProblem problem = example_nonsingular(c.f, c.c_plus, c.c_minus, c.mu, c.T);
  const double exact = *problem.exact_solution(problem.initial_time(), c.x0);
  NonsingularResult r;
  std::vector<double> hs, errors;
  for (const StepCap& cap : c.h_grid) {
    const double h = cap.resolve(0.0, 0.0, problem.horizon());
    const McEstimate est = estimate(problem, c.x0, settings_for(c, 0.0, h));
    r.rows.push_back({h, est, std::abs(est.u_hat - exact)});
    hs.push_back(h);
    errors.push_back(r.rows.back().error);
  }
  r.error_vs_h = fit_loglog(hs, errors);
  return r;
}

SingularResult run_singular(const ExperimentConfig& c) {
  c.validate();
  const BallTestProblem problem = example_singular(c.f, c.c_plus, c.c_minus, c.mu, c.alpha, c.T);
  const double exact = *problem.exact_solution(problem.initial_time(), c.x0);
  SingularResult r;
  for (const StepCap& cap : c.h_grid) {
    std::vector<double> eps_used, errors, steps;
    for (double eps : c.eps_grid) {
      const double h = cap.resolve(eps, c.alpha, problem.horizon());
      const CutoffQuantities q = cutoff_quantities(problem.measure(), eps);
      SingularRow row;
      row.eps = eps;
      row.h = h;
      row.h_rule = cap.label();
      row.est = estimate(problem, c.x0, settings_for(c, eps, h));
      row.error = std::abs(row.est.u_hat - exact);
      row.lambda_eps = q.lambda;
      row.gamma_eps = q.gamma;
      row.cost = problem.horizon() * cost(q.lambda, h);
      row.profile = bias_profile(problem.measure(), eps, h);
      eps_used.push_back(eps);
      errors.push_back(row.error);
      steps.push_back(row.est.steps_mean);
      r.rows.push_back(std::move(row));
    }
    r.rules.push_back(cap.label() + (cap.kind == StepCap::Kind::Fixed ? "=" + format_number(cap.value) : ""));
    r.error_vs_eps.push_back(fit_loglog(eps_used, errors));
    r.error_vs_cost.push_back(fit_loglog(steps, errors));
  }
  return r;
}

SingularResult sweep(const ExperimentConfig& c) { return run_singular(c); }

FxResult run_fx(const ExperimentConfig& c) {
  c.validate();
  FxResult r;
  const fx::MarketData market = c.effective_market();
  for (const StepCap& cap : c.h_grid) {
    for (double eps : c.eps_grid) {
      fx::JumpModelParams params;
      params.jump_factors = c.jump_factors;
      params.measure = SingularTempered{c.c_plus, c.c_minus, c.mu, c.alpha};
      params.eps = eps;
      params.h = cap.resolve(eps, c.alpha, c.option.T - c.option.t0);
      r.rows.push_back({eps, params.h, cap.label(),
                        fx::price_report(market, c.option, params, c.m_paths, c.seed, c.workers)});
    }
  }
  return r;
}

void write_csv(std::ostream& out, const NonsingularResult& r) {
  write_row(out, {"h", "u_hat", "half_width", "error", "steps_mean", "steps_half_width"});
  for (const auto& row : r.rows) {
    write_row(out, {format_number(row.h), format_number(row.est.u_hat), format_number(row.est.half_width),
                    format_number(row.error), format_number(row.est.steps_mean),
                    format_number(row.est.steps_half_width)});
  }
  write_fit(out, "error_vs_h", r.error_vs_h);
}

void write_csv(std::ostream& out, const SingularResult& r, bool with_profile) {
  std::vector<std::string> header{"eps",       "h",          "h_rule",    "u_hat",     "half_width",
                                  "error",     "lambda_eps", "gamma_eps", "steps_mean", "cost"};
  if (with_profile) {
    for (const char* col : {"bias_restricted", "bias_boundary", "bias_smalljump", "bias_total"}) header.push_back(col);
  }
  write_row(out, header);
  for (const auto& row : r.rows) {
    std::vector<std::string> cells{format_number(row.eps),        format_number(row.h),
                                   row.h_rule,                    format_number(row.est.u_hat),
                                   format_number(row.est.half_width), format_number(row.error),
                                   format_number(row.lambda_eps), format_number(row.gamma_eps),
                                   format_number(row.est.steps_mean), format_number(row.cost)};
    if (with_profile) {
      cells.push_back(format_number(row.profile.term_restricted));
      cells.push_back(format_number(row.profile.term_boundary));
      cells.push_back(format_number(row.profile.term_smalljump));
      cells.push_back(format_number(row.profile.total()));
    }
    write_row(out, cells);
  }
  for (std::size_t i = 0; i < r.rules.size(); ++i) {
    write_fit(out, "error_vs_eps[" + r.rules[i] + "]", r.error_vs_eps[i]);
    write_fit(out, "error_vs_cost[" + r.rules[i] + "]", r.error_vs_cost[i]);
  }
}

void write_csv(std::ostream& out, const FxResult& r, const ExperimentConfig& c) {
  write_row(out, {"eps", "h", "h_rule", "price", "half_width", "vanilla", "vanilla_half_width", "steps_mean"});
  for (const auto& row : r.rows) {
    const auto& rep = row.report;
    write_row(out, {format_number(row.eps), format_number(row.h), row.h_rule, format_number(rep.knock_in.u_hat),
                    format_number(rep.knock_in.half_width), format_number(rep.vanilla.u_hat),
                    format_number(rep.vanilla.half_width), format_number(rep.knock_in.steps_mean)});
  }
  for (const auto& row : r.rows) {
    for (std::size_t i = 0; i < row.report.discounted_spots.size(); ++i) {
      const McEstimate& s = row.report.discounted_spots[i];
      const double spot = c.market.spots[i];
      const double z = s.half_width > 0.0 ? std::abs(s.u_hat - spot) / s.half_width : 0.0;
      write_row(out, {"#martingale", "eps", format_number(row.eps), "h_rule", row.h_rule, "ccy", std::to_string(i),
                      "mean", format_number(s.u_hat), "half_width", format_number(s.half_width), "spot",
                      format_number(spot), "deviation_over_half_width", format_number(z)});
    }
  }
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    if (a.h_rule != b.h_rule) continue;
    const double diff = std::abs(a.report.knock_in.u_hat - b.report.knock_in.u_hat);
    const double band = std::hypot(a.report.knock_in.half_width, b.report.knock_in.half_width);
    write_row(out, {"#stability", "h_rule", b.h_rule, "eps_pair", format_number(a.eps), format_number(b.eps),
                    "price_difference", format_number(diff), "combined_half_width", format_number(band)});
  }
}

void run_experiment(const ExperimentConfig& c, std::ostream& out) {
  switch (c.experiment) {
    case Experiment::Nonsingular:
      write_csv(out, run_nonsingular(c));
      return;
    case Experiment::Singular:
      write_csv(out, run_singular(c), false);
      return;
    case Experiment::Sweep:
      write_csv(out, sweep(c), true);
      return;
    case Experiment::Fx:
      write_csv(out, run_fx(c), c);
      return;
  }
}

}  // namespace levywalk
