#include "levywalk/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "levywalk/theory.hpp"

namespace levywalk {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_items(std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  for (;;) {
    const auto comma = value.find(',', start);
    items.push_back(trim(value.substr(start, comma == std::string_view::npos ? comma : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

double parse_double(std::string_view token, std::string_view key) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ConfigError("config: '" + std::string(key) + "' expects a number, got '" + std::string(token) + "'");
  }
  return v;
}

std::uint64_t parse_count(std::string_view token, std::string_view key) {
  // Accept 4e6 style counts as long as they are whole numbers.
  const double v = parse_double(token, key);
  if (v < 0.0 || v != std::floor(v) || v > 1e18) {
    throw ConfigError("config: '" + std::string(key) + "' expects a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

struct Entry {
  std::string value;
  int line;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  const Entry* take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    taken_.push_back(it->first);
    return &it->second;
  }

  void number(const std::string& key, double& out) {
    if (const Entry* e = take(key)) out = parse_double(one(key, *e), key);
  }

  void count(const std::string& key, std::uint64_t& out) {
    if (const Entry* e = take(key)) out = parse_count(one(key, *e), key);
  }

  void numbers(const std::string& key, std::vector<double>& out) {
    if (const Entry* e = take(key)) {
      out.clear();
      for (auto item : split_items(e->value)) out.push_back(parse_double(item, key));
    }
  }

  void text(const std::string& key, std::string& out) {
    if (const Entry* e = take(key)) out = std::string(one(key, *e));
  }

  void reject_unknown() const {
    for (const auto& [key, entry] : entries_) {
      if (std::find(taken_.begin(), taken_.end(), key) == taken_.end()) {
        throw ConfigError(source_ + ":" + std::to_string(entry.line) + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  std::string_view one(const std::string& key, const Entry& e) const {
    const auto items = split_items(e.value);
    if (items.size() != 1) {
      throw ConfigError(source_ + ":" + std::to_string(e.line) + ": '" + key + "' takes a single value");
    }
    return items.front();
  }

  std::map<std::string, Entry> entries_;
  std::vector<std::string> taken_;
  std::string source_;
};

std::vector<double> expand_lower_triangle(const std::vector<double>& lower, std::size_t n) {
  if (lower.size() != n * (n - 1) / 2) {
    throw ConfigError("config: 'corr' needs n(n-1)/2 entries of the strict lower triangle, row by row");
  }
  std::vector<double> full(n * n, 0.0);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    full[i * n + i] = 1.0;
    for (std::size_t j = 0; j < i; ++j) full[i * n + j] = full[j * n + i] = lower[k++];
  }
  return full;
}

std::vector<double> lower_triangle(const std::vector<double>& full, std::size_t n) {
  std::vector<double> lower;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) lower.push_back(full[i * n + j]);
  }
  return lower;
}

}  // namespace

StepCap StepCap::parse(std::string_view token) {
  if (token == "horizon") return {Kind::Horizon, 0.0};
  if (token == "optimal") return {Kind::Optimal, 0.0};
  const double v = parse_double(token, "h");
  if (!(v > 0.0)) throw ConfigError("config: 'h' values must be positive");
  return {Kind::Fixed, v};
}

std::string StepCap::label() const {
  switch (kind) {
    case Kind::Horizon:
      return "horizon";
    case Kind::Optimal:
      return "optimal";
    case Kind::Fixed:
      break;
  }
  return "fixed";
}

double StepCap::resolve(double eps, double alpha, double horizon) const {
  switch (kind) {
    case Kind::Fixed:
      return value;
    case Kind::Horizon:
      return horizon;
    case Kind::Optimal:
      return optimal_h(eps, alpha, horizon);
  }
  return horizon;
}

Experiment parse_experiment(std::string_view name) {
  if (name == "nonsingular") return Experiment::Nonsingular;
  if (name == "singular") return Experiment::Singular;
  if (name == "fx") return Experiment::Fx;
  if (name == "sweep") return Experiment::Sweep;
  throw ConfigError("config: unknown experiment '" + std::string(name) + "'");
}

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Nonsingular:
      return "nonsingular";
    case Experiment::Singular:
      return "singular";
    case Experiment::Fx:
      return "fx";
    case Experiment::Sweep:
      return "sweep";
  }
  return "?";
}

ExperimentConfig default_config(Experiment e) {
  ExperimentConfig c;
  c.experiment = e;
  c.T = 1.0;
  c.x0 = {0.0, 0.0, 0.0};
  switch (e) {
    case Experiment::Nonsingular:
      c.m_paths = 40'000'000;
      c.c_plus = 30.0;
      c.c_minus = 1.0;
      c.mu = 3.0;
      c.f = 0.1;
      for (double h : {0.1, 0.05, 0.025, 0.01, 0.005}) c.h_grid.push_back({StepCap::Kind::Fixed, h});
      break;
    case Experiment::Singular:
      c.m_paths = 40'000'000;
      c.c_plus = 0.1;
      c.c_minus = 1.0;
      c.mu = 3.0;
      c.alpha = 0.5;
      c.f = 0.2;
      c.eps_grid = {2.5e-3, 1e-3, 5e-4, 2.5e-4, 1e-4, 5e-5, 2.5e-5, 1e-5};
      c.h_grid = {StepCap{StepCap::Kind::Horizon, 0.0}};
      break;
    case Experiment::Sweep:
      c.m_paths = 1'000'000;
      c.c_plus = 1.0;
      c.c_minus = 25.0;
      c.mu = 3.0;
      c.alpha = 1.5;
      c.f = 1.0;
      c.eps_grid = {0.4, 0.2, 0.1};
      c.h_grid = {StepCap{StepCap::Kind::Horizon, 0.0}, StepCap{StepCap::Kind::Optimal, 0.0}};
      break;
    case Experiment::Fx: {
      c.m_paths = 1'000'000;
      c.market = fx::reference_market();
      c.option = fx::reference_option();
      const fx::JumpModelParams jm = fx::reference_jump_model(0.1, 1.0);
      c.jump_factors = jm.jump_factors;
      c.c_plus = jm.measure.c_plus;
      c.c_minus = jm.measure.c_minus;
      c.mu = jm.measure.mu;
      c.alpha = jm.measure.alpha;
      c.T = c.option.T;
      c.x0.clear();
      c.eps_grid = {0.2, 0.1, 0.05};
      c.h_grid = {StepCap{StepCap::Kind::Optimal, 0.0}};
      break;
    }
  }
  return c;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
  if (m_paths < 2) fail("'paths' must be at least 2");
  if (h_grid.empty()) fail("'h' grid must not be empty");
  if (!(T > 0.0)) fail("'T' must be positive");
  if (!(c_plus >= 0.0 && c_minus >= 0.0) || c_plus + c_minus <= 0.0) fail("'c_plus'/'c_minus' must be non-negative, not both zero");
  if (!(mu > 0.0)) fail("'mu' must be positive");
  if (experiment == Experiment::Nonsingular) {
    if (x0.size() != 3) fail("'x0' needs three coordinates");
    for (const auto& h : h_grid) {
      if (h.kind == StepCap::Kind::Optimal) fail("'h = optimal' needs an infinite-activity measure");
    }
    return;
  }
  if (!(alpha > 0.0 && alpha < 2.0)) fail("'alpha' must lie in (0, 2)");
  if (eps_grid.empty()) fail("'eps' grid must not be empty");
  for (double e : eps_grid) {
    if (!(e > 0.0 && e < 1.0)) fail("'eps' values must lie in (0, 1)");
  }
  if (experiment == Experiment::Fx) {
    try {
      market.validate();
      option.validate(market.n_ccy());
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (!corr_repair && fx::min_eigenvalue(market.corr) <= 0.0) {
      fail("'corr' is not positive definite; set 'corr_repair = nearest' to use the nearest valid matrix");
    }
    if (!(corr_floor > 0.0 && corr_floor < 1.0)) fail("'corr_floor' must lie in (0, 1)");
    if (jump_factors.size() != market.n_ccy()) fail("'jump_factors' needs one entry per currency");
    for (double jf : jump_factors) {
      if (!(std::abs(jf) < mu)) fail("'jump_factors' must satisfy |f| < mu");
    }
    return;
  }
  if (x0.size() != 3) fail("'x0' needs three coordinates");
}

fx::MarketData ExperimentConfig::effective_market() const {
  fx::MarketData m = market;
  if (corr_repair) m.corr = fx::nearest_correlation(m.corr, corr_floor);
  return m;
}

ExperimentConfig parse_config(std::string_view text, Experiment experiment, std::string_view source) {
  const std::string src(source);
  std::map<std::string, Entry> entries;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(src + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ConfigError(src + ":" + std::to_string(line_no) + ": empty key or value");
    }
    if (!entries.emplace(key, Entry{value, line_no}).second) {
      throw ConfigError(src + ":" + std::to_string(line_no) + ": key '" + key + "' repeated");
    }
  }

  Reader r(std::move(entries), src);
  if (const Entry* e = r.take("experiment")) {
    if (parse_experiment(trim(e->value)) != experiment) {
      throw ConfigError(src + ":" + std::to_string(e->line) + ": file is for experiment '" + e->value + "', not '" +
                        std::string(experiment_name(experiment)) + "'");
    }
  }

  ExperimentConfig c = default_config(experiment);
  r.count("paths", c.m_paths);
  r.count("seed", c.seed);
  std::uint64_t workers = c.workers;
  r.count("workers", workers);
  c.workers = static_cast<unsigned>(workers);
  r.text("out", c.output);
  r.number("c_plus", c.c_plus);
  r.number("c_minus", c.c_minus);
  r.number("mu", c.mu);
  r.number("alpha", c.alpha);
  r.numbers("eps", c.eps_grid);
  if (const Entry* e = r.take("h")) {
    c.h_grid.clear();
    for (auto item : split_items(e->value)) c.h_grid.push_back(StepCap::parse(item));
  }

  if (experiment == Experiment::Fx) {
    auto& m = c.market;
    r.numbers("spots", m.spots);
    r.numbers("foreign_rates", m.foreign_rates);
    r.number("domestic_rate", m.domestic_rate);
    r.numbers("vols", m.vols);
    std::vector<double> lower = lower_triangle(m.corr, m.n_ccy());
    r.numbers("corr", lower);
    m.corr = expand_lower_triangle(lower, m.n_ccy());
    r.numbers("barriers", c.option.barriers);
    r.numbers("weights", c.option.weights);
    r.number("strike", c.option.strike);
    r.number("t0", c.option.t0);
    r.number("T", c.option.T);
    r.numbers("jump_factors", c.jump_factors);
    if (const Entry* e = r.take("corr_repair")) {
      if (e->value == "nearest") {
        c.corr_repair = true;
      } else if (e->value == "none") {
        c.corr_repair = false;
      } else {
        throw ConfigError(src + ":" + std::to_string(e->line) + ": 'corr_repair' is 'nearest' or 'none'");
      }
    }
    r.number("corr_floor", c.corr_floor);
    c.T = c.option.T - c.option.t0;
  } else {
    r.number("f", c.f);
    r.number("T", c.T);
    r.numbers("x0", c.x0);
  }
  r.reject_unknown();
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path, Experiment experiment) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), experiment, path.string());
}

}  // namespace levywalk
