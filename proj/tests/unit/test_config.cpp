#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "levywalk/config.hpp"
#include "levywalk/experiments.hpp"

namespace levywalk {
namespace {

TEST(Config, DefaultsAreValid) {
  for (auto e : {Experiment::Nonsingular, Experiment::Singular, Experiment::Fx, Experiment::Sweep}) {
    const ExperimentConfig c = default_config(e);
    EXPECT_EQ(c.experiment, e);
    EXPECT_EQ(c.seed, kDefaultSeed);
    EXPECT_NO_THROW(c.validate()) << experiment_name(e);
  }
}

TEST(Config, ParsesKeysCommentsAndLists) {
  const ExperimentConfig c = parse_config(
      "# reduced run\n"
      "experiment = singular\n"
      "paths = 1000   # trailing comment\n"
      "seed=7\n"
      "\n"
      "eps = 0.5, 0.25,0.125\n"
      "h = horizon, optimal, 0.01\n"
      "alpha = 1.2\n",
      Experiment::Singular);
  EXPECT_EQ(c.m_paths, 1000u);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.eps_grid, (std::vector<double>{0.5, 0.25, 0.125}));
  ASSERT_EQ(c.h_grid.size(), 3u);
  EXPECT_EQ(c.h_grid[0].kind, StepCap::Kind::Horizon);
  EXPECT_EQ(c.h_grid[1].kind, StepCap::Kind::Optimal);
  EXPECT_EQ(c.h_grid[2].kind, StepCap::Kind::Fixed);
  EXPECT_EQ(c.h_grid[2].value, 0.01);
  EXPECT_EQ(c.alpha, 1.2);
  // Untouched keys keep their defaults.
  EXPECT_EQ(c.mu, default_config(Experiment::Singular).mu);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("colour = red\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("seed = 1\nseed = 2\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("experiment = fx\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("paths 10\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("paths = ten\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("h = -1\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("h = sometimes\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_config("spots = 1,2\n", Experiment::Singular), ConfigError);
  EXPECT_THROW(parse_experiment("walk"), ConfigError);
}

TEST(Config, ValidationCatchesBadValues) {
  ExperimentConfig c = default_config(Experiment::Singular);
  c.m_paths = 1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = default_config(Experiment::Singular);
  c.eps_grid.clear();
  EXPECT_THROW(c.validate(), ConfigError);
  c = default_config(Experiment::Singular);
  c.alpha = 2.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Config, StepCapRules) {
  EXPECT_EQ(StepCap::parse("horizon").resolve(0.1, 1.5, 2.0), 2.0);
  EXPECT_NEAR(StepCap::parse("optimal").resolve(0.1, 1.5, 2.0), std::pow(0.1, 2.5), 1e-18);
  EXPECT_EQ(StepCap::parse("optimal").resolve(0.1, 0.5, 2.0), 2.0);
  EXPECT_EQ(StepCap::parse("0.25").resolve(0.1, 1.5, 2.0), 0.25);
}

TEST(Config, CorrelationIsTheStrictLowerTriangle) {
  const ExperimentConfig c = parse_config("corr = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6\ncorr_repair = none\n", Experiment::Fx);
  const std::vector<double> expected{1.0, 0.1, 0.2, 0.4, 0.1, 1.0, 0.3, 0.5, 0.2, 0.3, 1.0, 0.6, 0.4, 0.5, 0.6, 1.0};
  EXPECT_EQ(c.market.corr, expected);
  EXPECT_FALSE(c.corr_repair);
  EXPECT_THROW(parse_config("corr = 0.1, 0.2\n", Experiment::Fx), ConfigError);
}

TEST(Config, IndefiniteCorrelationNeedsRepair) {
  ExperimentConfig c = default_config(Experiment::Fx);
  EXPECT_NO_THROW(c.validate());
  EXPECT_GE(fx::min_eigenvalue(c.effective_market().corr), 0.0);
  c.corr_repair = false;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(LogFit, RecoversExactPowerLaw) {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, -0.75));
  const LogFit fit = fit_loglog(x, y);
  EXPECT_NEAR(fit.slope, -0.75, 1e-14);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-14);
  EXPECT_EQ(fit.points, 4u);
}

TEST(LogFit, SkipsNonPositivePoints) {
  const LogFit fit = fit_loglog({1.0, 2.0, 4.0}, {1.0, 0.0, 4.0});
  EXPECT_EQ(fit.points, 2u);
  EXPECT_NEAR(fit.slope, 1.0, 1e-14);
  EXPECT_TRUE(std::isnan(fit_loglog({1.0}, {1.0}).slope));
}

std::string run_to_string(const ExperimentConfig& c) {
  std::ostringstream out;
  run_experiment(c, out);
  return out.str();
}

TEST(Experiments, CsvIsReproducible) {
  ExperimentConfig c = parse_config("paths = 2000\neps = 0.5, 0.25\nh = horizon, 0.1\n", Experiment::Sweep);
  const std::string a = run_to_string(c);
  c.workers = 3;
  const std::string b = run_to_string(c);
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("bias_total"), std::string::npos);
  EXPECT_NE(a.find("#fit,error_vs_eps[horizon]"), std::string::npos);
  std::istringstream lines(a);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(lines, line)) rows += (!line.empty() && line[0] != '#');
  EXPECT_EQ(rows, 1u + 4u);
}

TEST(Experiments, FxCsvHasDiagnostics) {
  const ExperimentConfig c = parse_config("paths = 3000\neps = 0.3, 0.2\n", Experiment::Fx);
  const std::string a = run_to_string(c);
  EXPECT_NE(a.find("#martingale"), std::string::npos);
  EXPECT_NE(a.find("#stability"), std::string::npos);
}

#ifdef LEVYWALK_CLI_PATH
class Cli : public ::testing::Test {
 protected:
  std::filesystem::path dir = std::filesystem::temp_directory_path() / "levywalk_cli_test";
  void SetUp() override { std::filesystem::create_directories(dir); }
  void TearDown() override { std::filesystem::remove_all(dir); }

  int run(const std::string& args) {
    const std::string cmd = std::string(LEVYWALK_CLI_PATH) + " " + args + " > " + (dir / "stdout").string() +
                            " 2> " + (dir / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::filesystem::path write(const std::string& name, const std::string& text) {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run("singular --paths 500 --config " + write("ok.cfg", "eps = 0.5\n").string()), 0);
  EXPECT_EQ(run("singular --config " + write("bad.cfg", "nonsense = 1\n").string()), 2);
  EXPECT_EQ(run("singular --paths 1"), 2);
  EXPECT_NE(run("nosuchcommand"), 0);
}

TEST_F(Cli, OutputFileMatchesStdout) {
  const auto cfg = write("n.cfg", "paths = 400\nh = 0.1\n");
  ASSERT_EQ(run("nonsingular --config " + cfg.string()), 0);
  std::stringstream a, b;
  a << std::ifstream(dir / "stdout").rdbuf();
  ASSERT_EQ(run("nonsingular --config " + cfg.string() + " --out " + (dir / "o.csv").string()), 0);
  b << std::ifstream(dir / "o.csv").rdbuf();
  EXPECT_EQ(a.str(), b.str());
  EXPECT_FALSE(a.str().empty());
}
#endif

}  // namespace
}  // namespace levywalk
