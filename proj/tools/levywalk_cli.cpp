#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "levywalk/config.hpp"
#include "levywalk/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> paths;
  std::optional<unsigned> workers;
};

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--config", o.config, "key = value experiment file")->check(CLI::ExistingFile);
  sub.add_option("--out", o.out, "CSV output path (default: stdout or the config's 'out')");
  sub.add_option("--seed", o.seed, "override the seed");
  sub.add_option("--paths", o.paths, "override the number of paths M");
  sub.add_option("--workers", o.workers, "worker threads, 0 = all cores; results do not depend on it");
}

int run(levywalk::Experiment experiment, const Options& o) {
  levywalk::ExperimentConfig config;
  try {
    config = o.config.empty() ? levywalk::default_config(experiment) : levywalk::load_config(o.config, experiment);
    if (o.seed) config.seed = *o.seed;
    if (o.paths) config.m_paths = *o.paths;
    if (o.workers) config.workers = *o.workers;
    if (!o.out.empty()) config.output = o.out;
    config.validate();
  } catch (const levywalk::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (config.output.empty()) {
      levywalk::run_experiment(config, std::cout);
      std::cout.flush();
      return std::cout ? 0 : kExitRuntime;
    }
    std::ofstream file(config.output);
    if (!file) throw std::runtime_error("cannot open '" + config.output + "' for writing");
    levywalk::run_experiment(config, file);
    file.close();
    if (!file) throw std::runtime_error("failed writing '" + config.output + "'");
  } catch (const levywalk::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "levywalk: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo solver for PIDEs driven by Levy noise"};
  app.require_subcommand(1);

  Options options;
  struct Command {
    const char* name;
    const char* help;
    levywalk::Experiment experiment;
  };
  const Command commands[] = {
      {"nonsingular", "finite-activity ball problem over a grid of h", levywalk::Experiment::Nonsingular},
      {"singular", "infinite-activity ball problem over a grid of eps", levywalk::Experiment::Singular},
      {"fx", "down-and-in basket put under an exponential Levy FX model", levywalk::Experiment::Fx},
      {"sweep", "singular problem with predicted bias columns", levywalk::Experiment::Sweep},
  };
  std::optional<levywalk::Experiment> chosen;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(*sub, options);
    sub->callback([&chosen, e = c.experiment] { chosen = e; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  return run(*chosen, options);
}
