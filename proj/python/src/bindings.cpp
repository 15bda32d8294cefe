#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "levywalk/config.hpp"
#include "levywalk/experiments.hpp"
#include "levywalk/fx.hpp"
#include "levywalk/levy.hpp"
#include "levywalk/mc.hpp"
#include "levywalk/model.hpp"
#include "levywalk/theory.hpp"

namespace py = pybind11;
using namespace levywalk;

namespace {

McEstimate run_estimate(const PideProblem& problem, const std::vector<double>& x0, double eps, double h,
                        std::uint64_t paths, std::uint64_t seed, unsigned workers) {
  McSettings s;
  s.eps = eps;
  s.h = h;
  s.paths = paths;
  s.seed = seed;
  s.workers = workers;
  py::gil_scoped_release release;
  return estimate(problem, x0, s);
}

}  // namespace

PYBIND11_MODULE(_levywalk, m) {
  m.doc() = "Monte Carlo solver for PIDEs driven by Levy noise.";

  py::register_exception<InfiniteIntensityError>(m, "InfiniteIntensityError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<ExponentialTails>(m, "ExponentialTails")
      .def(py::init<double, double, double>(), py::arg("c_plus"), py::arg("c_minus"), py::arg("mu"))
      .def_readwrite("c_plus", &ExponentialTails::c_plus)
      .def_readwrite("c_minus", &ExponentialTails::c_minus)
      .def_readwrite("mu", &ExponentialTails::mu);

  py::class_<SingularTempered>(m, "SingularTempered")
      .def(py::init<double, double, double, double>(), py::arg("c_plus"), py::arg("c_minus"), py::arg("mu"),
           py::arg("alpha"))
      .def_readwrite("c_plus", &SingularTempered::c_plus)
      .def_readwrite("c_minus", &SingularTempered::c_minus)
      .def_readwrite("mu", &SingularTempered::mu)
      .def_readwrite("alpha", &SingularTempered::alpha);

  py::class_<TemperedStable>(m, "TemperedStable")
      .def(py::init<double, double, double, double, double>(), py::arg("c_plus"), py::arg("c_minus"),
           py::arg("lambda_plus"), py::arg("lambda_minus"), py::arg("alpha"))
      .def_readwrite("c_plus", &TemperedStable::c_plus)
      .def_readwrite("c_minus", &TemperedStable::c_minus)
      .def_readwrite("lambda_plus", &TemperedStable::lambda_plus)
      .def_readwrite("lambda_minus", &TemperedStable::lambda_minus)
      .def_readwrite("alpha", &TemperedStable::alpha);

  py::class_<LevyMeasure>(m, "LevyMeasure")
      .def(py::init<ExponentialTails>())
      .def(py::init<SingularTempered>())
      .def(py::init<TemperedStable>())
      .def("density", &LevyMeasure::density)
      .def_property_readonly("symmetric", &LevyMeasure::symmetric)
      .def_property_readonly("finite_activity", &LevyMeasure::finite_activity)
      .def("__repr__", &LevyMeasure::describe);
  py::implicitly_convertible<ExponentialTails, LevyMeasure>();
  py::implicitly_convertible<SingularTempered, LevyMeasure>();
  py::implicitly_convertible<TemperedStable, LevyMeasure>();

  py::class_<CutoffQuantities>(m, "CutoffQuantities")
      .def_readonly("eps", &CutoffQuantities::eps)
      .def_readonly("lambda_", &CutoffQuantities::lambda)
      .def_readonly("gamma", &CutoffQuantities::gamma)
      .def_readonly("b", &CutoffQuantities::b)
      .def_readonly("beta", &CutoffQuantities::beta);

  m.def("intensity", &intensity, py::arg("measure"), py::arg("eps"));
  m.def("drift_compensator", &drift_compensator, py::arg("measure"), py::arg("eps"));
  m.def("third_moment_tail", &third_moment_tail, py::arg("measure"), py::arg("eps"));
  m.def("cutoff_quantities", &cutoff_quantities, py::arg("measure"), py::arg("eps"));
  m.def("sample_jump", &sample_jump, py::arg("measure"), py::arg("eps"), py::arg("u"));

  py::class_<McEstimate>(m, "McEstimate")
      .def_readonly("u_hat", &McEstimate::u_hat)
      .def_readonly("var_hat", &McEstimate::var_hat)
      .def_readonly("half_width", &McEstimate::half_width)
      .def_readonly("m_paths", &McEstimate::m_paths)
      .def_readonly("steps_mean", &McEstimate::steps_mean)
      .def_readonly("steps_half_width", &McEstimate::steps_half_width)
      .def_readonly("seed", &McEstimate::seed)
      .def("__repr__", [](const McEstimate& e) {
        return "McEstimate(u_hat=" + format_number(e.u_hat) + ", half_width=" + format_number(e.half_width) +
               ", m_paths=" + std::to_string(e.m_paths) + ")";
      });

  py::class_<PideProblem>(m, "PideProblem")
      .def_property_readonly("dim", &PideProblem::dim)
      .def_property_readonly("initial_time", &PideProblem::initial_time)
      .def_property_readonly("terminal_time", &PideProblem::terminal_time)
      .def("exact_solution", [](const PideProblem& p, double t, const std::vector<double>& x) {
        return p.exact_solution(t, x);
      });
  py::class_<BallTestProblem, PideProblem>(m, "BallTestProblem");

  m.def("example_nonsingular", &example_nonsingular, py::arg("f") = 0.1, py::arg("c_plus") = 30.0,
        py::arg("c_minus") = 1.0, py::arg("mu") = 3.0, py::arg("T") = 1.0);
  m.def("example_singular", &example_singular, py::arg("f") = 0.2, py::arg("c_plus") = 0.1,
        py::arg("c_minus") = 1.0, py::arg("mu") = 3.0, py::arg("alpha") = 0.5, py::arg("T") = 1.0);

  m.def("estimate", &run_estimate, py::arg("problem"), py::arg("x0"), py::arg("eps"), py::arg("h"),
        py::arg("paths"), py::arg("seed") = kDefaultSeed, py::arg("workers") = 1u);

  py::class_<BiasProfile>(m, "BiasProfile")
      .def_readonly("term_restricted", &BiasProfile::term_restricted)
      .def_readonly("term_boundary", &BiasProfile::term_boundary)
      .def_readonly("term_smalljump", &BiasProfile::term_smalljump)
      .def("total", &BiasProfile::total);
  m.def("bias_profile", &bias_profile, py::arg("measure"), py::arg("eps"), py::arg("h"));
  m.def("steps_bound", &steps_bound, py::arg("lambda_eps"), py::arg("h"), py::arg("horizon"));
  m.def("optimal_h", &optimal_h, py::arg("eps"), py::arg("alpha"), py::arg("horizon"));
  m.def("cost", &cost, py::arg("lambda_eps"), py::arg("h"));

  py::module_ fxm = m.def_submodule("fx", "Basket barrier options under an exponential Levy FX model.");
  py::class_<fx::MarketData>(fxm, "MarketData")
      .def(py::init<>())
      .def_readwrite("spots", &fx::MarketData::spots)
      .def_readwrite("foreign_rates", &fx::MarketData::foreign_rates)
      .def_readwrite("domestic_rate", &fx::MarketData::domestic_rate)
      .def_readwrite("vols", &fx::MarketData::vols)
      .def_readwrite("corr", &fx::MarketData::corr);
  py::class_<fx::BasketOption>(fxm, "BasketOption")
      .def(py::init<>())
      .def_readwrite("barriers", &fx::BasketOption::barriers)
      .def_readwrite("weights", &fx::BasketOption::weights)
      .def_readwrite("strike", &fx::BasketOption::strike)
      .def_readwrite("t0", &fx::BasketOption::t0)
      .def_readwrite("T", &fx::BasketOption::T);
  py::class_<fx::JumpModelParams>(fxm, "JumpModelParams")
      .def(py::init<>())
      .def_readwrite("jump_factors", &fx::JumpModelParams::jump_factors)
      .def_readwrite("measure", &fx::JumpModelParams::measure)
      .def_readwrite("eps", &fx::JumpModelParams::eps)
      .def_readwrite("h", &fx::JumpModelParams::h);
  py::class_<fx::PriceReport>(fxm, "PriceReport")
      .def_readonly("knock_in", &fx::PriceReport::knock_in)
      .def_readonly("vanilla", &fx::PriceReport::vanilla)
      .def_readonly("discounted_spots", &fx::PriceReport::discounted_spots);

  fxm.def("reference_market", &fx::reference_market);
  fxm.def("reference_option", &fx::reference_option);
  fxm.def("reference_jump_model", &fx::reference_jump_model, py::arg("eps"), py::arg("h"));
  fxm.def("build_sigma", &fx::build_sigma, py::arg("vols"), py::arg("corr"));
  fxm.def("nearest_correlation", &fx::nearest_correlation, py::arg("corr"), py::arg("min_eigenvalue") = 1e-3);
  fxm.def("martingale_drifts", &fx::martingale_drifts, py::arg("params"), py::arg("market"));
  fxm.def(
      "price_report",
      [](const fx::MarketData& market, const fx::BasketOption& option, const fx::JumpModelParams& params,
         std::uint64_t paths, std::uint64_t seed, unsigned workers) {
        py::gil_scoped_release release;
        return fx::price_report(market, option, params, paths, seed, workers);
      },
      py::arg("market"), py::arg("option"), py::arg("params"), py::arg("paths"), py::arg("seed") = kDefaultSeed,
      py::arg("workers") = 1u);

  m.def(
      "run_experiment",
      [](const std::string& experiment, const std::string& config_text) {
        const ExperimentConfig config = parse_config(config_text, parse_experiment(experiment), "<python>");
        std::ostringstream out;
        {
          py::gil_scoped_release release;
          run_experiment(config, out);
        }
        return out.str();
      },
      py::arg("experiment"), py::arg("config_text") = "",
      "Runs one experiment from `key = value` text and returns its CSV.");
}
