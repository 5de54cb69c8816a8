#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "adaprox/diagnostics.hpp"
#include "adaprox/geometry.hpp"
#include "adaprox/harness.hpp"
#include "adaprox/optimizers.hpp"
#include "adaprox/problems.hpp"

namespace py = pybind11;
using namespace adaprox;

namespace {

py::dict trace_to_dict(const RunTrace& trace) {
  std::vector<int> t;
  std::vector<double> value, trace_d, movement;
  for (const auto& row : trace.rows) {
    t.push_back(row.t);
    value.push_back(row.value);
    trace_d.push_back(row.trace_d);
    movement.push_back(row.movement);
  }
  py::dict out;
  out["t"] = t;
  out["value"] = value;
  out["trace_d"] = trace_d;
  out["movement"] = movement;
  return out;
}

RunSpec make_spec(const std::string& algo, const std::string& problem, int iters, std::optional<double> eta,
                  std::optional<double> radius, double sigma, std::uint64_t seed) {
  RunSpec spec;
  spec.algorithm = algo;
  spec.problem = problem;
  spec.iterations = iters;
  spec.eta = eta;
  spec.radius = radius;
  spec.sigma = sigma;
  spec.seed = seed;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_adaprox, m) {
  m.doc() = "Adaptive per-coordinate first-order methods for constrained problems";

  py::register_exception<std::invalid_argument>(m, "SpecError", PyExc_ValueError);

  py::enum_<ScalingMode>(m, "ScalingMode")
      .value("PER_COORDINATE", ScalingMode::kPerCoordinate)
      .value("SCALAR", ScalingMode::kScalar);

  py::class_<DiagonalScaling>(m, "DiagonalScaling")
      .def(py::init<Eigen::Index, ScalingMode>(), py::arg("dim"), py::arg("mode") = ScalingMode::kPerCoordinate)
      .def_static("from_values", &DiagonalScaling::from_values, py::arg("values"),
                  py::arg("mode") = ScalingMode::kPerCoordinate)
      .def_property_readonly("diag", &DiagonalScaling::diag)
      .def_property_readonly("trace", &DiagonalScaling::trace)
      .def("grow_by_movement", &DiagonalScaling::grow_by_movement);

  py::class_<FeasibleSet>(m, "FeasibleSet")
      .def_static("unconstrained", &FeasibleSet::unconstrained)
      .def_static("box", &FeasibleSet::box, py::arg("lower"), py::arg("upper"))
      .def_static("cube", &FeasibleSet::cube, py::arg("dim"), py::arg("lower"), py::arg("upper"))
      .def_static("ball", &FeasibleSet::ball, py::arg("center"), py::arg("radius"))
      .def("contains", &FeasibleSet::contains, py::arg("x"), py::arg("slack") = 0.0);

  m.def("linf_diameter", &linf_diameter);
  m.def("l2_diameter", &l2_diameter);
  m.def(
      "project_weighted",
      [](const Vector& g, const Vector& anchor, const DiagonalScaling& d, const FeasibleSet& set) {
        return project_weighted(g, anchor, d, set);
      },
      py::arg("g"), py::arg("anchor"), py::arg("scaling"), py::arg("set"));

  py::class_<Objective>(m, "Objective")
      .def_readonly("dim", &Objective::dim)
      .def_readonly("f_star", &Objective::f_star)
      .def_readonly("minimizer", &Objective::minimizer)
      .def_readonly("smoothness", &Objective::smoothness)
      .def("value", [](const Objective& o, const Vector& x) { return o.value(x); })
      .def("gradient", [](const Objective& o, const Vector& x) { return o.gradient(x); });

  m.def("nesterov_worst", &nesterov_worst, py::arg("n"));
  m.def("diag_quadratic", &diag_quadratic, py::arg("beta"), py::arg("x_star"));
  m.def(
      "bilinear_gap",
      [](const Matrix& a, const Vector& point) {
        const auto game = bilinear_game(a, FeasibleSet::cube(a.rows(), -1, 1), FeasibleSet::cube(a.cols(), -1, 1));
        return game.op.gap(point);
      },
      py::arg("payoff"), py::arg("point"), "Duality gap of min_x max_y x^T A y over [-1, 1] boxes.");

  py::enum_<Algorithm>(m, "Algorithm")
      .value("ADAGRAD_PLUS", Algorithm::kAdaGradPlus)
      .value("ADAACSA", Algorithm::kAdaAcsa)
      .value("ADAAGD_PLUS", Algorithm::kAdaAgdPlus)
      .value("ADAMP", Algorithm::kAdaMp)
      .value("ADAGRAD", Algorithm::kAdaGrad)
      .value("LINCOUP", Algorithm::kLinearCoupling)
      .value("SGD", Algorithm::kSgdMomentum);

  py::class_<Optimizer>(m, "Optimizer")
      .def("step", &Optimizer::step, py::arg("oracle"))
      .def("solution", &Optimizer::solution)
      .def_property_readonly("iterations", &Optimizer::iterations)
      .def_property_readonly("scaling", [](const Optimizer& o) -> std::optional<Vector> {
        if (const auto* s = o.scaling()) return s->diag();
        return std::nullopt;
      });

  m.def(
      "make_optimizer",
      [](Algorithm algo, const Vector& x0, const FeasibleSet& set, double radius, std::optional<double> eta,
         bool scalar, bool stochastic, bool optimized_schedule, double momentum, const GradientFn& oracle) {
        OptimizerConfig cfg;
        cfg.radius = radius;
        cfg.eta = eta;
        cfg.scaling_mode = scalar ? ScalingMode::kScalar : ScalingMode::kPerCoordinate;
        cfg.movement_denominator = stochastic ? MovementDenominator::kTwoR2 : MovementDenominator::kOneR2;
        cfg.schedule = optimized_schedule ? ScheduleKind::kOptimized : ScheduleKind::kStandard;
        cfg.momentum = momentum;
        return make_optimizer(algo, x0, set, cfg, oracle);
      },
      py::arg("algorithm"), py::arg("x0"), py::arg("set"), py::arg("radius") = 1.0, py::arg("eta") = std::nullopt,
      py::arg("scalar") = false, py::arg("stochastic") = false, py::arg("optimized_schedule") = false,
      py::arg("momentum") = 0.0, py::arg("oracle") = GradientFn{});

  m.def(
      "run",
      [](const std::string& algo, const std::string& problem, int iters, std::optional<double> eta,
         std::optional<double> radius, double sigma, std::uint64_t seed) {
        return trace_to_dict(run(make_spec(algo, problem, iters, eta, radius, sigma, seed)));
      },
      py::arg("algo"), py::arg("problem"), py::arg("iters") = 2000, py::arg("eta") = std::nullopt,
      py::arg("radius") = std::nullopt, py::arg("sigma") = 0.0, py::arg("seed") = 0,
      "Runs one spec and returns the trace columns as lists.");

  m.def(
      "run_csv",
      [](const std::string& algo, const std::string& problem, int iters, std::optional<double> eta,
         std::optional<double> radius, double sigma, std::uint64_t seed) {
        return format_csv(run(make_spec(algo, problem, iters, eta, radius, sigma, seed)));
      },
      py::arg("algo"), py::arg("problem"), py::arg("iters") = 2000, py::arg("eta") = std::nullopt,
      py::arg("radius") = std::nullopt, py::arg("sigma") = 0.0, py::arg("seed") = 0);

  m.def(
      "iterations_to_target",
      [](const std::vector<double>& values, const std::vector<double>& targets) {
        RunTrace trace;
        for (std::size_t k = 0; k < values.size(); ++k) trace.rows.push_back({static_cast<int>(k + 1), values[k], 0, 0});
        std::vector<std::optional<int>> out;
        for (const auto& hit : iterations_to_target(trace, targets)) out.push_back(hit.t);
        return out;
      },
      py::arg("values"), py::arg("targets"), "values[k] is the error after iteration k + 1.");

  m.def(
      "check_recurrence_bounds",
      [](double r_sq, double d0, const std::vector<double>& d_sq) {
        const auto trace = RecurrenceTrace::generate(r_sq, d0, d_sq);
        const auto report = check_recurrence_bounds(trace, 0, trace.length());
        py::dict out;
        out["lower_ok"] = report.lower_ok;
        out["upper_ok"] = report.upper_ok;
        out["log_ok"] = report.log_ok;
        out["upper_applicable"] = report.upper_applicable;
        return out;
      },
      py::arg("r_sq"), py::arg("d0"), py::arg("d_sq"));

  m.def(
      "estimate_rate",
      [](const std::vector<double>& errors, double window_fraction) {
        return estimate_rate(errors, window_fraction).slope;
      },
      py::arg("errors"), py::arg("window_fraction") = 0.25, "Log-log slope with t = 1..n.");

  m.def("synthetic_table", [] {
    const auto traces = run_all(synthetic_table_specs());
    return format_table_json(build_table(traces, default_targets()));
  });
}
