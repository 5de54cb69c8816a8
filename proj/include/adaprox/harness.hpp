#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "adaprox/optimizers.hpp"
#include "adaprox/problems.hpp"
#include "adaprox/trace.hpp"

namespace adaprox {

/// Parsed algorithm id, e.g. "adaacsa", "adagrad+:scalar:stoch", "sgd:mu=0.5".
struct AlgorithmSpec {
  Algorithm algorithm = Algorithm::kAdaAcsa;
  ScalingMode scaling = ScalingMode::kPerCoordinate;
  MovementDenominator denominator = MovementDenominator::kOneR2;
  ScheduleKind schedule = ScheduleKind::kStandard;
  double momentum = 0.9;
};

/// Throws std::invalid_argument for unknown ids or suffixes.
AlgorithmSpec parse_algorithm(const std::string& id);

/// A problem built from its CLI string, e.g. "nesterov:n=100",
/// "diagquad:beta=1,10,100,xstar=0,3,0", "bilinear:seed=7,d=3". An optional
/// "box=<w>" sets the half-width of the box [-w, w]^d, "box=none" removes it.
/// With a box, the error of diagquad is measured against the box minimizer.
struct ProblemInstance {
  std::string spec;
  std::optional<Objective> objective;
  std::optional<BilinearGame> game;
  // Domain for constrained algorithms; unconstrained when box=none.
  FeasibleSet box;
  bool box_explicit = false;
  Vector start;

  Eigen::Index dim() const { return start.size(); }
  /// Gradient for objectives, F for games.
  GradientFn oracle() const;
  /// f(x) - f* (or f(x) without f*), or the duality gap.
  double error(const Vector& x) const;
  bool value_is_error() const;
};

ProblemInstance parse_problem(const std::string& spec);

inline const std::vector<double>& default_targets() {
  static const std::vector<double> targets = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5};
  return targets;
}

struct RunSpec {
  std::string algorithm = "adaacsa";
  std::string problem = "nesterov:n=100";
  int iterations = 2000;
  std::optional<double> eta;
  // Defaults to the l_inf diameter of the problem's box.
  std::optional<double> radius;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> targets = default_targets();
};

/// Everything needed to execute a RunSpec, after validation.
struct ResolvedRun {
  RunSpec spec;
  AlgorithmSpec algorithm;
  ProblemInstance problem;
  FeasibleSet domain;
  OptimizerConfig config;
};

/// Throws std::invalid_argument on unknown ids, bad values, or an algorithm
/// that does not fit the problem's domain.
ResolvedRun resolve(const RunSpec& spec);

using StepObserver = std::function<void(const Optimizer&)>;

/// One row per iteration, t = 1..T. The observer, if set, sees the optimizer
/// after every step.
RunTrace run(const ResolvedRun& resolved, const StepObserver& observer = {});
RunTrace run(const RunSpec& spec, const StepObserver& observer = {});

struct TargetHit {
  double target = 0.0;
  std::optional<int> t;  // empty when never reached
};

/// First row whose value is <= each target.
std::vector<TargetHit> iterations_to_target(const RunTrace& trace, const std::vector<double>& targets);

/// CSV with header "t,value,trace_d,movement", 17 significant digits, LF endings.
std::string format_csv(const RunTrace& trace);
RunTrace parse_csv(const std::string& text);
/// Throws std::runtime_error if the file cannot be written.
void emit_csv(const RunTrace& trace, const std::string& path);

struct LabeledTrace {
  std::string label;
  RunSpec spec;
  RunTrace trace;
};

/// The four synthetic-experiment methods on nesterov:n=100 with their tuned
/// learning rates.
std::vector<RunSpec> synthetic_table_specs();

/// Runs every spec (independent runs in parallel) and labels the traces.
std::vector<LabeledTrace> run_all(const std::vector<RunSpec>& specs);

struct TargetTable {
  std::vector<double> targets;
  int iterations = 0;
  std::vector<std::string> labels;
  std::vector<std::vector<TargetHit>> hits;
};

TargetTable build_table(const std::vector<LabeledTrace>& traces, const std::vector<double>& targets);
std::string format_table_text(const TargetTable& table);
std::string format_table_json(const TargetTable& table);

std::string format_traces_json(const std::vector<LabeledTrace>& traces);
std::vector<LabeledTrace> parse_traces_json(const std::string& text);

/// Writes <dir>/table.txt, <dir>/table.json and <dir>/traces.json.
void emit_table(const std::vector<RunSpec>& specs, const std::string& dir);
/// Writes <dir>/<label>.csv ("t,value") per trace plus <dir>/index.csv.
void emit_plot_data(const std::vector<LabeledTrace>& traces, const std::string& dir);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Desk-scale diagnostics: recurrence inequalities, slopes and bounds on small
/// quadratics and a bilinear game.
std::vector<CheckResult> run_check_suite();
std::string format_checks_json(const std::vector<CheckResult>& checks);

/// Reads one RunSpec per non-empty line of "key=value" tokens
/// (algo, problem, iters, eta, radius, sigma, seed, targets). '#' starts a comment.
std::vector<RunSpec> parse_config(const std::string& text);

}  // namespace adaprox
