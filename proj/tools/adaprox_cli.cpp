// Command line front end: run / table / check / plotdata.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "adaprox/harness.hpp"

namespace {

struct Flags {
  std::string algo;
  std::string problem;
  int iters = 0;
  double eta = 0.0;
  double radius = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> targets;
  std::string out;
  std::string config;
  std::string traces;
};

void add_run_flags(CLI::App* cmd, Flags& f, std::map<std::string, CLI::Option*>& opts) {
  opts["algo"] = cmd->add_option("--algo", f.algo, "Algorithm id, e.g. adaacsa, adagrad+:scalar, sgd:mu=0.9");
  opts["problem"] = cmd->add_option("--problem", f.problem, "Problem spec, e.g. nesterov:n=100");
  opts["iters"] = cmd->add_option("--iters", f.iters, "Iteration budget T");
  opts["eta"] = cmd->add_option("--eta", f.eta, "Learning rate (defaults to the radius)");
  opts["radius"] = cmd->add_option("--radius", f.radius, "Radius R used in D updates");
  opts["sigma"] = cmd->add_option("--sigma", f.sigma, "Gradient noise level (0 = deterministic)");
  opts["seed"] = cmd->add_option("--seed", f.seed, "Noise seed");
  opts["targets"] = cmd->add_option("--targets", f.targets, "Error targets")->delimiter(',');
  opts["config"] = cmd->add_option("--config", f.config, "File with one key=value run spec per line");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CLI flags override the config-file values, which override the defaults.
adaprox::RunSpec apply_flags(adaprox::RunSpec spec, const Flags& f, const std::map<std::string, CLI::Option*>& o) {
  if (o.at("algo")->count()) spec.algorithm = f.algo;
  if (o.at("problem")->count()) spec.problem = f.problem;
  if (o.at("iters")->count()) spec.iterations = f.iters;
  if (o.at("eta")->count()) spec.eta = f.eta;
  if (o.at("radius")->count()) spec.radius = f.radius;
  if (o.at("sigma")->count()) spec.sigma = f.sigma;
  if (o.at("seed")->count()) spec.seed = f.seed;
  if (o.at("targets")->count()) spec.targets = f.targets;
  return spec;
}

std::vector<adaprox::RunSpec> config_specs(const Flags& f) {
  if (f.config.empty()) return {};
  return adaprox::parse_config(read_file(f.config));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive first-order methods: runs, tables and diagnostics"};
  app.require_subcommand(1);

  Flags run_flags, table_flags, plot_flags, check_flags;
  std::map<std::string, CLI::Option*> run_opts, table_opts, plot_opts;

  auto* run_cmd = app.add_subcommand("run", "Run one algorithm on one problem and write a CSV trace");
  add_run_flags(run_cmd, run_flags, run_opts);
  run_cmd->add_option("--out", run_flags.out, "CSV output path (stdout if omitted)");

  auto* table_cmd = app.add_subcommand("table", "Iterations-to-target table over several runs");
  add_run_flags(table_cmd, table_flags, table_opts);
  table_cmd->add_option("--out", table_flags.out, "Output directory for table.txt/table.json/traces.json");
  table_cmd->add_option("--traces", table_flags.traces, "Rebuild the table from a saved traces.json");

  auto* plot_cmd = app.add_subcommand("plotdata", "Per-algorithm CSV series for plotting");
  add_run_flags(plot_cmd, plot_flags, plot_opts);
  plot_cmd->add_option("--out", plot_flags.out, "Output directory")->required();

  auto* check_cmd = app.add_subcommand("check", "Run the diagnostics suite");
  check_cmd->add_option("--out", check_flags.out, "Write a JSON report to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*run_cmd) {
      const auto from_file = config_specs(run_flags);
      const adaprox::RunSpec spec =
          apply_flags(from_file.empty() ? adaprox::RunSpec{} : from_file.front(), run_flags, run_opts);
      const adaprox::RunTrace trace = adaprox::run(spec);
      if (run_flags.out.empty()) {
        std::cout << adaprox::format_csv(trace);
      } else {
        adaprox::emit_csv(trace, run_flags.out);
      }
      for (const auto& hit : adaprox::iterations_to_target(trace, spec.targets)) {
        std::cerr << "target " << hit.target << ": "
                  << (hit.t ? std::to_string(*hit.t) : "not reached") << "\n";
      }
      return 0;
    }

    if (*table_cmd || *plot_cmd) {
      Flags& f = *table_cmd ? table_flags : plot_flags;
      auto& opts = *table_cmd ? table_opts : plot_opts;
      std::vector<adaprox::LabeledTrace> traces;
      std::vector<double> targets = adaprox::default_targets();
      if (!f.traces.empty()) {
        traces = adaprox::parse_traces_json(read_file(f.traces));
        if (!traces.empty()) targets = traces.front().spec.targets;
      } else {
        std::vector<adaprox::RunSpec> specs = config_specs(f);
        if (specs.empty()) specs = adaprox::synthetic_table_specs();
        for (auto& s : specs) s = apply_flags(s, f, opts);
        targets = specs.front().targets;
        traces = adaprox::run_all(specs);
      }
      if (opts.at("targets")->count()) targets = f.targets;

      if (*plot_cmd) {
        adaprox::emit_plot_data(traces, f.out);
        return 0;
      }
      const auto table = adaprox::build_table(traces, targets);
      std::cout << adaprox::format_table_text(table);
      if (!f.out.empty()) {
        std::filesystem::create_directories(f.out);
        const std::filesystem::path base(f.out);
        std::ofstream(base / "table.txt", std::ios::binary) << adaprox::format_table_text(table);
        std::ofstream(base / "table.json", std::ios::binary) << adaprox::format_table_json(table);
        std::ofstream(base / "traces.json", std::ios::binary) << adaprox::format_traces_json(traces);
      }
      return 0;
    }

    if (*check_cmd) {
      const auto checks = adaprox::run_check_suite();
      bool all = true;
      for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all = all && c.passed;
      }
      if (!check_flags.out.empty()) {
        std::ofstream out(check_flags.out, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot write '" + check_flags.out + "'");
        out << adaprox::format_checks_json(checks);
      }
      return all ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
