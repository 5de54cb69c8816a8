#include "adaprox/harness.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "adaprox/diagnostics.hpp"
#include "json.hpp"

namespace adaprox {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) fail("invalid number for " + what + ": '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    fail("invalid number for " + what + ": '" + text + "'");
  }
}

long long parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) fail("invalid integer for " + what + ": '" + text + "'");
    return v;
  } catch (const std::logic_error&) {
    fail("invalid integer for " + what + ": '" + text + "'");
  }
}

// "n=100" / "beta=1,10,100,box=2" -> key -> list of values. Tokens without
// '=' extend the previous key.
std::map<std::string, std::vector<std::string>> parse_params(const std::string& text) {
  std::map<std::string, std::vector<std::string>> out;
  if (text.empty()) return out;
  std::string key;
  for (const auto& token : split(text, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      if (key.empty()) fail("malformed problem parameters: '" + text + "'");
      out[key].push_back(token);
      continue;
    }
    key = token.substr(0, eq);
    if (out.count(key)) fail("duplicate problem parameter '" + key + "'");
    out[key].push_back(token.substr(eq + 1));
  }
  return out;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string sanitize(const std::string& label) {
  std::string out;
  for (char c : label) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.') {
      out += c;
    } else if (c == '+') {
      out += "plus";
    } else {
      out += '_';
    }
  }
  return out;
}

json spec_to_json(const RunSpec& spec) {
  json j;
  j["algo"] = spec.algorithm;
  j["problem"] = spec.problem;
  j["iters"] = spec.iterations;
  j["eta"] = spec.eta ? json(*spec.eta) : json(nullptr);
  j["radius"] = spec.radius ? json(*spec.radius) : json(nullptr);
  j["sigma"] = spec.sigma;
  j["seed"] = spec.seed;
  j["targets"] = spec.targets;
  return j;
}

RunSpec spec_from_json(const json& j) {
  RunSpec spec;
  spec.algorithm = j.at("algo").get<std::string>();
  spec.problem = j.at("problem").get<std::string>();
  spec.iterations = j.at("iters").get<int>();
  if (!j.at("eta").is_null()) spec.eta = j.at("eta").get<double>();
  if (!j.at("radius").is_null()) spec.radius = j.at("radius").get<double>();
  spec.sigma = j.at("sigma").get<double>();
  spec.seed = j.at("seed").get<std::uint64_t>();
  spec.targets = j.at("targets").get<std::vector<double>>();
  return spec;
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing

AlgorithmSpec parse_algorithm(const std::string& id) {
  const auto parts = split(id, ':');
  if (parts.empty() || parts[0].empty()) fail("empty algorithm id");
  static const std::map<std::string, Algorithm> kNames = {
      {"adagrad+", Algorithm::kAdaGradPlus}, {"adaacsa", Algorithm::kAdaAcsa},
      {"adaagd+", Algorithm::kAdaAgdPlus},   {"adamp", Algorithm::kAdaMp},
      {"adagrad", Algorithm::kAdaGrad},      {"lincoup", Algorithm::kLinearCoupling},
      {"sgd", Algorithm::kSgdMomentum},
  };
  const auto it = kNames.find(parts[0]);
  if (it == kNames.end()) fail("unknown algorithm '" + parts[0] + "'");

  AlgorithmSpec out;
  out.algorithm = it->second;
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const std::string& suffix = parts[k];
    if (suffix == "scalar") {
      out.scaling = ScalingMode::kScalar;
    } else if (suffix == "stoch") {
      out.denominator = MovementDenominator::kTwoR2;
    } else if (suffix == "optimized") {
      out.schedule = ScheduleKind::kOptimized;
    } else if (suffix.rfind("mu=", 0) == 0 && out.algorithm == Algorithm::kSgdMomentum) {
      out.momentum = parse_double(suffix.substr(3), "mu");
      if (!(out.momentum >= 0.0 && out.momentum < 1.0)) fail("sgd: mu must be in [0, 1)");
    } else {
      fail("unknown algorithm suffix '" + suffix + "' in '" + id + "'");
    }
  }
  return out;
}

ProblemInstance parse_problem(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  auto params = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1));

  auto take_single = [&](const std::string& key) -> std::optional<std::string> {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    if (it->second.size() != 1) fail("parameter '" + key + "' takes a single value");
    std::string v = it->second[0];
    params.erase(it);
    return v;
  };

  ProblemInstance p;
  p.spec = spec;
  std::optional<double> half_width;
  bool no_box = false;
  if (auto box = take_single("box")) {
    p.box_explicit = true;
    if (*box == "none") {
      no_box = true;
    } else {
      half_width = parse_double(*box, "box");
      if (!(*half_width > 0.0) || !std::isfinite(*half_width)) fail("box half-width must be positive");
    }
  }

  if (kind == "nesterov") {
    const auto n = take_single("n");
    const long long dim = n ? parse_int(*n, "n") : 100;
    if (dim < 2 || dim > 1000000) fail("nesterov: n must be in [2, 1e6]");
    p.objective = nesterov_worst(static_cast<int>(dim));
    p.start = Vector::Zero(dim);
    const double w = half_width.value_or(2.0);
    p.box = no_box ? FeasibleSet::unconstrained() : FeasibleSet::cube(dim, -w, w);
  } else if (kind == "diagquad") {
    auto it = params.find("beta");
    if (it == params.end()) fail("diagquad: missing beta");
    Vector beta(static_cast<Eigen::Index>(it->second.size()));
    for (std::size_t k = 0; k < it->second.size(); ++k) beta[k] = parse_double(it->second[k], "beta");
    params.erase(it);
    Vector x_star = Vector::Zero(beta.size());
    if (auto xs = params.find("xstar"); xs != params.end()) {
      if (xs->second.size() != static_cast<std::size_t>(beta.size())) fail("diagquad: xstar and beta differ in length");
      for (std::size_t k = 0; k < xs->second.size(); ++k) x_star[k] = parse_double(xs->second[k], "xstar");
      params.erase(xs);
    }
    p.objective = diag_quadratic(beta, x_star);
    p.start = Vector::Ones(beta.size());
    const double w = half_width.value_or(2.0);
    if (no_box) {
      p.box = FeasibleSet::unconstrained();
    } else {
      p.box = FeasibleSet::cube(beta.size(), -w, w);
      if (!p.box.contains(p.start)) p.start = p.box.euclidean_projection(p.start);
      // Separable objective: the box minimizer is the clamped x*.
      const Vector constrained = p.box.euclidean_projection(x_star);
      p.objective->minimizer = constrained;
      p.objective->f_star = p.objective->value(constrained);
    }
  } else if (kind == "bilinear") {
    const auto seed = take_single("seed");
    const auto d = take_single("d");
    const long long dim = d ? parse_int(*d, "d") : 3;
    if (dim < 1 || dim > 2000) fail("bilinear: d must be in [1, 2000]");
    if (no_box) fail("bilinear: games need a bounded box");
    std::mt19937_64 engine(static_cast<std::uint64_t>(seed ? parse_int(*seed, "seed") : 0));
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix payoff(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) payoff(i, j) = normal(engine);
    }
    const double w = half_width.value_or(1.0);
    p.game = bilinear_game(payoff, FeasibleSet::cube(dim, -w, w), FeasibleSet::cube(dim, -w, w));
    p.box = p.game->domain;
    p.start = Vector::Constant(2 * dim, w);
  } else {
    fail("unknown problem '" + kind + "'");
  }
  if (!params.empty()) fail("unknown parameter '" + params.begin()->first + "' for problem '" + kind + "'");
  return p;
}

GradientFn ProblemInstance::oracle() const {
  if (game) return game->op.apply;
  return objective->gradient;
}

double ProblemInstance::error(const Vector& x) const {
  if (game) return game->op.gap(x);
  const double f = objective->value(x);
  return objective->f_star ? f - *objective->f_star : f;
}

bool ProblemInstance::value_is_error() const { return game.has_value() || objective->f_star.has_value(); }

std::vector<RunSpec> parse_config(const std::string& text) {
  std::vector<RunSpec> specs;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    std::string token;
    RunSpec spec;
    bool any = false;
    while (tokens >> token) {
      const auto eq = token.find('=');
      if (eq == std::string::npos) fail("config line " + std::to_string(line_no) + ": expected key=value");
      const std::string key = token.substr(0, eq);
      const std::string value = token.substr(eq + 1);
      any = true;
      if (key == "algo") {
        spec.algorithm = value;
      } else if (key == "problem") {
        spec.problem = value;
      } else if (key == "iters") {
        spec.iterations = static_cast<int>(parse_int(value, "iters"));
      } else if (key == "eta") {
        spec.eta = parse_double(value, "eta");
      } else if (key == "radius") {
        spec.radius = parse_double(value, "radius");
      } else if (key == "sigma") {
        spec.sigma = parse_double(value, "sigma");
      } else if (key == "seed") {
        spec.seed = static_cast<std::uint64_t>(parse_int(value, "seed"));
      } else if (key == "targets") {
        spec.targets.clear();
        for (const auto& t : split(value, ',')) spec.targets.push_back(parse_double(t, "targets"));
      } else {
        fail("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
      }
    }
    if (any) specs.push_back(spec);
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Running

ResolvedRun resolve(const RunSpec& spec) {
  if (spec.iterations < 1) fail("iterations must be at least 1");
  if (!(spec.sigma >= 0.0) || !std::isfinite(spec.sigma)) fail("sigma must be >= 0");
  if (spec.eta && !(*spec.eta > 0.0)) fail("eta must be positive");
  if (spec.radius && !(*spec.radius > 0.0)) fail("radius must be positive");

  ResolvedRun r;
  r.spec = spec;
  r.algorithm = parse_algorithm(spec.algorithm);
  r.problem = parse_problem(spec.problem);
  const Algorithm algo = r.algorithm.algorithm;

  if (r.problem.game && algo != Algorithm::kAdaMp) {
    fail("problem '" + spec.problem + "' is a game and needs adamp");
  }
  if (requires_constraints(algo)) {
    if (r.problem.box.is_unconstrained()) {
      fail(algorithm_name(algo) + " needs a constrained domain, but '" + spec.problem + "' has none");
    }
    r.domain = r.problem.box;
  } else if (requires_unconstrained(algo)) {
    if (r.problem.box_explicit && !r.problem.box.is_unconstrained()) {
      fail(algorithm_name(algo) + " is unconstrained; drop box= from '" + spec.problem + "'");
    }
    r.domain = FeasibleSet::unconstrained();
  } else {
    // SGD projects only onto an explicitly requested box.
    r.domain = r.problem.box_explicit ? r.problem.box : FeasibleSet::unconstrained();
  }

  OptimizerConfig& cfg = r.config;
  const double diameter = linf_diameter(r.problem.box);
  cfg.radius = spec.radius.value_or(std::isfinite(diameter) ? diameter : 1.0);
  cfg.eta = spec.eta;
  cfg.scaling_mode = r.algorithm.scaling;
  cfg.movement_denominator = r.algorithm.denominator;
  cfg.schedule = r.algorithm.schedule;
  cfg.iterations = spec.iterations;
  cfg.momentum = r.algorithm.momentum;
  cfg.validate();
  return r;
}

RunTrace run(const ResolvedRun& r, const StepObserver& observer) {
  GradientFn oracle = r.problem.oracle();
  std::optional<StochasticOracle> noisy;
  if (r.spec.sigma > 0.0) {
    noisy.emplace(oracle, r.problem.dim(), r.spec.sigma, r.spec.seed);
    oracle = [&noisy](const Vector& x) { return noisy->draw(x); };
  }

  auto optimizer = make_optimizer(r.algorithm.algorithm, r.problem.start, r.domain, r.config, oracle);
  RunTrace trace;
  trace.rows.reserve(static_cast<std::size_t>(r.spec.iterations));
  Vector previous = optimizer->solution();
  for (int k = 0; k < r.spec.iterations; ++k) {
    optimizer->step(oracle);
    Vector solution = optimizer->solution();
    TraceRow row;
    row.t = optimizer->iterations();
    row.value = r.problem.error(solution);
    const DiagonalScaling* scaling = optimizer->scaling();
    row.trace_d = scaling ? scaling->trace() : 0.0;
    const StepRecord* last = optimizer->last_step();
    row.movement = last ? last->movement : (solution - previous).norm();
    trace.rows.push_back(row);
    previous = std::move(solution);
    if (observer) observer(*optimizer);
  }
  return trace;
}

RunTrace run(const RunSpec& spec, const StepObserver& observer) { return run(resolve(spec), observer); }

std::vector<TargetHit> iterations_to_target(const RunTrace& trace, const std::vector<double>& targets) {
  std::vector<TargetHit> hits;
  hits.reserve(targets.size());
  for (double target : targets) {
    TargetHit hit{target, std::nullopt};
    for (const auto& row : trace.rows) {
      if (row.value <= target) {
        hit.t = row.t;
        break;
      }
    }
    hits.push_back(hit);
  }
  return hits;
}

// ---------------------------------------------------------------------------
// Output

std::string format_csv(const RunTrace& trace) {
  std::string out = "t,value,trace_d,movement\n";
  for (const auto& row : trace.rows) {
    out += std::to_string(row.t);
    out += ',';
    out += format_number(row.value);
    out += ',';
    out += format_number(row.trace_d);
    out += ',';
    out += format_number(row.movement);
    out += '\n';
  }
  return out;
}

RunTrace parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "t,value,trace_d,movement") fail("csv: missing or wrong header");
  RunTrace trace;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 4) fail("csv: expected 4 fields in '" + line + "'");
    TraceRow row;
    row.t = static_cast<int>(parse_int(fields[0], "t"));
    row.value = std::strtod(fields[1].c_str(), nullptr);
    row.trace_d = std::strtod(fields[2].c_str(), nullptr);
    row.movement = std::strtod(fields[3].c_str(), nullptr);
    trace.rows.push_back(row);
  }
  return trace;
}

void emit_csv(const RunTrace& trace, const std::string& path) { write_file(path, format_csv(trace)); }

std::vector<RunSpec> synthetic_table_specs() {
  std::vector<RunSpec> specs(4);
  specs[0].algorithm = "sgd:mu=0.9";
  specs[0].eta = 0.1;
  specs[1].algorithm = "adagrad";
  specs[1].eta = 1.0;
  specs[2].algorithm = "adaacsa";
  specs[2].eta = 1.0;
  specs[3].algorithm = "adaagd+";
  specs[3].eta = 1.0;
  for (auto& s : specs) {
    s.problem = "nesterov:n=100";
    s.iterations = 2000;
  }
  return specs;
}

std::vector<LabeledTrace> run_all(const std::vector<RunSpec>& specs) {
  // Resolve up front so spec errors surface before any work starts.
  std::vector<ResolvedRun> resolved;
  resolved.reserve(specs.size());
  for (const auto& s : specs) resolved.push_back(resolve(s));

  std::vector<std::future<RunTrace>> futures;
  futures.reserve(resolved.size());
  for (const auto& r : resolved) {
    futures.push_back(std::async(std::launch::async, [&r] { return run(r); }));
  }

  std::map<std::string, int> seen;
  std::vector<LabeledTrace> out;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    std::string label = specs[k].algorithm;
    if (const int n = seen[label]++; n > 0) label += "#" + std::to_string(n + 1);
    out.push_back(LabeledTrace{label, specs[k], futures[k].get()});
  }
  return out;
}

TargetTable build_table(const std::vector<LabeledTrace>& traces, const std::vector<double>& targets) {
  TargetTable table;
  table.targets = targets;
  for (const auto& lt : traces) {
    table.iterations = std::max(table.iterations, lt.trace.rows.empty() ? 0 : lt.trace.rows.back().t);
    table.labels.push_back(lt.label);
    table.hits.push_back(iterations_to_target(lt.trace, targets));
  }
  return table;
}

std::string format_table_text(const TargetTable& table) {
  std::size_t label_width = 6;
  for (const auto& l : table.labels) label_width = std::max(label_width, l.size());
  constexpr int kCol = 9;
  std::ostringstream out;
  out << std::left << std::setw(static_cast<int>(label_width)) << "method";
  for (double t : table.targets) {
    std::ostringstream head;
    head << std::setprecision(3) << t;
    out << std::right << std::setw(kCol) << head.str();
  }
  out << '\n';
  const std::string never = ">" + std::to_string(table.iterations);
  for (std::size_t r = 0; r < table.labels.size(); ++r) {
    out << std::left << std::setw(static_cast<int>(label_width)) << table.labels[r];
    for (const auto& hit : table.hits[r]) {
      out << std::right << std::setw(kCol) << (hit.t ? std::to_string(*hit.t) : never);
    }
    out << '\n';
  }
  return out.str();
}

std::string format_table_json(const TargetTable& table) {
  json j;
  j["iterations"] = table.iterations;
  j["targets"] = table.targets;
  j["methods"] = json::array();
  for (std::size_t r = 0; r < table.labels.size(); ++r) {
    json hits = json::array();
    for (const auto& hit : table.hits[r]) hits.push_back(hit.t ? json(*hit.t) : json(nullptr));
    j["methods"].push_back({{"label", table.labels[r]}, {"first_hit", hits}});
  }
  return j.dump(2) + "\n";
}

std::string format_traces_json(const std::vector<LabeledTrace>& traces) {
  json arr = json::array();
  for (const auto& lt : traces) {
    json rows = json::array();
    for (const auto& row : lt.trace.rows) rows.push_back({row.t, row.value, row.trace_d, row.movement});
    arr.push_back({{"label", lt.label}, {"spec", spec_to_json(lt.spec)}, {"rows", rows}});
  }
  return arr.dump() + "\n";
}

std::vector<LabeledTrace> parse_traces_json(const std::string& text) {
  std::vector<LabeledTrace> out;
  try {
    const json arr = json::parse(text);
    for (const auto& item : arr) {
      LabeledTrace lt;
      lt.label = item.at("label").get<std::string>();
      lt.spec = spec_from_json(item.at("spec"));
      for (const auto& row : item.at("rows")) {
        lt.trace.rows.push_back(TraceRow{row.at(0).get<int>(), row.at(1).get<double>(), row.at(2).get<double>(),
                                         row.at(3).get<double>()});
      }
      out.push_back(std::move(lt));
    }
  } catch (const json::exception& e) {
    fail(std::string("traces json: ") + e.what());
  }
  return out;
}

void emit_table(const std::vector<RunSpec>& specs, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const auto traces = run_all(specs);
  const std::vector<double>& targets = specs.empty() ? default_targets() : specs.front().targets;
  const TargetTable table = build_table(traces, targets);
  const std::filesystem::path base(dir);
  write_file((base / "table.txt").string(), format_table_text(table));
  write_file((base / "table.json").string(), format_table_json(table));
  write_file((base / "traces.json").string(), format_traces_json(traces));
}

void emit_plot_data(const std::vector<LabeledTrace>& traces, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::string index = "label,file\n";
  for (const auto& lt : traces) {
    const std::string file = sanitize(lt.label) + ".csv";
    std::string body = "t,value\n";
    for (const auto& row : lt.trace.rows) body += std::to_string(row.t) + "," + format_number(row.value) + "\n";
    write_file((base / file).string(), body);
    index += lt.label + "," + file + "\n";
  }
  write_file((base / "index.csv").string(), index);
}

// ---------------------------------------------------------------------------
// Diagnostics suite

namespace {

// Per-coordinate D and increment history for the recurrence checks.
struct ScalingHistory {
  double denom_sq = 0.0;
  std::vector<Vector> d;
  std::vector<Vector> inc;

  StepObserver observer() {
    return [this](const Optimizer& opt) {
      const DiagonalScaling* s = opt.scaling();
      const StepRecord* last = opt.last_step();
      if (!s || !last) return;
      if (d.empty()) {
        // Undo the first update to recover D_0.
        d.push_back((s->diag().array().square() / (1.0 + last->increment_sq.array() / last->denom_sq)).sqrt().matrix());
      }
      d.push_back(s->diag());
      inc.push_back(last->increment_sq);
      denom_sq = last->denom_sq;
    };
  }

  bool recurrence_holds() const {
    if (inc.empty()) return true;
    for (Eigen::Index i = 0; i < d.front().size(); ++i) {
      std::vector<double> di, inci;
      for (const auto& v : d) di.push_back(v[i]);
      for (const auto& v : inc) inci.push_back(v[i]);
      const auto trace = RecurrenceTrace::observed(denom_sq, inci, di, 1e-9);
      if (!check_recurrence_bounds(trace, 0, trace.length()).ok()) return false;
    }
    return true;
  }
};

CheckResult slope_check(const std::string& name, const RunSpec& spec, double max_slope) {
  ScalingHistory history;
  const RunTrace trace = run(spec, history.observer());
  std::vector<double> t, e;
  for (const auto& row : trace.rows) {
    if (row.t >= spec.iterations / 4 && row.value > 0.0) {
      t.push_back(row.t);
      e.push_back(row.value);
    }
  }
  const bool recurrence = history.recurrence_holds();
  std::ostringstream detail;
  bool rate_ok = false;
  if (t.size() >= 2) {
    const SlopeEstimate fit = estimate_rate(t, e, 0.0);
    rate_ok = fit.slope <= max_slope;
    detail << "slope " << fit.slope << " (need <= " << max_slope << ")";
  } else {
    // An exact zero error beats every power law; report where it happened.
    const auto zero = std::find_if(trace.rows.begin(), trace.rows.end(), [](const TraceRow& r) { return r.value <= 0.0; });
    rate_ok = zero != trace.rows.end() && zero->t <= spec.iterations / 4;
    detail << "error reached 0 at t=" << (zero != trace.rows.end() ? zero->t : -1) << ", no positive samples to fit";
  }
  detail << ", recurrence inequalities " << (recurrence ? "hold" : "violated");
  return {name, rate_ok && recurrence, detail.str()};
}

}  // namespace

std::vector<CheckResult> run_check_suite() {
  std::vector<CheckResult> checks;

  {
    std::mt19937_64 engine(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> length(1, 200);
    int failures = 0;
    for (int k = 0; k < 1000; ++k) {
      const double r_sq = 0.1 + 10.0 * unit(engine);
      std::vector<double> inc(static_cast<std::size_t>(length(engine)));
      for (auto& v : inc) v = r_sq * unit(engine);
      const auto trace = RecurrenceTrace::generate(r_sq, 1.0, inc);
      if (!check_recurrence_bounds(trace, 0, trace.length()).ok()) ++failures;
    }
    checks.push_back({"recurrence-random", failures == 0,
                      std::to_string(1000 - failures) + "/1000 random traces satisfy all three inequalities"});
  }

  RunSpec quad;
  quad.problem = "diagquad:beta=1,4,16";
  quad.iterations = 5000;
  quad.algorithm = "adaacsa";
  checks.push_back(slope_check("adaacsa-slope", quad, -1.7));
  quad.algorithm = "adaagd+";
  checks.push_back(slope_check("adaagd+-slope", quad, -1.7));
  quad.algorithm = "adagrad+";
  checks.push_back(slope_check("adagrad+-slope", quad, -0.9));

  {
    // O(1/T) constant for AdaGrad+: block maxima of the normalized error must not grow.
    RunSpec s;
    s.algorithm = "adagrad+";
    s.problem = "diagquad:beta=1,4,16";
    s.iterations = 2000;
    const ResolvedRun r = resolve(s);
    const BoundReport report =
        check_theorem_bound(run(r), Theorem::kAdaGradPlusSmooth, *r.problem.objective, r.config.radius);
    checks.push_back({"adagrad+-fitted-constant", report.ok, report.detail});
  }

  {
    RunSpec game;
    game.algorithm = "adamp";
    game.problem = "bilinear:seed=7,d=3";
    game.iterations = 2000;
    checks.push_back(slope_check("adamp-gap-slope", game, -0.9));
  }

  {
    // Explicit AdaGrad bound with eta = R/sqrt(2) and R grown until it
    // bounds the trajectory a posteriori.
    const Objective obj = diag_quadratic(Vector{{1.0, 4.0, 16.0}}, Vector::Zero(3));
    double radius = 1.0;
    RunTrace trace;
    bool valid = false;
    for (int attempt = 0; attempt < 20 && !valid; ++attempt) {
      RunSpec s;
      s.algorithm = "adagrad";
      s.problem = "diagquad:beta=1,4,16,box=none";
      s.iterations = 10000;
      s.eta = radius / std::sqrt(2.0);
      double max_dist = 1.0;  // ||x_0 - x*||_inf
      trace = run(s, [&](const Optimizer& opt) {
        max_dist = std::max(max_dist, opt.iterates().front().cwiseAbs().maxCoeff());
      });
      valid = max_dist <= radius;
      if (!valid) radius = max_dist;
    }
    const BoundReport report = check_theorem_bound(trace, Theorem::kAdaGradUnconstrained, obj, radius);
    checks.push_back({"adagrad-explicit-bound", valid && report.ok, report.detail});
  }
  return checks;
}

std::string format_checks_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return arr.dump(2) + "\n";
}

}  // namespace adaprox
