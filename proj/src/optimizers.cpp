#include "adaprox/optimizers.hpp"

#include <cmath>
#include <stdexcept>

namespace adaprox {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_start(const Vector& x0, const FeasibleSet& set) {
  require(x0.size() > 0, "optimizer: empty starting point");
  require(x0.allFinite(), "optimizer: non-finite starting point");
  if (auto dim = set.dim()) require(*dim == x0.size(), "optimizer: start/domain dimension mismatch");
  require(set.contains(x0, 1e-12), "optimizer: starting point outside the feasible set");
}

void require_gradient(const Vector& g, Eigen::Index dim) {
  require(g.size() == dim, "optimizer: gradient dimension mismatch");
  require(g.allFinite(), "optimizer: non-finite gradient");
}

// Records and applies a movement-driven D update.
void grow(DiagonalScaling& scaling, StepRecord& record, const Vector& movement_sq, double denom_sq) {
  record.movement = std::sqrt(movement_sq.sum());
  record.denom_sq = denom_sq;
  if (scaling.mode() == ScalingMode::kScalar) {
    record.increment_sq = Vector::Constant(movement_sq.size(), movement_sq.sum());
  } else {
    record.increment_sq = movement_sq;
  }
  scaling.grow_by_movement(movement_sq, denom_sq);
}

// Records and applies D_{t+1}^2 = D_t^2 + increments, expressed in the
// normalized form with denominator denom_sq.
void add(DiagonalScaling& scaling, StepRecord& record, const Vector& increments, double denom_sq,
         double movement) {
  const Vector& d = scaling.diag();
  Vector effective = increments;
  if (scaling.mode() == ScalingMode::kScalar) effective.setConstant(increments.sum());
  record.increment_sq = (effective.array() * denom_sq / d.array().square()).matrix();
  record.denom_sq = denom_sq;
  record.movement = movement;
  scaling.add_squares(increments);
}

}  // namespace

double StepSizeSchedule::optimized_next(double alpha) {
  return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * alpha * alpha));
}

double StepSizeSchedule::next(int t, double current) const {
  if (kind_ == ScheduleKind::kStandard) return standard(t + 1);
  return optimized_next(current);
}

double OptimizerConfig::denominator_sq() const {
  const double r2 = radius * radius;
  return movement_denominator == MovementDenominator::kTwoR2 ? 2.0 * r2 : r2;
}

void OptimizerConfig::validate() const {
  require(std::isfinite(radius) && radius > 0.0, "config: radius must be finite and positive");
  require(std::isfinite(learning_rate()) && learning_rate() > 0.0, "config: eta must be finite and positive");
  require(iterations >= 1, "config: iterations must be at least 1");
  require(std::isfinite(momentum) && momentum >= 0.0 && momentum < 1.0, "config: momentum must be in [0, 1)");
}

// ---------------------------------------------------------------------------
// AdaGrad+

AdaGradPlusState adagrad_plus_init(const Vector& x0, const FeasibleSet& set, const OptimizerConfig& cfg) {
  cfg.validate();
  require_start(x0, set);
  AdaGradPlusState s;
  s.x = x0;
  s.scaling = DiagonalScaling(x0.size(), cfg.scaling_mode);
  s.average = x0;
  return s;
}

void adagrad_plus_step(AdaGradPlusState& s, const Vector& gradient, const FeasibleSet& set,
                       const OptimizerConfig& cfg) {
  require(s.x.size() > 0, "adagrad_plus_step: state not initialized");
  require_gradient(gradient, s.x.size());
  Vector next = project_weighted(cfg.gradient_scale() * gradient, s.x, s.scaling, set, cfg.projection);
  grow(s.scaling, s.last, (next - s.x).array().square().matrix(), cfg.denominator_sq());
  s.x = std::move(next);
  ++s.t;
  if (s.t == 1) {
    s.average = s.x;
  } else {
    s.average += (s.x - s.average) / static_cast<double>(s.t);
  }
}

Vector adagrad_plus_solution(const AdaGradPlusState& s) { return s.average; }

// ---------------------------------------------------------------------------
// AdaACSA

AdaAcsaState adaacsa_init(const Vector& z0, const FeasibleSet& set, const OptimizerConfig& cfg) {
  cfg.validate();
  require_start(z0, set);
  AdaAcsaState s;
  s.x = z0;
  s.y = z0;
  s.z = z0;
  s.scaling = DiagonalScaling(z0.size(), cfg.scaling_mode);
  s.alpha = StepSizeSchedule(cfg.schedule).initial();
  return s;
}

void adaacsa_step(AdaAcsaState& s, const GradientFn& gradient_at, const FeasibleSet& set,
                  const OptimizerConfig& cfg) {
  require(s.z.size() > 0, "adaacsa_step: state not initialized");
  const double inv_alpha = 1.0 / s.alpha;
  const double gamma = s.alpha;
  s.x = (1.0 - inv_alpha) * s.y + inv_alpha * s.z;
  const Vector g = gradient_at(s.x);
  require_gradient(g, s.x.size());
  Vector z_next = project_weighted(gamma * cfg.gradient_scale() * g, s.z, s.scaling, set, cfg.projection);
  s.y = (1.0 - inv_alpha) * s.y + inv_alpha * z_next;
  grow(s.scaling, s.last, (z_next - s.z).array().square().matrix(), cfg.denominator_sq());
  s.z = std::move(z_next);
  s.alpha = StepSizeSchedule(cfg.schedule).next(s.t, s.alpha);
  ++s.t;
}

// ---------------------------------------------------------------------------
// AdaAGD+

AdaAgdPlusState adaagd_plus_init(const Vector& z0, const FeasibleSet& set, const OptimizerConfig& cfg) {
  cfg.validate();
  require_start(z0, set);
  AdaAgdPlusState s;
  s.x = z0;
  s.y = z0;
  s.z = z0;
  s.z0 = z0;
  s.gradient_sum = Vector::Zero(z0.size());
  s.scaling = DiagonalScaling(z0.size(), cfg.scaling_mode);
  return s;
}

void adaagd_plus_step(AdaAgdPlusState& s, const GradientFn& gradient_at, const FeasibleSet& set,
                      const OptimizerConfig& cfg) {
  require(s.z0.size() > 0, "adaagd_plus_step: state not initialized");
  const long long t = s.t + 1;
  const long long a_t = t;
  const long long big_a_prev = (t - 1) * t / 2;
  const long long big_a = t * (t + 1) / 2;
  const double w_prev = static_cast<double>(big_a_prev) / static_cast<double>(big_a);
  const double w_new = static_cast<double>(a_t) / static_cast<double>(big_a);

  s.x = w_prev * s.y + w_new * s.z;
  const Vector g = gradient_at(s.x);
  require_gradient(g, s.x.size());
  s.gradient_sum += static_cast<double>(a_t) * g;
  Vector z_next = project_weighted(cfg.gradient_scale() * s.gradient_sum, s.z0, s.scaling, set, cfg.projection);
  s.y = w_prev * s.y + w_new * z_next;
  grow(s.scaling, s.last, (z_next - s.z).array().square().matrix(), cfg.denominator_sq());
  s.z = std::move(z_next);
  s.t = static_cast<int>(t);
}

// ---------------------------------------------------------------------------
// AdaMP

AdaMpState adamp_init(const Vector& y0, const FeasibleSet& set, const OptimizerConfig& cfg) {
  cfg.validate();
  require_start(y0, set);
  AdaMpState s;
  s.x = y0;
  s.y = y0;
  s.scaling = DiagonalScaling(y0.size(), cfg.scaling_mode);
  s.average = y0;
  return s;
}

void adamp_step(AdaMpState& s, const GradientFn& operator_at, const FeasibleSet& set,
                const OptimizerConfig& cfg) {
  require(s.y.size() > 0, "adamp_step: state not initialized");
  const double scale = cfg.gradient_scale();
  const Vector f_prev = operator_at(s.y);
  require_gradient(f_prev, s.y.size());
  Vector x = project_weighted(scale * f_prev, s.y, s.scaling, set, cfg.projection);
  const Vector f_mid = operator_at(x);
  require_gradient(f_mid, s.y.size());
  Vector y = project_weighted(scale * f_mid, s.y, s.scaling, set, cfg.projection);

  const Vector movement_sq = (x - s.y).array().square().matrix() + (x - y).array().square().matrix();
  grow(s.scaling, s.last, movement_sq, 2.0 * cfg.radius * cfg.radius);
  s.x = std::move(x);
  s.y = std::move(y);
  ++s.t;
  if (s.t == 1) {
    s.average = s.x;
  } else {
    s.average += (s.x - s.average) / static_cast<double>(s.t);
  }
}

Vector adamp_solution(const AdaMpState& s) { return s.average; }

// ---------------------------------------------------------------------------
// Unconstrained AdaGrad

AdaGradState adagrad_unconstrained_init(const Vector& x0, const GradientFn& gradient_at,
                                        const FeasibleSet& set, const OptimizerConfig& cfg) {
  cfg.validate();
  require(set.is_unconstrained(), "adagrad: requires an unconstrained domain");
  require_start(x0, set);
  AdaGradState s;
  s.x = x0;
  s.gradient = gradient_at(x0);
  require_gradient(s.gradient, x0.size());
  // D_0^2 = 1 + g(x_0)^2, so every step already includes its own gradient.
  s.scaling = DiagonalScaling(x0.size(), cfg.scaling_mode);
  s.scaling.add_squares(s.gradient.array().square().matrix());
  s.sum = Vector::Zero(x0.size());
  return s;
}

void adagrad_unconstrained_step(AdaGradState& s, const GradientFn& gradient_at, const OptimizerConfig& cfg) {
  require(s.x.size() > 0, "adagrad_unconstrained_step: state not initialized");
  s.sum += s.x;
  const Vector step = cfg.learning_rate() * s.gradient.cwiseQuotient(s.scaling.diag());
  s.x -= step;
  s.gradient = gradient_at(s.x);
  require_gradient(s.gradient, s.x.size());
  add(s.scaling, s.last, s.gradient.array().square().matrix(), 1.0, step.norm());
  ++s.t;
}

Vector adagrad_unconstrained_solution(const AdaGradState& s) {
  if (s.t == 0) return s.x;
  return s.sum / static_cast<double>(s.t);
}

// ---------------------------------------------------------------------------
// Linear coupling (unconstrained AdaACSA)

LinearCouplingState linear_coupling_init(const Vector& x0, const FeasibleSet& set, const OptimizerConfig& cfg) {
  cfg.validate();
  require(set.is_unconstrained(), "lincoup: requires an unconstrained domain");
  require_start(x0, set);
  LinearCouplingState s;
  s.x = x0;
  s.y = x0;
  s.z = x0;
  s.scaling = DiagonalScaling(x0.size(), cfg.scaling_mode);
  s.gamma = 1.0;
  return s;
}

void linear_coupling_acsa_step(LinearCouplingState& s, const GradientFn& gradient_at, const OptimizerConfig& cfg) {
  require(s.x.size() > 0, "linear_coupling_acsa_step: state not initialized");
  const Vector g = gradient_at(s.x);
  require_gradient(g, s.x.size());
  const double eta = cfg.learning_rate();
  const DiagonalScaling previous = s.scaling;

  // D_{t+1}^2 = D_t^2 + (gamma_t / eta)^2 g^2
  const Vector increments = (s.gamma * s.gamma / (eta * eta)) * g.array().square().matrix();
  add(s.scaling, s.last, increments, eta * eta, 0.0);
  const Vector z_next = s.z - s.gamma * g.cwiseQuotient(s.scaling.diag());
  s.last.movement = (z_next - s.z).norm();
  s.z = z_next;
  s.y = s.x - g.cwiseQuotient(previous.diag());
  s.gamma = StepSizeSchedule::optimized_next(s.gamma);
  s.x = (1.0 - 1.0 / s.gamma) * s.y + (1.0 / s.gamma) * s.z;
  ++s.t;
}

// ---------------------------------------------------------------------------
// SGD with heavy-ball momentum

SgdMomentumState sgd_momentum_init(const Vector& x0) {
  require(x0.size() > 0 && x0.allFinite(), "sgd: invalid starting point");
  return SgdMomentumState{x0, Vector::Zero(x0.size()), 0};
}

void sgd_momentum_step(SgdMomentumState& s, const Vector& gradient, double lr, double mu,
                       const FeasibleSet& set) {
  require_gradient(gradient, s.x.size());
  s.velocity = mu * s.velocity - lr * gradient;
  s.x = set.euclidean_projection(s.x + s.velocity);
  ++s.t;
}

// ---------------------------------------------------------------------------
// Uniform interface

namespace {

class AdaGradPlusOptimizer final : public Optimizer {
 public:
  AdaGradPlusOptimizer(const Vector& x0, FeasibleSet set, OptimizerConfig cfg)
      : set_(std::move(set)), cfg_(cfg), state_(adagrad_plus_init(x0, set_, cfg_)) {}
  Algorithm algorithm() const override { return Algorithm::kAdaGradPlus; }
  void step(const GradientFn& oracle) override { adagrad_plus_step(state_, oracle(state_.x), set_, cfg_); }
  Vector solution() const override { return adagrad_plus_solution(state_); }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return &state_.scaling; }
  const StepRecord* last_step() const override { return &state_.last; }
  std::vector<Vector> iterates() const override { return {state_.x, state_.average}; }

 private:
  FeasibleSet set_;
  OptimizerConfig cfg_;
  AdaGradPlusState state_;
};

class AdaAcsaOptimizer final : public Optimizer {
 public:
  AdaAcsaOptimizer(const Vector& x0, FeasibleSet set, OptimizerConfig cfg)
      : set_(std::move(set)), cfg_(cfg), state_(adaacsa_init(x0, set_, cfg_)) {}
  Algorithm algorithm() const override { return Algorithm::kAdaAcsa; }
  void step(const GradientFn& oracle) override { adaacsa_step(state_, oracle, set_, cfg_); }
  Vector solution() const override { return state_.y; }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return &state_.scaling; }
  const StepRecord* last_step() const override { return &state_.last; }
  std::vector<Vector> iterates() const override { return {state_.x, state_.y, state_.z}; }

 private:
  FeasibleSet set_;
  OptimizerConfig cfg_;
  AdaAcsaState state_;
};

class AdaAgdPlusOptimizer final : public Optimizer {
 public:
  AdaAgdPlusOptimizer(const Vector& x0, FeasibleSet set, OptimizerConfig cfg)
      : set_(std::move(set)), cfg_(cfg), state_(adaagd_plus_init(x0, set_, cfg_)) {}
  Algorithm algorithm() const override { return Algorithm::kAdaAgdPlus; }
  void step(const GradientFn& oracle) override { adaagd_plus_step(state_, oracle, set_, cfg_); }
  Vector solution() const override { return state_.y; }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return &state_.scaling; }
  const StepRecord* last_step() const override { return &state_.last; }
  std::vector<Vector> iterates() const override { return {state_.x, state_.y, state_.z}; }

 private:
  FeasibleSet set_;
  OptimizerConfig cfg_;
  AdaAgdPlusState state_;
};

class AdaMpOptimizer final : public Optimizer {
 public:
  AdaMpOptimizer(const Vector& x0, FeasibleSet set, OptimizerConfig cfg)
      : set_(std::move(set)), cfg_(cfg), state_(adamp_init(x0, set_, cfg_)) {}
  Algorithm algorithm() const override { return Algorithm::kAdaMp; }
  void step(const GradientFn& oracle) override { adamp_step(state_, oracle, set_, cfg_); }
  Vector solution() const override { return adamp_solution(state_); }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return &state_.scaling; }
  const StepRecord* last_step() const override { return &state_.last; }
  std::vector<Vector> iterates() const override { return {state_.x, state_.y, state_.average}; }

 private:
  FeasibleSet set_;
  OptimizerConfig cfg_;
  AdaMpState state_;
};

class AdaGradOptimizer final : public Optimizer {
 public:
  AdaGradOptimizer(const Vector& x0, const FeasibleSet& set, OptimizerConfig cfg, const GradientFn& oracle)
      : cfg_(cfg), state_(adagrad_unconstrained_init(x0, oracle, set, cfg_)) {}
  Algorithm algorithm() const override { return Algorithm::kAdaGrad; }
  void step(const GradientFn& oracle) override { adagrad_unconstrained_step(state_, oracle, cfg_); }
  Vector solution() const override { return adagrad_unconstrained_solution(state_); }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return &state_.scaling; }
  const StepRecord* last_step() const override { return &state_.last; }
  std::vector<Vector> iterates() const override { return {state_.x}; }

 private:
  OptimizerConfig cfg_;
  AdaGradState state_;
};

class LinearCouplingOptimizer final : public Optimizer {
 public:
  LinearCouplingOptimizer(const Vector& x0, const FeasibleSet& set, OptimizerConfig cfg)
      : cfg_(cfg), state_(linear_coupling_init(x0, set, cfg_)) {}
  Algorithm algorithm() const override { return Algorithm::kLinearCoupling; }
  void step(const GradientFn& oracle) override { linear_coupling_acsa_step(state_, oracle, cfg_); }
  Vector solution() const override { return state_.y; }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return &state_.scaling; }
  const StepRecord* last_step() const override { return &state_.last; }
  std::vector<Vector> iterates() const override { return {state_.x, state_.y, state_.z}; }

 private:
  OptimizerConfig cfg_;
  LinearCouplingState state_;
};

class SgdOptimizer final : public Optimizer {
 public:
  SgdOptimizer(const Vector& x0, FeasibleSet set, OptimizerConfig cfg)
      : set_(std::move(set)), cfg_(cfg), state_(sgd_momentum_init(x0)) {
    cfg_.validate();
    require_start(x0, set_);
  }
  Algorithm algorithm() const override { return Algorithm::kSgdMomentum; }
  void step(const GradientFn& oracle) override {
    sgd_momentum_step(state_, oracle(state_.x), cfg_.learning_rate(), cfg_.momentum, set_);
  }
  Vector solution() const override { return state_.x; }
  int iterations() const override { return state_.t; }
  const DiagonalScaling* scaling() const override { return nullptr; }
  const StepRecord* last_step() const override { return nullptr; }
  std::vector<Vector> iterates() const override { return {state_.x}; }

 private:
  FeasibleSet set_;
  OptimizerConfig cfg_;
  SgdMomentumState state_;
};

}  // namespace

std::unique_ptr<Optimizer> make_optimizer(Algorithm algorithm, const Vector& x0, const FeasibleSet& set,
                                          const OptimizerConfig& cfg, const GradientFn& oracle) {
  if (requires_constraints(algorithm)) {
    require(!set.is_unconstrained(), "make_optimizer: algorithm requires a constrained domain");
  }
  switch (algorithm) {
    case Algorithm::kAdaGradPlus:
      return std::make_unique<AdaGradPlusOptimizer>(x0, set, cfg);
    case Algorithm::kAdaAcsa:
      return std::make_unique<AdaAcsaOptimizer>(x0, set, cfg);
    case Algorithm::kAdaAgdPlus:
      return std::make_unique<AdaAgdPlusOptimizer>(x0, set, cfg);
    case Algorithm::kAdaMp:
      return std::make_unique<AdaMpOptimizer>(x0, set, cfg);
    case Algorithm::kAdaGrad:
      return std::make_unique<AdaGradOptimizer>(x0, set, cfg, oracle);
    case Algorithm::kLinearCoupling:
      return std::make_unique<LinearCouplingOptimizer>(x0, set, cfg);
    case Algorithm::kSgdMomentum:
      return std::make_unique<SgdOptimizer>(x0, set, cfg);
  }
  throw std::invalid_argument("make_optimizer: unknown algorithm");
}

bool requires_constraints(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAdaGradPlus:
    case Algorithm::kAdaAcsa:
    case Algorithm::kAdaAgdPlus:
    case Algorithm::kAdaMp:
      return true;
    default:
      return false;
  }
}

bool requires_unconstrained(Algorithm algorithm) {
  return algorithm == Algorithm::kAdaGrad || algorithm == Algorithm::kLinearCoupling;
}

std::string algorithm_name(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kAdaGradPlus: return "adagrad+";
    case Algorithm::kAdaAcsa: return "adaacsa";
    case Algorithm::kAdaAgdPlus: return "adaagd+";
    case Algorithm::kAdaMp: return "adamp";
    case Algorithm::kAdaGrad: return "adagrad";
    case Algorithm::kLinearCoupling: return "lincoup";
    case Algorithm::kSgdMomentum: return "sgd";
  }
  return "unknown";
}

}  // namespace adaprox
