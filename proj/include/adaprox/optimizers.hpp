#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adaprox/geometry.hpp"
#include "adaprox/problems.hpp"

namespace adaprox {

enum class Algorithm {
  kAdaGradPlus,
  kAdaAcsa,
  kAdaAgdPlus,
  kAdaMp,
  kAdaGrad,
  kLinearCoupling,
  kSgdMomentum,
};

/// Denominator used by movement-driven D updates: R^2 in the deterministic
/// setting, 2 R^2 in the stochastic one.
enum class MovementDenominator { kOneR2, kTwoR2 };

enum class ScheduleKind { kStandard, kOptimized };

/// Step sizes alpha_t = gamma_t for the accelerated methods.
///   Standard:  alpha_t = 1 + t/3
///   Optimized: alpha_0 = 1, alpha_{t+1} = (1 + sqrt(1 + 4 alpha_t^2)) / 2
class StepSizeSchedule {
 public:
  explicit StepSizeSchedule(ScheduleKind kind = ScheduleKind::kStandard) : kind_(kind) {}

  ScheduleKind kind() const { return kind_; }
  double initial() const { return 1.0; }
  /// Value at index t + 1 given the value at index t.
  double next(int t, double current) const;

  static double standard(int t) { return 1.0 + static_cast<double>(t) / 3.0; }
  static double optimized_next(double alpha);

 private:
  ScheduleKind kind_;
};

struct OptimizerConfig {
  // R used in D updates (R_inf, or R_2 for scalar variants).
  double radius = 1.0;
  // Learning rate; defaults to `radius`. For the movement-driven methods the
  // prox step sees gradient * eta / radius, so eta == radius reproduces the
  // plain update rules exactly. AdaGrad and SGD use eta as a plain step
  // size; linear coupling uses it in its D update.
  std::optional<double> eta;
  ScalingMode scaling_mode = ScalingMode::kPerCoordinate;
  MovementDenominator movement_denominator = MovementDenominator::kOneR2;
  ScheduleKind schedule = ScheduleKind::kStandard;
  int iterations = 1;
  // Heavy-ball coefficient, SGD only.
  double momentum = 0.0;
  ProjectionOptions projection;

  double learning_rate() const { return eta.value_or(radius); }
  double denominator_sq() const;
  /// Factor applied to gradients before a movement-driven prox step.
  double gradient_scale() const { return learning_rate() / radius; }
  /// Throws std::invalid_argument on a non-positive radius/eta/iterations.
  void validate() const;
};

/// What the last D update consumed, in the normalized form
/// D_{t+1,i}^2 = D_{t,i}^2 (1 + increment_sq_i / denom_sq).
struct StepRecord {
  Vector increment_sq;
  double denom_sq = 1.0;
  // l2 norm of the iterate movement that drove the update.
  double movement = 0.0;
};

struct AdaGradPlusState {
  Vector x;
  DiagonalScaling scaling{1};
  Vector average;  // mean of x_1..x_t
  int t = 0;
  StepRecord last;
};

struct AdaAcsaState {
  Vector x;  // last query point x_t
  Vector y;
  Vector z;
  DiagonalScaling scaling{1};
  double alpha = 1.0;  // alpha_t = gamma_t for the next step
  int t = 0;
  StepRecord last;
};

struct AdaAgdPlusState {
  Vector x;
  Vector y;
  Vector z;
  Vector z0;
  Vector gradient_sum;  // S_t = sum a_i g(x_i)
  DiagonalScaling scaling{1};
  int t = 0;  // last completed index; the next step computes x_{t+1}
  StepRecord last;
};

struct AdaMpState {
  Vector x;
  Vector y;
  DiagonalScaling scaling{1};
  Vector average;  // mean of x_1..x_t
  int t = 0;
  StepRecord last;
};

struct AdaGradState {
  Vector x;
  Vector gradient;  // gradient at x, reused by the next step
  DiagonalScaling scaling{1};
  Vector sum;       // sum of x_0..x_{t-1}
  int t = 0;
  StepRecord last;
};

struct LinearCouplingState {
  Vector x;
  Vector y;
  Vector z;
  DiagonalScaling scaling{1};
  double gamma = 1.0;
  int t = 0;
  StepRecord last;
};

struct SgdMomentumState {
  Vector x;
  Vector velocity;
  int t = 0;
};

AdaGradPlusState adagrad_plus_init(const Vector& x0, const FeasibleSet& set, const OptimizerConfig& cfg);
/// x_{t+1} = argmin_K <g, x> + 1/2 ||x - x_t||_{D_t}^2, then D grows with the movement.
void adagrad_plus_step(AdaGradPlusState& state, const Vector& gradient, const FeasibleSet& set,
                       const OptimizerConfig& cfg);
Vector adagrad_plus_solution(const AdaGradPlusState& state);

AdaAcsaState adaacsa_init(const Vector& z0, const FeasibleSet& set, const OptimizerConfig& cfg);
void adaacsa_step(AdaAcsaState& state, const GradientFn& gradient_at, const FeasibleSet& set,
                  const OptimizerConfig& cfg);

AdaAgdPlusState adaagd_plus_init(const Vector& z0, const FeasibleSet& set, const OptimizerConfig& cfg);
/// Dual averaging step anchored at z0 with a_t = t, A_t = t(t+1)/2.
void adaagd_plus_step(AdaAgdPlusState& state, const GradientFn& gradient_at, const FeasibleSet& set,
                      const OptimizerConfig& cfg);

AdaMpState adamp_init(const Vector& y0, const FeasibleSet& set, const OptimizerConfig& cfg);
/// Extragradient step. The D update always divides by 2 R^2.
void adamp_step(AdaMpState& state, const GradientFn& operator_at, const FeasibleSet& set,
                const OptimizerConfig& cfg);
Vector adamp_solution(const AdaMpState& state);

AdaGradState adagrad_unconstrained_init(const Vector& x0, const GradientFn& gradient_at,
                                        const FeasibleSet& set, const OptimizerConfig& cfg);
/// Adds x_t to the running average, moves to x_{t+1} = x_t - eta D_t^{-1} g(x_t),
/// then sets D_{t+1}^2 = D_t^2 + g(x_{t+1})^2.
void adagrad_unconstrained_step(AdaGradState& state, const GradientFn& gradient_at,
                                const OptimizerConfig& cfg);
/// Mean of x_0..x_{t-1}; x_0 before the first step.
Vector adagrad_unconstrained_solution(const AdaGradState& state);

LinearCouplingState linear_coupling_init(const Vector& x0, const FeasibleSet& set,
                                         const OptimizerConfig& cfg);
void linear_coupling_acsa_step(LinearCouplingState& state, const GradientFn& gradient_at,
                               const OptimizerConfig& cfg);

SgdMomentumState sgd_momentum_init(const Vector& x0);
/// v <- mu v - lr g; x <- x + v, then Euclidean projection onto `set`.
void sgd_momentum_step(SgdMomentumState& state, const Vector& gradient, double lr, double mu,
                       const FeasibleSet& set = FeasibleSet::unconstrained());

/// Uniform stepping interface over every algorithm above.
class Optimizer {
 public:
  virtual ~Optimizer() = default;

  virtual Algorithm algorithm() const = 0;
  /// Runs one iteration, querying `oracle` for gradients or operator values.
  virtual void step(const GradientFn& oracle) = 0;
  /// The method's returned point for the iterations done so far.
  virtual Vector solution() const = 0;
  /// Completed iterations.
  virtual int iterations() const = 0;
  /// Null for SGD, which has no preconditioner.
  virtual const DiagonalScaling* scaling() const = 0;
  virtual const StepRecord* last_step() const = 0;
  /// Points the algorithm keeps that must lie in the feasible set.
  virtual std::vector<Vector> iterates() const = 0;
};

/// `oracle` is only used by algorithms that need a gradient at x0 up front.
std::unique_ptr<Optimizer> make_optimizer(Algorithm algorithm, const Vector& x0, const FeasibleSet& set,
                                          const OptimizerConfig& cfg, const GradientFn& oracle);

bool requires_constraints(Algorithm algorithm);
bool requires_unconstrained(Algorithm algorithm);
std::string algorithm_name(Algorithm algorithm);

}  // namespace adaprox
