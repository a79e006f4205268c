#pragma once

#include <vector>

#include "trajsim/dykstra.hpp"
#include "trajsim/noise.hpp"
#include "trajsim/objectives.hpp"
#include "trajsim/sets.hpp"
#include "trajsim/vec2.hpp"

namespace trajsim {

enum class UpdateMode { standard, lookahead };

struct EngineState {
  int t = 1;
  Vec2 x_hat;
  Vec2 x_prev;
  double gbar_running = 0.0;  // max of |grad_tilde| seen so far
};

struct StepRecord {
  int t = 0;
  Vec2 x_before;
  Vec2 x_after;
  double gamma = 0.0;
  Vec2 grad_tilde;
  double eps_sq_realized = 0.0;  // |grad_tilde - true gradient|^2
  double eps_sq_bound = 0.0;
  double constraint_slack = 0.0;  // g_t(x_before, x_after)
};

/// Everything the environment reveals at slot t.
struct SlotContext {
  int t = 0;
  Vec2 goal;
  double lambda = 0.0;
  double alpha = 1.0;
  bool arrived = false;
  SlotUtility utility;           // the true U_t, used for regret
  SlotUtility measured_utility;  // U_t as the agent perceives it (noisy peer, forecast currents)
  PairCap cap;          // g_t for the move t -> t+1
  Vec2 current_true;    // m/slot, zero outside the ocean scenario
  Vec2 current_measured;
  // Second-moment bound of feedback error caused by the scenario itself
  // (peer position noise, perturbed currents), added to the engine's eps_t^2.
  double eps_sq_bound_extra = 0.0;
};

class OnlineProblem {
 public:
  virtual ~OnlineProblem() = default;

  virtual int horizon() const = 0;
  virtual Vec2 start() const = 0;
  virtual const FeasibleSet& feasible_set() const = 0;

  /// Must not depend on anything but t, the state and what commit() stored.
  virtual SlotContext reveal(int t, const EngineState& state) const = 0;
  /// Gradient as measured by the agent, before engine noise.
  virtual Vec2 gradient_feedback(const SlotContext& ctx, const Vec2& x) const {
    return utility_gradient(ctx.measured_utility, x);
  }
  virtual double step_size(const SlotContext& ctx, const Vec2& grad_tilde, double gbar) const = 0;
  virtual void commit(const SlotContext& /*ctx*/) {}
};

/// x_hat(t+1) = P_X(x_hat(t) + grad_tilde / gamma).
EngineState ioga_step(const EngineState& state, const Vec2& grad_tilde, double gamma,
                      const FeasibleSet& X);
/// Same map; the caller supplies the gradient of U_{t+1} at x_hat(t).
EngineState ioga_lookahead_step(const EngineState& state, const Vec2& grad_tilde_next, double gamma,
                                const FeasibleSet& X);

struct Episode {
  std::vector<Vec2> trajectory;       // T points
  std::vector<StepRecord> steps;      // T - 1 records
  std::vector<SlotContext> contexts;  // T contexts
};

/// Runs T - 1 steps from the problem's start. Throws InfeasibleStepSize (with
/// the slot attached) if a step size cannot be found or a step breaks g_t.
Episode run_episode(OnlineProblem& problem, const NoiseModel& noise,
                    UpdateMode mode = UpdateMode::standard);

inline constexpr double kSlackTol = 1e-9;

}  // namespace trajsim
