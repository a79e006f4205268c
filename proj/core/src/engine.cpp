#include "trajsim/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "trajsim/errors.hpp"

namespace trajsim {

EngineState ioga_step(const EngineState& state, const Vec2& grad_tilde, double gamma,
                      const FeasibleSet& X) {
  if (!(gamma > 0.0)) throw std::invalid_argument("step size gamma must be positive");
  EngineState next;
  next.t = state.t + 1;
  next.x_prev = state.x_hat;
  next.x_hat = project(state.x_hat + grad_tilde / gamma, X);
  next.gbar_running = std::max(state.gbar_running, norm(grad_tilde));
  return next;
}

EngineState ioga_lookahead_step(const EngineState& state, const Vec2& grad_tilde_next, double gamma,
                                const FeasibleSet& X) {
  return ioga_step(state, grad_tilde_next, gamma, X);
}

Episode run_episode(OnlineProblem& problem, const NoiseModel& noise, UpdateMode mode) {
  const int T = problem.horizon();
  if (T < 1) throw std::invalid_argument("horizon must be at least one slot");

  Episode ep;
  ep.trajectory.reserve(T);
  ep.steps.reserve(T > 0 ? T - 1 : 0);
  ep.contexts.reserve(T);

  EngineState state;
  state.t = 1;
  state.x_hat = problem.start();
  state.x_prev = state.x_hat;
  ep.trajectory.push_back(state.x_hat);

  for (int t = 1; t <= T; ++t) {
    SlotContext ctx = problem.reveal(t, state);
    if (t == T) {
      problem.commit(ctx);
      ep.contexts.push_back(std::move(ctx));
      break;
    }

    // The gradient source: U_t at x_hat(t), or the predicted U_{t+1} at x_hat(t).
    SlotContext ahead;
    const SlotContext* source = &ctx;
    if (mode == UpdateMode::lookahead) {
      EngineState peek = state;
      peek.t = t + 1;
      peek.x_prev = state.x_hat;
      ahead = problem.reveal(t + 1, peek);
      source = &ahead;
    }
    const Vec2 measured = problem.gradient_feedback(*source, state.x_hat);
    const NoisyGradient noisy = noisy_gradient(measured, noise, source->t);
    const Vec2 truth = utility_gradient(source->utility, state.x_hat);

    StepRecord rec;
    rec.t = t;
    rec.x_before = state.x_hat;
    rec.grad_tilde = noisy.grad;
    rec.eps_sq_realized = norm_sq(noisy.grad - truth);
    rec.eps_sq_bound = noise.eps_sq_bound(source->t) + source->eps_sq_bound_extra;

    const double gbar = std::max(state.gbar_running, norm(noisy.grad));
    try {
      rec.gamma = problem.step_size(ctx, noisy.grad, gbar);
    } catch (InfeasibleStepSize& e) {
      e.set_slot(t);
      throw;
    }

    EngineState next = ioga_step(state, noisy.grad, rec.gamma, problem.feasible_set());
    rec.x_after = next.x_hat;
    rec.constraint_slack = ctx.cap.value(rec.x_before, rec.x_after);
    if (rec.constraint_slack > kSlackTol) {
      std::ostringstream os;
      os << "step at slot " << t << " violates its motion constraint by " << rec.constraint_slack
         << " after projection onto the feasible set";
      throw InfeasibleStepSize(os.str(), t);
    }

    problem.commit(ctx);
    ep.contexts.push_back(std::move(ctx));
    ep.steps.push_back(rec);
    ep.trajectory.push_back(next.x_hat);
    state = next;
  }
  return ep;
}

}  // namespace trajsim
