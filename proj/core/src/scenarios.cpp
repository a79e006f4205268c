#include "trajsim/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "trajsim/errors.hpp"
#include "trajsim/metrics.hpp"

namespace trajsim {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

FeasibleSet feasible_set_of(const ScenarioConfig& c) {
  if (c.region) return *c.region;
  return Box2D::unbounded();
}

double arrival_radius_of(const ScenarioConfig& c) { return c.arrival_radius.value_or(1e-3 * c.v_max); }

class D2DProblem final : public OnlineProblem {
 public:
  explicit D2DProblem(const ScenarioConfig& c) : c_(c), X_(feasible_set_of(c)), radius_(arrival_radius_of(c)) {}

  int horizon() const override { return c_.T; }
  Vec2 start() const override { return c_.start; }
  const FeasibleSet& feasible_set() const override { return X_; }

  SlotContext reveal(int t, const EngineState& state) const override {
    SlotContext ctx;
    ctx.t = t;
    ctx.goal = c_.goal.at(t);
    ctx.arrived = arrived_ || distance(state.x_hat, ctx.goal) <= radius_;
    // Weight on the destination grows as t / T; the peer's weight is the rest.
    const double w = ctx.arrived ? 1.0 : lambda_increasing(t, c_.T);
    ctx.lambda = w;
    ctx.alpha = c_.d2d.alpha;

    const PeerConfig& peer = c_.d2d.peer;
    const Vec2 y_true = peer.at(t, c_.T);
    const Vec2 y_seen = y_true + gaussian_pair(c_.seed, Stream::peer, static_cast<std::uint64_t>(t), peer.noise_std);
    LeadingPathUtility u{leading_path(y_true, ctx.goal, 1.0 - w), c_.v_max, c_.d2d.mu, c_.d2d.utility,
                         c_.d2d.huber_constant};
    LeadingPathUtility m = u;
    m.ell = leading_path(y_seen, ctx.goal, 1.0 - w);
    ctx.utility = u;
    ctx.measured_utility = m;
    ctx.cap = PairCap{t - 1, Vec2{}, ctx.alpha * c_.v_max};
    // P_v is 1-Lipschitz, so the induced error is at most (1 - w) |y_seen - y_true|.
    ctx.eps_sq_bound_extra = (1.0 - w) * (1.0 - w) * 2.0 * peer.noise_std * peer.noise_std;
    return ctx;
  }

  double step_size(const SlotContext& ctx, const Vec2& /*grad*/, double gbar) const override {
    if (gbar == 0.0) return c_.margin * 1.0;
    return d2d_step_size(gbar, c_.v_max, ctx.alpha, c_.d2d.alpha_min, 1.0, c_.margin);
  }

  void commit(const SlotContext& ctx) override { arrived_ = ctx.arrived; }

 private:
  const ScenarioConfig& c_;
  FeasibleSet X_;
  double radius_;
  bool arrived_ = false;
};

class OceanProblem final : public OnlineProblem {
 public:
  OceanProblem(const ScenarioConfig& c, const VelocityField& truth, const VelocityField& measured,
               bool same_field, double v_o_max)
      : c_(c),
        X_(feasible_set_of(c)),
        radius_(arrival_radius_of(c)),
        truth_(truth),
        measured_(measured),
        same_(same_field),
        v_o_max_slot_(v_o_max * c.slot_duration) {
    if (c.ocean.perturbation_sigma_fraction > 0.0) {
      const double s = c.ocean.perturbation_sigma_fraction * truth.v_o_max() * c.slot_duration;
      noise_bound_ = 2.0 * s * s;
    }
  }

  int horizon() const override { return c_.T; }
  Vec2 start() const override { return c_.start; }
  const FeasibleSet& feasible_set() const override { return X_; }

  SlotContext reveal(int t, const EngineState& state) const override {
    SlotContext ctx;
    ctx.t = t;
    ctx.goal = c_.goal.at(t);
    const double time = static_cast<double>(t - 1) * c_.slot_duration;
    ctx.current_true = sample_velocity(truth_, state.x_hat, time) * c_.slot_duration;
    ctx.current_measured =
        same_ ? ctx.current_true : sample_velocity(measured_, state.x_hat, time) * c_.slot_duration;
    ctx.arrived = arrived_ || distance(state.x_hat, ctx.goal) <= radius_;

    const DirectionTerms terms = direction_terms(ctx.goal, state.x_hat, ctx.current_measured, v_o_max_slot_);
    if (ctx.arrived) {
      ctx.lambda = 1.0;
    } else if (c_.ocean.lambda_strategy == LambdaStrategy::increasing) {
      ctx.lambda = lambda_increasing(t, c_.T);
    } else {
      ctx.lambda = lambda_direction(terms.eta, terms.theta);
    }
    ctx.alpha = alpha_schedule(c_.ocean.beta, c_.T - c_.T_eta, c_.T, terms.eta, terms.theta);
    ctx.utility = OceanUtility{ctx.goal, ctx.current_true, state.x_prev, ctx.lambda};
    ctx.measured_utility = OceanUtility{ctx.goal, ctx.current_measured, state.x_prev, ctx.lambda};
    ctx.cap = PairCap{t - 1, ctx.current_measured, ctx.alpha * c_.v_max};
    ctx.eps_sq_bound_extra = noise_bound_;
    return ctx;
  }

  double step_size(const SlotContext& ctx, const Vec2& grad, double /*gbar*/) const override {
    return ocean_step_size(grad, ctx.current_measured, ctx.alpha, c_.v_max, 2.0, c_.margin);
  }

  void commit(const SlotContext& ctx) override { arrived_ = ctx.arrived; }

 private:
  const ScenarioConfig& c_;
  FeasibleSet X_;
  double radius_;
  const VelocityField& truth_;
  const VelocityField& measured_;
  bool same_;
  double v_o_max_slot_;
  double noise_bound_ = 0.0;
  bool arrived_ = false;
};

Box2D metric_region(const ScenarioConfig& c, const Episode& ep, const std::vector<Vec2>* offline) {
  if (c.region && c.region->bounded()) return *c.region;
  std::vector<Vec2> pts = ep.trajectory;
  if (offline) pts.insert(pts.end(), offline->begin(), offline->end());
  for (const auto& ctx : ep.contexts) {
    pts.push_back(ctx.goal);
    if (const auto* u = std::get_if<LeadingPathUtility>(&ctx.utility)) pts.push_back(u->ell);
  }
  return bounding_box(pts, c.v_max);
}

EpisodeReport finish(const ScenarioConfig& c, Episode ep, const VelocityField* field, const RunOptions& options) {
  EpisodeReport rep;
  rep.kind = c.kind;
  rep.T = c.T;
  rep.warnings = c.warnings;
  RegretReport& m = rep.metrics;

  std::vector<SlotUtility> utilities;
  utilities.reserve(ep.contexts.size());
  for (std::size_t t = 0; t < ep.contexts.size(); ++t) {
    utilities.push_back(ep.contexts[t].utility);
    m.online_utilities.push_back(utility_value(ep.contexts[t].utility, ep.trajectory[t]));
  }
  for (const auto& s : ep.steps) {
    m.E_T_bound += s.eps_sq_bound;
    m.E_T_realized += s.eps_sq_realized;
  }

  rep.energy_series = energy_steps(ep.trajectory, field, c.c_d, c.slot_duration);
  for (double e : rep.energy_series) m.energy_online += e;
  const Vec2 final_goal = c.goal.at(c.T);
  m.energy_straight = energy_cost(straight_line(c.start, final_goal, c.T), field, c.c_d, c.slot_duration);
  m.energy_conserved = m.energy_straight - m.energy_online;
  m.final_goal_distance = distance(ep.trajectory.back(), final_goal);

  if (options.offline) {
    const OfflineProblem problem = offline_problem(c, ep);
    OfflineSolution sol = solve_offline(problem, c.offline, ep.trajectory);
    if (!sol.warning.empty()) rep.warnings.push_back(sol.warning);
    for (std::size_t t = 0; t < utilities.size(); ++t) {
      m.offline_utilities.push_back(utility_value(utilities[t], sol.trajectory[t]));
    }
    m.regret = regret(sol.trajectory, ep.trajectory, utilities);
    m.S_T = squared_path_length(sol.trajectory);
    m.has_offline = true;
    rep.offline = std::move(sol);
  }
  const GradientVariation gv = gradient_variation(
      utilities, metric_region(c, ep, rep.offline ? &rep.offline->trajectory : nullptr), 256, c.seed);
  m.G_T = gv.value;
  m.G_T_samples = gv.samples;
  rep.episode = std::move(ep);
  return rep;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw SchemaError(key, what);
}

}  // namespace

Vec2 PeerConfig::at(int t, int T) const {
  if (schedule == PeerSchedule::linear_over_horizon) {
    if (T <= 1) return start;
    return start + (dest - start) * (static_cast<double>(t - 1) / (T - 1));
  }
  const double total = distance(start, dest);
  if (total == 0.0) return start;
  const double travelled = std::min(speed * static_cast<double>(t - 1), total);
  return start + (dest - start) * (travelled / total);
}

void resolve(ScenarioConfig& c) {
  c.warnings.clear();
  if (c.kind == ScenarioKind::adversary) {
    require(c.adversary.T >= 1, "adversary.T", "must be at least 1");
    require(c.adversary.W > 0.0, "adversary.W", "must be positive");
    c.T = c.adversary.T;
    c.T_eta = 0;
    return;
  }
  require(c.v_max > 0.0 && std::isfinite(c.v_max), "v_max_m_per_slot", "must be positive");
  require(c.slot_duration > 0.0, "slot_duration_s", "must be positive");
  require(c.delta >= 0, "delta_slots", "must be >= 0");
  require(c.margin > 1.0, "step.margin", "must exceed 1");
  require(c.c_d >= 0.0, "c_d", "must be >= 0");
  require(c.noise.eps0 >= 0.0, "noise.eps0", "must be >= 0");
  require(c.noise.decay_q >= 0.0, "noise.decay_q", "must be >= 0");
  if (c.region) {
    require(c.region->valid(), "region_m", "lo must not exceed hi");
    require(contains(*c.region, c.start, 1e-9), "start_m", "must lie inside region_m");
  }
  if (c.arrival_radius) require(*c.arrival_radius >= 0.0, "arrival_radius_m", "must be >= 0");

  const double ratio = distance(c.start, c.goal.at(1)) / c.v_max;
  c.T_eta = static_cast<int>(std::ceil(ratio - 1e-9));
  if (c.horizon) {
    require(*c.horizon >= 1, "horizon_slots", "must be at least 1");
    require(*c.horizon >= c.T_eta, "horizon_slots", "must be at least T_ETA = " + std::to_string(c.T_eta));
    c.T = *c.horizon;
  } else {
    c.T = std::max(1, c.T_eta + c.delta);
  }
  c.noise.seed = c.seed;

  const double goal_speed = norm(c.goal.velocity);
  if (goal_speed > 0.5 * c.v_max) {
    c.warnings.push_back("goal moves at " + num(goal_speed) + " m/slot, more than half of v_max");
  }

  if (c.kind == ScenarioKind::d2d) {
    const D2DParams& d = c.d2d;
    require(d.mu > 0.0 && d.mu <= 1.0, "d2d.mu", "must lie in (0, 1]");
    require(d.alpha > 0.0 && d.alpha <= 1.0, "d2d.alpha", "must lie in (0, 1]");
    require(d.alpha_min > 0.0 && d.alpha_min <= d.alpha, "d2d.alpha_min", "must lie in (0, alpha]");
    require(d.bandwidth_hz > 0.0, "d2d.bandwidth_hz", "must be positive");
    require(d.sigma2 > 0.0, "d2d.sigma2", "must be positive");
    require(d.d_min > 0.0, "d2d.d_min_m", "must be positive");
    require(d.peer.noise_std >= 0.0, "d2d.peer.noise_std_m", "must be >= 0");
    require(d.peer.speed >= 0.0, "d2d.peer.speed_m_per_slot", "must be >= 0");
  } else {
    const OceanParams& o = c.ocean;
    require(o.beta >= 0.0, "ocean.beta", "must be >= 0");
    require(o.perturbation_sigma_fraction >= 0.0 && o.perturbation_sigma_fraction <= 1.0,
            "ocean.perturbation_sigma_fraction", "must lie in [0, 1]");
    require(o.field.file.has_value() != o.field.synthetic.has_value(), "ocean.field",
            "needs exactly one of 'file' or 'synthetic'");
    if (o.v_o_max) require(*o.v_o_max > 0.0, "ocean.v_o_max_m_per_s", "must be positive");
  }
}

VelocityField build_field(const ScenarioConfig& c) {
  const FieldSource& src = c.ocean.field;
  if (src.file) return load_field(*src.file);
  if (src.synthetic) return synth_field(*src.synthetic, src.x_axis, src.y_axis, src.t_axis);
  throw SchemaError("ocean.field", "no field source");
}

OfflineProblem offline_problem(const ScenarioConfig& c, const Episode& ep) {
  OfflineProblem p;
  p.start = c.start;
  p.region = feasible_set_of(c);
  p.utilities.reserve(ep.contexts.size());
  for (const auto& ctx : ep.contexts) p.utilities.push_back(ctx.utility);
  for (std::size_t t = 0; t + 1 < ep.contexts.size(); ++t) p.caps.push_back(ep.contexts[t].cap);
  return p;
}

EpisodeReport run_d2d(const ScenarioConfig& config, const RunOptions& options) {
  if (config.kind != ScenarioKind::d2d) throw std::invalid_argument("run_d2d needs a d2d config");
  if (config.T < 1) throw std::invalid_argument("config is not resolved");
  const auto t0 = std::chrono::steady_clock::now();
  D2DProblem problem(config);
  Episode ep = run_episode(problem, config.noise, config.mode);

  std::vector<double> rates;
  rates.reserve(ep.trajectory.size());
  double total = 0.0;
  for (std::size_t t = 0; t < ep.trajectory.size(); ++t) {
    const Vec2 y = config.d2d.peer.at(static_cast<int>(t) + 1, config.T);
    rates.push_back(rate(ep.trajectory[t], y, config.d2d.alpha_p, config.d2d.bandwidth_hz, config.d2d.sigma2,
                         config.d2d.d_min));
    total += rates.back();
  }
  EpisodeReport rep = finish(config, std::move(ep), nullptr, options);
  rep.rate_series = std::move(rates);
  rep.metrics.avg_rate = total / static_cast<double>(rep.rate_series.size());
  rep.metrics.has_rate = true;
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

EpisodeReport run_ocean(const ScenarioConfig& config, const RunOptions& options, const VelocityField* field) {
  if (config.kind != ScenarioKind::ocean) throw std::invalid_argument("run_ocean needs an ocean config");
  if (config.T < 1) throw std::invalid_argument("config is not resolved");
  const auto t0 = std::chrono::steady_clock::now();
  VelocityField owned;
  if (!field) {
    owned = build_field(config);
    field = &owned;
  }
  const double sigma = config.ocean.perturbation_sigma_fraction;
  const VelocityField measured = sigma > 0.0 ? perturb_field(*field, {sigma, config.seed}) : VelocityField{};
  const double v_o_max = config.ocean.v_o_max.value_or(field->v_o_max());

  OceanProblem problem(config, *field, sigma > 0.0 ? measured : *field, sigma == 0.0, v_o_max);
  Episode ep = run_episode(problem, config.noise, config.mode);
  EpisodeReport rep = finish(config, std::move(ep), field, options);
  rep.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

EpisodeReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  switch (config.kind) {
    case ScenarioKind::d2d:
      return run_d2d(config, options);
    case ScenarioKind::ocean:
      return run_ocean(config, options);
    case ScenarioKind::adversary:
      break;
  }
  throw std::invalid_argument("adversary configs are run with run_adversary");
}

AdversaryResult run_adversary(int T, double W, AdversaryPolicy policy, std::uint64_t seed, double margin) {
  if (T < 1 || !(W > 0.0)) throw std::invalid_argument("run_adversary needs T >= 1 and W > 0");
  AdversaryResult out;
  out.x.reserve(T);
  out.w.reserve(T);
  double x = 0.0;
  std::uniform_real_distribution<double> uniform(-W, W);
  for (int t = 1; t <= T; ++t) {
    if (policy == AdversaryPolicy::zero) {
      x = 0.0;
    } else if (policy == AdversaryPolicy::random) {
      auto rng = make_rng(seed, Stream::adversary, static_cast<std::uint64_t>(t));
      x = uniform(rng);
    }
    x = std::clamp(x, -W, W);
    const double w = x >= 0.0 ? -W : W;
    out.x.push_back(x);
    out.w.push_back(w);
    out.regret += 0.5 * (x - w) * (x - w);
    if (policy == AdversaryPolicy::ioga) {
      // Gradient of -(x - w)^2 / 2 is w - x; L = 1.
      x = std::clamp(x + (w - x) / (margin * 1.0), -W, W);
    }
  }
  return out;
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param, double value) {
  ScenarioConfig c = base;
  auto as_int = [&](const char* key) {
    if (!std::isfinite(value) || value != std::floor(value)) throw SchemaError(key, "sweep value must be an integer");
    return static_cast<int>(value);
  };
  switch (param) {
    case SweepParam::delta:
      c.delta = as_int("delta_slots");
      c.horizon.reset();
      break;
    case SweepParam::horizon:
      c.horizon = as_int("horizon_slots");
      break;
    case SweepParam::noise_sigma:
      if (c.kind == ScenarioKind::ocean) {
        c.ocean.perturbation_sigma_fraction = value;
      } else {
        c.d2d.peer.noise_std = value;
      }
      break;
  }
  resolve(c);
  return c;
}

std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepParam param, std::span<const double> values,
                            const RunOptions& options) {
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    SweepRow row;
    row.param = param;
    row.value = v;
    try {
      const ScenarioConfig c = apply_sweep_value(base, param, v);
      row.report = run_scenario(c, options);
    } catch (const std::exception& e) {
      row.error = e.what();
      row.exit_code = exit_code_for(e);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::d2d:
      return "d2d";
    case ScenarioKind::ocean:
      return "ocean";
    case ScenarioKind::adversary:
      return "adversary";
  }
  return "?";
}

const char* to_string(SweepParam param) {
  switch (param) {
    case SweepParam::delta:
      return "delta";
    case SweepParam::noise_sigma:
      return "noise_sigma";
    case SweepParam::horizon:
      return "horizon";
  }
  return "?";
}

}  // namespace trajsim
