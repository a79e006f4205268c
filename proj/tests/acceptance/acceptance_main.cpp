// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../support/instances.hpp"
#include "trajsim/engine.hpp"
#include "trajsim/metrics.hpp"
#include "trajsim/objectives.hpp"
#include "trajsim/offline.hpp"
#include "trajsim/ocean_field.hpp"
#include "trajsim/scenarios.hpp"
#include "trajsim/trace_io.hpp"

using namespace trajsim;
namespace ts = trajsim::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Adversary lower bound.
Outcome adversary_bound() {
  const auto t0 = Clock::now();
  const double zero = run_adversary(100, 1.0, AdversaryPolicy::zero).regret;
  const double ioga = run_adversary(100, 1.0, AdversaryPolicy::ioga).regret;
  const double random = run_adversary(100, 1.0, AdversaryPolicy::random, 5).regret;
  const double dt = seconds_since(t0);
  const bool ok = zero == 50.0 && ioga >= 50.0 - 1e-9 && random >= 50.0 - 1e-9 && dt < 1.0;
  return {ok, fmt("zero=%.17g ioga=%.6g random=%.6g time=%.3fs", zero, ioga, random, dt)};
}

// 2. Regret grows sublinearly: log-log slope over T = 32..1024.
Outcome regret_slope() {
  const auto t0 = Clock::now();
  const std::vector<int> horizons{32, 64, 128, 256, 512, 1024};
  const std::vector<std::uint64_t> seeds{1, 2, 3};
  std::vector<double> lx, ly;
  std::string detail;
  int unconverged = 0;
  for (int T : horizons) {
    double sum = 0.0;
    for (auto seed : seeds) {
      const EpisodeReport r = run_d2d(ts::d2d_drift(T, seed), RunOptions{true});
      sum += r.metrics.regret;
      if (!r.offline->converged) ++unconverged;
    }
    const double mean = sum / seeds.size();
    lx.push_back(std::log(T));
    ly.push_back(std::log(std::max(mean, 1e-300)));
    detail += fmt("T=%d:%.4g ", T, mean);
  }
  const double n = lx.size();
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / n, my += ly[i] / n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  const double dt = seconds_since(t0);
  return {slope <= 0.75 && dt < 60.0 && unconverged == 0,
          detail + fmt("slope=%.4f unconverged_offline=%d time=%.1fs", slope, unconverged, dt)};
}

// 3. Gaussian noise with eps0 = 0 is the noiseless algorithm, bit for bit.
Outcome noise_zero() {
  bool same = true;
  std::string detail;
  for (int kind = 0; kind < 2; ++kind) {
    ScenarioConfig a = kind == 0 ? ts::d2d_fig4(4) : ts::ocean_away(1, LambdaStrategy::direction_dependent);
    a.noise = NoiseModel{NoiseKind::none, 0.0, 0.0, a.seed};
    ScenarioConfig b = a;
    b.noise = NoiseModel{NoiseKind::gaussian_decaying, 0.0, 1.0, a.seed};
    const auto ta = format_trace(trace_rows(run_scenario(a)));
    const auto tb = format_trace(trace_rows(run_scenario(b)));
    same = same && ta == tb;
    detail += fmt("%s:%s ", kind == 0 ? "d2d" : "ocean", ta == tb ? "identical" : "differ");
  }
  return {same, detail};
}

// 4. Direction-dependent lambda spends no more energy than increasing lambda.
Outcome table2_ordering() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string detail;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const double dir = run_ocean(ts::ocean_away(seed, LambdaStrategy::direction_dependent)).metrics.energy_online;
    const double inc = run_ocean(ts::ocean_away(seed, LambdaStrategy::increasing)).metrics.energy_online;
    ok = ok && dir <= inc;
    detail += fmt("seed%llu dir=%.10g inc=%.10g (rel %+.2g); ", static_cast<unsigned long long>(seed), dir, inc,
                  (inc - dir) / inc);
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 10.0, detail + fmt("time=%.2fs", dt)};
}

// 5. Average D2D rate does not drop as the delay budget grows.
Outcome fig4a_rate() {
  const auto t0 = Clock::now();
  const std::vector<double> deltas{0, 1, 2, 4, 6, 8};
  const auto rows = sweep(ts::d2d_fig4(0), SweepParam::delta, deltas);
  bool ok = true;
  std::string detail;
  double prev = -1.0;
  for (const auto& row : rows) {
    if (!row.report) return {false, "row failed: " + row.error};
    const double r = row.report->metrics.avg_rate;
    if (prev >= 0.0 && r < prev * (1.0 - 0.01)) ok = false;
    prev = r;
    detail += fmt("d=%g:%.4g ", row.value, r);
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 10.0, detail + fmt("(bit/s) time=%.2fs", dt)};
}

// 6. Final distance to the destination shrinks with the delay budget.
Outcome fig4b_distance() {
  const std::vector<double> deltas{0, 4, 8, 12, 16, 24};
  const ScenarioConfig base = ts::d2d_fig4(0);
  const auto rows = sweep(base, SweepParam::delta, deltas);
  bool ok = true;
  std::string detail;
  double prev = INFINITY;
  for (const auto& row : rows) {
    if (!row.report) return {false, "row failed: " + row.error};
    const double d = row.report->metrics.final_goal_distance;
    if (d > prev) ok = false;
    prev = d;
    detail += fmt("d=%g:%.4g ", row.value, d);
  }
  ok = ok && prev <= base.v_max;
  return {ok, detail + fmt("v_max=%.4g", base.v_max)};
}

// 7. Offline solver against the grid oracle.
OfflineProblem random_small_problem(std::mt19937_64& rng, int index) {
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  OfflineProblem p;
  p.region = Box2D{{0.0, 0.0}, {10.0, 10.0}};
  p.start = {coord(rng), coord(rng)};
  const int T = 3 + static_cast<int>(unit(rng) * 3.0);  // 3..5
  const double v = 1.0 + 2.0 * unit(rng);
  const bool ocean = index % 2 == 1;
  Vec2 prev = p.start;
  for (int t = 1; t <= T; ++t) {
    if (ocean) {
      const Vec2 current{0.4 * v * (unit(rng) - 0.5), 0.4 * v * (unit(rng) - 0.5)};
      p.utilities.push_back(OceanUtility{{coord(rng), coord(rng)}, current, prev, unit(rng)});
      if (t < T) p.caps.push_back(PairCap{t - 1, current, v});
    } else {
      const auto kind = index % 4 == 0 ? D2DUtilityKind::squared : D2DUtilityKind::huber;
      p.utilities.push_back(LeadingPathUtility{{coord(rng), coord(rng)}, v, 0.05 + 0.9 * unit(rng), kind});
      if (t < T) p.caps.push_back(PairCap{t - 1, {}, v});
    }
    prev = {coord(rng), coord(rng)};
  }
  return p;
}

Outcome oracle_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  bool ok = true;
  double worst_gap = -INFINITY;
  int refinement_drops = 0;
  for (int i = 0; i < 10; ++i) {
    const OfflineProblem p = random_small_problem(rng, i);
    const OfflineSolution off = solve_offline(p);
    const OracleSolution coarse = dp_oracle(p, GridSpec{Box2D{{0, 0}, {10, 10}}, 21, 21});
    const OracleSolution fine = dp_oracle(p, GridSpec{Box2D{{0, 0}, {10, 10}}, 41, 41});
    const double gap = fine.utility - off.utility;  // must stay <= 1e-3
    worst_gap = std::max(worst_gap, gap);
    if (gap > 1e-3 || !off.converged) ok = false;
    if (fine.utility < coarse.utility) ++refinement_drops, ok = false;
  }
  const double dt = seconds_since(t0);
  return {ok && dt < 30.0, fmt("max(oracle41 - offline)=%.3g refinement_drops=%d time=%.2fs", worst_gap,
                               refinement_drops, dt)};
}

// 8. Feasibility of executed steps and of the ocean step-size root.
Outcome feasibility() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_slack = -INFINITY;
  std::size_t d2d_steps = 0, ocean_steps = 0;

  for (std::uint64_t seed = 1; d2d_steps < 1000; ++seed) {
    ScenarioConfig c = ts::d2d_fig4(static_cast<int>(seed % 9), seed);
    c.d2d.utility = seed % 2 ? D2DUtilityKind::huber : D2DUtilityKind::squared;
    c.d2d.alpha = 0.3 + 0.7 * unit(rng);
    c.d2d.alpha_min = 0.01;
    c.noise.eps0 = 5.0 * unit(rng);
    resolve(c);
    for (const auto& s : run_d2d(c).episode.steps) worst_slack = std::max(worst_slack, s.constraint_slack);
    d2d_steps += c.T - 1;
  }
  for (std::uint64_t seed = 1; ocean_steps < 1000; ++seed) {
    ScenarioConfig c = ts::ocean_away(seed, seed % 2 ? LambdaStrategy::increasing : LambdaStrategy::direction_dependent);
    c.noise = NoiseModel{NoiseKind::gaussian_decaying, 50.0 * unit(rng), 0.5, seed};
    c.ocean.perturbation_sigma_fraction = 0.1 * unit(rng);
    resolve(c);
    for (const auto& s : run_ocean(c).episode.steps) worst_slack = std::max(worst_slack, s.constraint_slack);
    ocean_steps += c.T - 1;
  }

  // Root post-check: equality at the unclamped root, strict inequality once clamped.
  double worst_root_err = 0.0;
  bool clamped_strict = true;
  int roots = 0, clamped = 0;
  for (int i = 0; i < 1000; ++i) {
    const double reach = 0.5 + 2.0 * unit(rng);
    const double ang = 2.0 * std::numbers::pi * unit(rng);
    const double speed = 0.95 * reach * unit(rng);
    const Vec2 v_o{speed * std::cos(ang), speed * std::sin(ang)};
    const double scale = std::pow(10.0, 4.0 * unit(rng) - 2.0);
    const Vec2 g{scale * (unit(rng) - 0.5), scale * (unit(rng) - 0.5)};
    const double gamma = ocean_step_size(g, v_o, 1.0, reach, 2.0, 1.01);
    const double rel = norm(g / gamma - v_o);
    if (gamma > 2.02) {
      ++roots;
      worst_root_err = std::max(worst_root_err, std::abs(rel - reach) / reach);
    } else {
      ++clamped;
      if (!(rel < reach)) clamped_strict = false;
    }
  }
  const bool ok = worst_slack <= 1e-9 && worst_root_err <= 1e-12 && clamped_strict && roots > 0 && clamped > 0;
  return {ok, fmt("d2d_steps=%zu ocean_steps=%zu max_slack=%.3g root_rel_err=%.3g (n=%d) clamped_strict=%s (n=%d)",
                  d2d_steps, ocean_steps, worst_slack, worst_root_err, roots, clamped_strict ? "yes" : "no",
                  clamped)};
}

// 9. Analytic gradients against central differences; combined vs piecewise D2D form.
Vec2 central_difference(const std::function<double(const Vec2&)>& f, const Vec2& x, double h) {
  return {(f(x + Vec2{h, 0}) - f(x - Vec2{h, 0})) / (2 * h), (f(x + Vec2{0, h}) - f(x - Vec2{0, h})) / (2 * h)};
}

Outcome gradient_correctness() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = 1e-5;
  double worst_d2d = 0.0, worst_ocean = 0.0, worst_forms = 0.0;
  int checked = 0;
  while (checked < 1000) {
    const Vec2 x{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const Vec2 ell{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const double v = 0.5 + 5 * unit(rng);
    const double mu = 0.01 + 0.98 * unit(rng);
    if (std::abs(distance(x, ell) - v) < 1e-3) continue;
    const Vec2 g = d2d_gradient(x, ell, v, mu);
    const Vec2 fd = central_difference([&](const Vec2& p) { return -huber_value(distance(p, ell), v, mu); }, x, h);
    worst_d2d = std::max(worst_d2d, norm(g - fd) / std::max(norm(g), 1e-12));
    ++checked;
  }
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const Vec2 xp{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const Vec2 d{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const Vec2 vo{2 * unit(rng) - 1, 2 * unit(rng) - 1};
    const double lam = unit(rng);
    const Vec2 g = ocean_gradient(x, d, vo, lam);
    const Vec2 fd = central_difference([&](const Vec2& p) { return ocean_utility(p, xp, d, vo, lam); }, x, h);
    worst_ocean = std::max(worst_ocean, norm(g - fd) / std::max(norm(g), 1e-12));
  }
  for (int i = 0; i < 10000; ++i) {
    const Vec2 x{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const Vec2 ell{20 * unit(rng) - 10, 20 * unit(rng) - 10};
    const double v = 0.5 + 5 * unit(rng);
    const double mu = 0.01 + 0.99 * unit(rng);
    const Vec2 a = d2d_gradient(x, ell, v, mu);
    const Vec2 b = d2d_gradient_piecewise(x, ell, v, mu);
    worst_forms = std::max({worst_forms, std::abs(a.x - b.x), std::abs(a.y - b.y)});
  }
  const bool ok = worst_d2d <= 1e-6 && worst_ocean <= 1e-6 && worst_forms <= 1e-12;
  return {ok, fmt("d2d_fd_rel=%.3g ocean_fd_rel=%.3g combined_vs_piecewise=%.3g", worst_d2d, worst_ocean,
                  worst_forms)};
}

// 10. Corrected Huber loss is C1 at d = v_max.
Outcome huber_c1() {
  double worst_value = 0.0, worst_slope = 0.0;
  for (double mu : {0.1, 0.5, 0.9}) {
    for (double v : {0.5, 1.0, 37.26779962499649}) {
      worst_value = std::max(worst_value, std::abs(huber_quadratic_branch(v) - huber_linear_branch(v, v, mu)));
      // Gradient norm on each side: d for the quadratic branch, v(1-mu) + mu d beyond it.
      const double inside = v;
      const double outside = v * (1.0 - mu) + mu * v;
      worst_slope = std::max(worst_slope, std::abs(inside - outside));
      const Vec2 ell{v, 0.0};
      const Vec2 gin = d2d_gradient_piecewise({0, 0}, ell * (1.0 - 1e-15), v, mu);
      const Vec2 gout = d2d_gradient_piecewise({0, 0}, ell * (1.0 + 1e-15), v, mu);
      worst_slope = std::max(worst_slope, std::abs(norm(gin) - norm(gout)));
    }
  }
  const double printed_jump = std::abs(huber_quadratic_branch(1.0) - huber_linear_branch(1.0, 1.0, 0.5, HuberConstant::printed));
  const bool ok = worst_value <= 1e-10 && worst_slope <= 1e-10;
  return {ok, fmt("value_jump=%.3g slope_jump=%.3g (printed constant jump at mu=0.5: %.3g)", worst_value, worst_slope,
                  printed_jump)};
}

// 11. Direction-dependent lambda at the table cells.
Outcome table1_cells() {
  const double a = lambda_direction(1.0, 0.0);
  double worst_weak = 0.0;
  for (int i = 0; i <= 16; ++i) {
    const double theta = std::numbers::pi * i / 16.0;
    worst_weak = std::max(worst_weak, std::abs(lambda_direction(1e-13, theta) - 1.0));
  }
  const double c = lambda_direction(0.5, std::numbers::pi / 2.0);
  const bool ok = a == 0.0 && worst_weak <= 1e-12 && std::abs(c - 0.75) <= 1e-15;
  return {ok, fmt("lambda(1,0)=%.17g max|lambda(~0,theta)-1|=%.3g lambda(0.5,pi/2)=%.17g", a, worst_weak, c)};
}

// 12. Energy model c_d |V_r|^3 t.
Outcome energy_formula() {
  const std::vector<Vec2> still{{0, 0}, {6, 0}};  // 2 m/s for 3 s in still water
  const double e = energy_cost(still, nullptr, 1.0, 3.0);
  const VelocityField field = synth_field(UniformFlow{0.5, 0.25}, Axis{-10, 10, 3}, Axis{-10, 10, 3}, Axis{0, 0, 1});
  const std::vector<Vec2> drift{{0, 0}, {1, 0.5}, {2, 1}};  // moves exactly with the current, dt = 2 s
  const double z = energy_cost(drift, &field, 1.0, 2.0);
  return {e == 24.0 && z == 0.0, fmt("powered=%.17g J drift=%.17g J", e, z)};
}

// 13. Long ocean episode on a 100 x 100 x 10 field.
Outcome performance() {
  const ScenarioConfig c = ts::ocean_long(10000);
  const VelocityField field = build_field(c);
  const auto t0 = Clock::now();
  const EpisodeReport r = run_ocean(c, {}, &field);
  const double dt = seconds_since(t0);
  const bool ok = dt < 1.0 && static_cast<int>(r.episode.trajectory.size()) == 10000;
  return {ok, fmt("T=%d nodes=%zu time=%.3fs", r.T, field.u().size(), dt)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"adversary lower bound", adversary_bound},
      {"regret sublinear in T", regret_slope},
      {"zero noise equals noiseless", noise_zero},
      {"direction-dependent lambda saves energy", table2_ordering},
      {"average rate nondecreasing in delay", fig4a_rate},
      {"final distance shrinks with delay", fig4b_distance},
      {"offline solver vs grid oracle", oracle_equivalence},
      {"executed steps feasible", feasibility},
      {"gradients match finite differences", gradient_correctness},
      {"huber loss is C1", huber_c1},
      {"lambda table cells", table1_cells},
      {"energy formula", energy_formula},
      {"10^4-slot ocean episode under 1 s", performance},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
