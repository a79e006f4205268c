#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support/instances.hpp"
#include "trajsim/ocean_field.hpp"
#include "trajsim/offline.hpp"
#include "trajsim/scenarios.hpp"
#include "trajsim/sets.hpp"

using namespace trajsim;
namespace ts = trajsim::testing;

static void BM_OceanEpisode(benchmark::State& state) {
  const auto c = ts::ocean_long(static_cast<int>(state.range(0)));
  const auto field = build_field(c);
  for (auto _ : state) benchmark::DoNotOptimize(run_ocean(c, {}, &field).metrics.energy_online);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OceanEpisode)->Arg(2000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_D2DEpisode(benchmark::State& state) {
  const auto c = ts::d2d_fig4(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_d2d(c).metrics.avg_rate);
}
BENCHMARK(BM_D2DEpisode)->Arg(4)->Arg(24)->Unit(benchmark::kMicrosecond);

static void BM_SolveOffline(benchmark::State& state) {
  const auto c = ts::d2d_drift(static_cast<int>(state.range(0)), 1);
  const auto r = run_d2d(c);
  const auto p = offline_problem(c, r.episode);
  for (auto _ : state) benchmark::DoNotOptimize(solve_offline(p).utility);
}
BENCHMARK(BM_SolveOffline)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_DpOracle(benchmark::State& state) {
  OfflineProblem p;
  p.start = {1, 1};
  for (int t = 0; t < 4; ++t) p.utilities.push_back(LeadingPathUtility{{2.0 * t, 1.5 * t}, 1.0, 0.3, D2DUtilityKind::huber});
  for (int t = 0; t < 3; ++t) p.caps.push_back(PairCap{t, {}, 2.0});
  const int n = static_cast<int>(state.range(0));
  const GridSpec grid{Box2D{{0, 0}, {10, 10}}, n, n};
  for (auto _ : state) benchmark::DoNotOptimize(dp_oracle(p, grid).utility);
}
BENCHMARK(BM_DpOracle)->Arg(11)->Arg(21)->Unit(benchmark::kMillisecond);

static void BM_Projections(benchmark::State& state) {
  std::vector<Vec2> hex;
  for (int k = 0; k < 6; ++k) {
    const double a = k * std::numbers::pi / 3;
    hex.push_back({std::cos(a), std::sin(a)});
  }
  const FeasibleSet sets[] = {Box2D{{-1, -1}, {1, 1}}, Ball2D{{0, 0}, 1}, ConvexPolygon2D::from_vertices(hex)};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3);
  std::vector<Vec2> pts(1024);
  for (auto& q : pts) q = {u(rng), u(rng)};
  const auto& set = sets[state.range(0)];
  for (auto _ : state) {
    for (const auto& q : pts) benchmark::DoNotOptimize(project(q, set));
  }
  state.SetItemsProcessed(state.iterations() * pts.size());
}
BENCHMARK(BM_Projections)->DenseRange(0, 2);

static void BM_SampleVelocity(benchmark::State& state) {
  const auto f = synth_field(SingleGyre{{0, 0}, 1.0, 2000}, Axis{-5000, 5000, 100}, Axis{-5000, 5000, 100},
                             Axis{0, 36000, 10});
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-5000, 5000), t(0, 36000);
  std::vector<std::pair<Vec2, double>> q(1024);
  for (auto& e : q) e = {{u(rng), u(rng)}, t(rng)};
  for (auto _ : state) {
    for (const auto& [x, s] : q) benchmark::DoNotOptimize(sample_velocity(f, x, s));
  }
  state.SetItemsProcessed(state.iterations() * q.size());
}
BENCHMARK(BM_SampleVelocity);
BENCHMARK_MAIN();
