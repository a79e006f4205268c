#include "trajsim/offline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "trajsim/errors.hpp"

namespace trajsim {

namespace {

constexpr double kCapTol = 1e-12;

bool unbounded_box(const FeasibleSet& set) {
  const auto* b = std::get_if<Box2D>(&set);
  return b && std::isinf(b->lo.x) && std::isinf(b->lo.y) && std::isinf(b->hi.x) && std::isinf(b->hi.y);
}

}  // namespace

void OfflineProblem::validate() const {
  if (utilities.empty()) throw std::invalid_argument("offline problem needs at least one slot");
  if (caps.size() + 1 != utilities.size()) {
    throw HorizonMismatch("offline problem has " + std::to_string(utilities.size()) + " utilities but " +
                          std::to_string(caps.size()) + " caps");
  }
  for (std::size_t i = 0; i < caps.size(); ++i) {
    if (caps[i].index != static_cast<int>(i)) throw std::invalid_argument("cap indices must be 0..T-2 in order");
    if (caps[i].radius < 0.0) throw std::invalid_argument("negative cap radius");
  }
}

std::vector<CoupledConstraint> OfflineProblem::constraints() const {
  std::vector<CoupledConstraint> cs;
  cs.reserve(caps.size() + utilities.size() + 1);
  cs.push_back(PointIn{0, Ball2D{start, 0.0}});
  const bool free = unbounded_box(region);
  for (std::size_t i = 0; i < caps.size(); ++i) {
    cs.push_back(caps[i]);
    if (!free) cs.push_back(PointIn{static_cast<int>(i + 1), region});
  }
  return cs;
}

double OfflineProblem::total_utility(const std::vector<Vec2>& traj) const {
  if (traj.size() != utilities.size()) throw HorizonMismatch("trajectory length differs from the horizon");
  double sum = 0.0;
  for (std::size_t t = 0; t < traj.size(); ++t) sum += utility_value(utilities[t], traj[t]);
  return sum;
}

OfflineSolution solve_offline(const OfflineProblem& problem, const OfflineOptions& options,
                              const std::optional<std::vector<Vec2>>& warm_start) {
  problem.validate();
  const std::size_t T = problem.utilities.size();
  const auto constraints = problem.constraints();

  double L = 0.0;
  for (const auto& u : problem.utilities) L = std::max(L, smoothness(u));
  const double step = options.step > 0.0 ? options.step : 1.0 / L;

  OfflineSolution sol;
  auto restore = [&](const std::vector<Vec2>& pts) -> std::vector<Vec2> {
    try {
      return dykstra_project(pts, constraints, options.dykstra).points;
    } catch (const DykstraNoConvergence& e) {
      sol.warning = "feasibility restoration stopped at violation " + std::to_string(e.residual());
      return e.best().points;
    }
  };

  std::vector<Vec2> x;
  if (warm_start && warm_start->size() == T) {
    x = *warm_start;
  } else {
    x.assign(T, problem.start);
  }
  x = restore(x);
  double f = problem.total_utility(x);
  sol.trajectory = x;
  sol.utility = f;

  std::vector<Vec2> y(T);
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    for (std::size_t t = 0; t < T; ++t) y[t] = x[t] + step * utility_gradient(problem.utilities[t], x[t]);
    std::vector<Vec2> next = restore(y);
    const double f_next = problem.total_utility(next);
    double move = 0.0;
    for (std::size_t t = 0; t < T; ++t) move = std::max(move, norm(next[t] - x[t]));

    x = std::move(next);
    sol.iterations = iter;
    if (f_next >= sol.utility) {
      sol.utility = f_next;
      sol.trajectory = x;
    }
    const bool flat = std::abs(f_next - f) <= options.tol * std::max(1.0, std::abs(f_next));
    f = f_next;
    if (flat && move <= options.move_tol) {
      sol.converged = true;
      break;
    }
  }
  sol.violation = max_violation(sol.trajectory, constraints);
  if (!sol.converged) {
    if (!sol.warning.empty()) sol.warning += "; ";
    sol.warning += "offline solver reached " + std::to_string(options.max_iter) + " iterations";
  }
  return sol;
}

OracleSolution dp_oracle(const OfflineProblem& problem, const GridSpec& grid) {
  problem.validate();
  const int T = problem.horizon();
  if (T > 6) throw std::invalid_argument("dp_oracle is limited to T <= 6");
  if (grid.nx < 2 || grid.ny < 2 || grid.nx > 101 || grid.ny > 101) {
    throw std::invalid_argument("dp_oracle grid must be between 2x2 and 101x101");
  }
  if (!grid.box.bounded() || !grid.box.valid() || !(grid.box.hi.x > grid.box.lo.x) ||
      !(grid.box.hi.y > grid.box.lo.y)) {
    throw std::invalid_argument("dp_oracle needs a bounded box with positive extent");
  }

  const double hx = (grid.box.hi.x - grid.box.lo.x) / (grid.nx - 1);
  const double hy = (grid.box.hi.y - grid.box.lo.y) / (grid.ny - 1);
  auto node = [&](int i, int j) {
    return Vec2{i == grid.nx - 1 ? grid.box.hi.x : grid.box.lo.x + i * hx,
                j == grid.ny - 1 ? grid.box.hi.y : grid.box.lo.y + j * hy};
  };
  const std::size_t N = static_cast<std::size_t>(grid.nx) * grid.ny;
  std::vector<char> allowed(N);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) allowed[j * grid.nx + i] = contains(problem.region, node(i, j), 1e-12);
  }

  constexpr double kNone = -std::numeric_limits<double>::infinity();
  // layer t: value of the best path ending at node k; layer 0 is the start alone.
  std::vector<std::vector<double>> value(T, std::vector<double>(N, kNone));
  std::vector<std::vector<int>> parent(T, std::vector<int>(N, -1));
  const double u1 = utility_value(problem.utilities[0], problem.start);

  for (int t = 1; t < T; ++t) {
    const PairCap& cap = problem.caps[t - 1];
    auto relax = [&](const Vec2& from, double base, int from_id) {
      const Vec2 c = from + cap.offset;
      const double r = cap.radius + kCapTol;
      const int i0 = std::max(0, static_cast<int>(std::floor((c.x - r - grid.box.lo.x) / hx)));
      const int i1 = std::min(grid.nx - 1, static_cast<int>(std::ceil((c.x + r - grid.box.lo.x) / hx)));
      const int j0 = std::max(0, static_cast<int>(std::floor((c.y - r - grid.box.lo.y) / hy)));
      const int j1 = std::min(grid.ny - 1, static_cast<int>(std::ceil((c.y + r - grid.box.lo.y) / hy)));
      for (int j = j0; j <= j1; ++j) {
        for (int i = i0; i <= i1; ++i) {
          const int k = j * grid.nx + i;
          if (!allowed[k]) continue;
          const Vec2 p = node(i, j);
          if (cap.value(from, p) > kCapTol) continue;
          const double cand = base + utility_value(problem.utilities[t], p);
          if (cand > value[t][k]) {
            value[t][k] = cand;
            parent[t][k] = from_id;
          }
        }
      }
    };
    if (t == 1) {
      relax(problem.start, u1, -1);
    } else {
      for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
          const int k = j * grid.nx + i;
          if (value[t - 1][k] != kNone) relax(node(i, j), value[t - 1][k], k);
        }
      }
    }
    if (std::none_of(value[t].begin(), value[t].end(), [](double v) { return v != kNone; })) {
      throw GridTooCoarse("no grid node is reachable at slot " + std::to_string(t + 1));
    }
  }

  OracleSolution out;
  out.nodes = N;
  out.trajectory.assign(T, problem.start);
  if (T == 1) {
    out.utility = u1;
    return out;
  }
  const auto& last = value[T - 1];
  int k = static_cast<int>(std::max_element(last.begin(), last.end()) - last.begin());
  out.utility = last[k];
  for (int t = T - 1; t >= 1; --t) {
    out.trajectory[t] = node(k % grid.nx, k / grid.nx);
    k = parent[t][k];
  }
  return out;
}

}  // namespace trajsim
