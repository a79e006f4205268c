#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajsim/dykstra.hpp"
#include "trajsim/objectives.hpp"
#include "trajsim/sets.hpp"

namespace trajsim {

/// Full-horizon problem: maximize sum_t U_t(x(t)) with x(1) = start, the pair caps
/// g_t(x(t), x(t+1)) <= 0 and x(t) in region.
struct OfflineProblem {
  Vec2 start;
  std::vector<SlotUtility> utilities;  // one per slot, T entries
  std::vector<PairCap> caps;           // T - 1 entries, caps[i].index == i
  FeasibleSet region = Box2D::unbounded();

  int horizon() const { return static_cast<int>(utilities.size()); }
  void validate() const;
  std::vector<CoupledConstraint> constraints() const;
  double total_utility(const std::vector<Vec2>& traj) const;
};

struct OfflineOptions {
  double step = 0.0;  // 0 selects 1 / L
  int max_iter = 100000;
  double tol = 1e-10;           // on the per-iteration utility change, relative to max(1, |U|)
  double move_tol = 1e-7;       // largest waypoint movement at convergence, m
  DykstraOptions dykstra{5000, 1e-11};
};

struct OfflineSolution {
  std::vector<Vec2> trajectory;
  double utility = 0.0;
  double violation = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string warning;  // empty when converged cleanly
};

/// Projected gradient ascent on the stacked trajectory. Each iterate is restored
/// to feasibility with dykstra_project. Failing to converge is not an error: the
/// best iterate is returned with converged = false and a warning.
OfflineSolution solve_offline(const OfflineProblem& problem, const OfflineOptions& options = {},
                              const std::optional<std::vector<Vec2>>& warm_start = std::nullopt);

struct GridSpec {
  Box2D box;
  int nx = 41;
  int ny = 41;
};

struct OracleSolution {
  std::vector<Vec2> trajectory;
  double utility = 0.0;
  std::size_t nodes = 0;
};

/// Exact maximizer over lattice trajectories (x(1) = start, later slots on the
/// grid nodes inside the region). Requires T <= 6 and a grid of at most 101 x 101.
/// Throws GridTooCoarse when some slot has no reachable node.
OracleSolution dp_oracle(const OfflineProblem& problem, const GridSpec& grid);

}  // namespace trajsim
