#pragma once

#include <span>
#include <variant>
#include <vector>

#include "trajsim/errors.hpp"
#include "trajsim/sets.hpp"
#include "trajsim/vec2.hpp"

namespace trajsim {

/// ||x[index + 1] - x[index] - offset|| <= radius  (0-based indices).
struct PairCap {
  int index = 0;
  Vec2 offset;
  double radius = 0.0;

  double value(const Vec2& from, const Vec2& to) const { return norm(to - from - offset) - radius; }
};

/// x[index] must lie in `set`.
struct PointIn {
  int index = 0;
  FeasibleSet set;
};

using CoupledConstraint = std::variant<PairCap, PointIn>;

struct DykstraOptions {
  int max_iter = 500;
  double tol = 1e-8;
};

struct DykstraResult {
  std::vector<Vec2> points;
  double violation = 0.0;
  int iterations = 0;
};

class DykstraNoConvergence : public NoConvergence {
 public:
  explicit DykstraNoConvergence(DykstraResult best);
  const DykstraResult& best() const { return best_; }

 private:
  DykstraResult best_;
};

/// Largest violation of any constraint on the sequence.
double max_violation(std::span<const Vec2> points, std::span<const CoupledConstraint> constraints);

/// Euclidean projection of a point sequence onto the intersection of the
/// constraints by Dykstra's alternating projections (forward then backward
/// sweeps). Throws DykstraNoConvergence, carrying the last iterate, when the
/// violation is still above tol after max_iter sweeps.
DykstraResult dykstra_project(std::span<const Vec2> points,
                              std::span<const CoupledConstraint> constraints,
                              const DykstraOptions& options = {});

}  // namespace trajsim
