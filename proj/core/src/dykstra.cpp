#include "trajsim/dykstra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace trajsim {

namespace {

// Correction Dykstra keeps per constraint: two points for a pair cap, one
// point for a membership constraint (second slot unused).
using Increment = std::array<Vec2, 2>;

void check_index(int index, int extent, std::size_t n) {
  if (index < 0 || static_cast<std::size_t>(index + extent) >= n) {
    throw std::out_of_range("constraint index " + std::to_string(index) + " outside sequence");
  }
}

void project_onto(std::vector<Vec2>& x, const CoupledConstraint& c, Increment& inc) {
  if (const auto* cap = std::get_if<PairCap>(&c)) {
    Vec2& a = x[cap->index];
    Vec2& b = x[cap->index + 1];
    const Vec2 za = a + inc[0];
    const Vec2 zb = b + inc[1];
    Vec2 pa = za;
    Vec2 pb = zb;
    const Vec2 rel = zb - za - cap->offset;
    const double len = norm(rel);
    if (len > cap->radius) {
      // Moving both endpoints by half the excess is the Euclidean projection
      // onto the cylinder ||b - a - offset|| <= r in R^4.
      const Vec2 shift = rel * ((len - cap->radius) / (2.0 * len));
      pa += shift;
      pb -= shift;
    }
    inc[0] = za - pa;
    inc[1] = zb - pb;
    a = pa;
    b = pb;
  } else {
    const auto& in = std::get<PointIn>(c);
    Vec2& p = x[in.index];
    const Vec2 z = p + inc[0];
    const Vec2 q = project(z, in.set);
    inc[0] = z - q;
    p = q;
  }
}

}  // namespace

DykstraNoConvergence::DykstraNoConvergence(DykstraResult best)
    : NoConvergence("Dykstra projection did not converge, residual violation " +
                        std::to_string(best.violation),
                    best.violation),
      best_(std::move(best)) {}

double max_violation(std::span<const Vec2> points, std::span<const CoupledConstraint> constraints) {
  double worst = 0.0;
  for (const auto& c : constraints) {
    if (const auto* cap = std::get_if<PairCap>(&c)) {
      worst = std::max(worst, cap->value(points[cap->index], points[cap->index + 1]));
    } else {
      const auto& in = std::get<PointIn>(c);
      worst = std::max(worst, distance_to(points[in.index], in.set));
    }
  }
  return worst;
}

DykstraResult dykstra_project(std::span<const Vec2> points,
                              std::span<const CoupledConstraint> constraints,
                              const DykstraOptions& options) {
  for (const auto& c : constraints) {
    if (const auto* cap = std::get_if<PairCap>(&c)) {
      check_index(cap->index, 1, points.size());
      if (cap->radius < 0.0) throw std::invalid_argument("negative cap radius");
    } else {
      check_index(std::get<PointIn>(c).index, 0, points.size());
    }
  }

  DykstraResult result;
  result.points.assign(points.begin(), points.end());
  result.violation = max_violation(result.points, constraints);
  if (result.violation <= options.tol) return result;

  std::vector<Increment> increments(constraints.size(), Increment{});
  std::vector<Vec2> previous;
  const std::size_t m = constraints.size();
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    previous = result.points;
    for (std::size_t i = 0; i < m; ++i) project_onto(result.points, constraints[i], increments[i]);
    for (std::size_t i = m; i-- > 0;) project_onto(result.points, constraints[i], increments[i]);

    double change = 0.0;
    for (std::size_t k = 0; k < previous.size(); ++k) {
      change = std::max({change, std::abs(result.points[k].x - previous[k].x),
                         std::abs(result.points[k].y - previous[k].y)});
    }
    result.iterations = iter;
    result.violation = max_violation(result.points, constraints);
    if (result.violation <= options.tol && change <= options.tol) return result;
  }
  throw DykstraNoConvergence(std::move(result));
}

}  // namespace trajsim
