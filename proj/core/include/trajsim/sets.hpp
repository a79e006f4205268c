#pragma once

#include <span>
#include <variant>
#include <vector>

#include "trajsim/vec2.hpp"

namespace trajsim {

/// Axis-aligned box. Infinite bounds are allowed, so the whole plane is a Box2D.
struct Box2D {
  Vec2 lo;
  Vec2 hi;

  static Box2D unbounded();
  bool bounded() const;
  bool valid() const;
};

struct Ball2D {
  Vec2 center;
  double radius = 0.0;
};

struct Halfspace {
  Vec2 normal;  // unit length
  double offset = 0.0;  // normal . p <= offset
};

/// Intersection of halfspaces. Construction validates unit normals.
class ConvexPolygon2D {
 public:
  explicit ConvexPolygon2D(std::vector<Halfspace> halfspaces);

  /// Counter-clockwise vertex list; produces one halfspace per edge.
  static ConvexPolygon2D from_vertices(std::span<const Vec2> ccw_vertices);

  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  /// Largest violation max_i (n_i . p - b_i), clipped at zero.
  double violation(const Vec2& p) const;

 private:
  std::vector<Halfspace> halfspaces_;
};

Vec2 project_box(const Vec2& p, const Box2D& b);
Vec2 project_ball(const Vec2& p, const Ball2D& ball);
/// Exact Euclidean projection. Throws DegenerateSet when the polygon is empty.
Vec2 project_polygon(const Vec2& p, const ConvexPolygon2D& poly);

using FeasibleSet = std::variant<Box2D, Ball2D, ConvexPolygon2D>;

Vec2 project(const Vec2& p, const FeasibleSet& set);
/// Euclidean distance from p to the set (0 inside).
double distance_to(const Vec2& p, const FeasibleSet& set);
bool contains(const FeasibleSet& set, const Vec2& p, double tol = 1e-9);

}  // namespace trajsim
