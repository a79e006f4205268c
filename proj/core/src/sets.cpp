#include "trajsim/sets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "trajsim/errors.hpp"

namespace trajsim {

namespace {

constexpr double kMembershipTol = 1e-9;
constexpr double kNormalTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Box2D Box2D::unbounded() {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return {{-inf, -inf}, {inf, inf}};
}

bool Box2D::bounded() const {
  return std::isfinite(lo.x) && std::isfinite(lo.y) && std::isfinite(hi.x) && std::isfinite(hi.y);
}

bool Box2D::valid() const { return lo.x <= hi.x && lo.y <= hi.y; }

ConvexPolygon2D::ConvexPolygon2D(std::vector<Halfspace> halfspaces)
    : halfspaces_(std::move(halfspaces)) {
  if (halfspaces_.empty()) throw DegenerateSet("polygon needs at least one halfspace");
  for (const auto& h : halfspaces_) {
    if (std::abs(norm(h.normal) - 1.0) > kNormalTol) {
      throw std::invalid_argument("polygon halfspace normal is not unit length");
    }
  }
}

ConvexPolygon2D ConvexPolygon2D::from_vertices(std::span<const Vec2> ccw_vertices) {
  if (ccw_vertices.size() < 3) throw DegenerateSet("polygon needs at least three vertices");
  std::vector<Halfspace> hs;
  hs.reserve(ccw_vertices.size());
  for (std::size_t i = 0; i < ccw_vertices.size(); ++i) {
    const Vec2 a = ccw_vertices[i];
    const Vec2 b = ccw_vertices[(i + 1) % ccw_vertices.size()];
    const Vec2 edge = b - a;
    const double len = norm(edge);
    if (len == 0.0) throw DegenerateSet("repeated polygon vertex");
    // Outward normal of a counter-clockwise edge.
    const Vec2 n{edge.y / len, -edge.x / len};
    hs.push_back({n, dot(n, a)});
  }
  return ConvexPolygon2D(std::move(hs));
}

double ConvexPolygon2D::violation(const Vec2& p) const {
  double worst = 0.0;
  for (const auto& h : halfspaces_) worst = std::max(worst, dot(h.normal, p) - h.offset);
  return worst;
}

Vec2 project_box(const Vec2& p, const Box2D& b) {
  return {std::clamp(p.x, b.lo.x, b.hi.x), std::clamp(p.y, b.lo.y, b.hi.y)};
}

Vec2 project_ball(const Vec2& p, const Ball2D& ball) {
  const Vec2 diff = p - ball.center;
  const double dist = norm(diff);
  if (dist <= ball.radius) return p;
  return ball.center + diff * (ball.radius / dist);
}

Vec2 project_polygon(const Vec2& p, const ConvexPolygon2D& poly) {
  const auto& hs = poly.halfspaces();
  if (poly.violation(p) <= 0.0) return p;

  std::optional<Vec2> best;
  double best_dist = std::numeric_limits<double>::infinity();
  auto consider = [&](const Vec2& q) {
    if (poly.violation(q) > kMembershipTol) return;
    const double d = norm_sq(q - p);
    if (d < best_dist) {
      best_dist = d;
      best = q;
    }
  };

  // Edge interiors: foot of the perpendicular onto each supporting line.
  for (const auto& h : hs) consider(p - h.normal * (dot(h.normal, p) - h.offset));
  // Vertices: pairwise intersections of supporting lines.
  for (std::size_t i = 0; i < hs.size(); ++i) {
    for (std::size_t j = i + 1; j < hs.size(); ++j) {
      const double det = cross(hs[i].normal, hs[j].normal);
      if (std::abs(det) < 1e-14) continue;
      const Vec2 v{(hs[i].offset * hs[j].normal.y - hs[j].offset * hs[i].normal.y) / det,
                   (hs[i].normal.x * hs[j].offset - hs[j].normal.x * hs[i].offset) / det};
      consider(v);
    }
  }
  if (!best) throw DegenerateSet("polygon is empty");
  return *best;
}

Vec2 project(const Vec2& p, const FeasibleSet& set) {
  return std::visit(Overloaded{[&](const Box2D& b) { return project_box(p, b); },
                               [&](const Ball2D& b) { return project_ball(p, b); },
                               [&](const ConvexPolygon2D& poly) { return project_polygon(p, poly); }},
                    set);
}

double distance_to(const Vec2& p, const FeasibleSet& set) { return distance(p, project(p, set)); }

bool contains(const FeasibleSet& set, const Vec2& p, double tol) {
  return std::visit(
      Overloaded{[&](const Box2D& b) {
                   return p.x >= b.lo.x - tol && p.x <= b.hi.x + tol && p.y >= b.lo.y - tol &&
                          p.y <= b.hi.y + tol;
                 },
                 [&](const Ball2D& b) { return distance(p, b.center) <= b.radius + tol; },
                 [&](const ConvexPolygon2D& poly) { return poly.violation(p) <= tol; }},
      set);
}

}  // namespace trajsim
