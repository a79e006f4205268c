#include <gtest/gtest.h>

#include <random>

#include "trajsim/errors.hpp"
#include "trajsim/sets.hpp"

using namespace trajsim;

namespace {

const Box2D kUnit{{0, 0}, {1, 1}};

ConvexPolygon2D unit_square() {
  const std::vector<Vec2> v{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  return ConvexPolygon2D::from_vertices(v);
}

void expect_vec(const Vec2& a, const Vec2& b, double tol = 1e-15) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
}

}  // namespace

TEST(ProjectBox, InteriorBoundaryAndOutside) {
  expect_vec(project_box({0.5, 0.5}, kUnit), {0.5, 0.5});
  expect_vec(project_box({2, -1}, kUnit), {1, 0});
  expect_vec(project_box({1, 1}, kUnit), {1, 1});
}

TEST(ProjectBox, UnboundedIsIdentity) {
  const Box2D all = Box2D::unbounded();
  EXPECT_FALSE(all.bounded());
  expect_vec(project_box({-1e12, 3e9}, all), {-1e12, 3e9});
}

TEST(ProjectBall, Cases) {
  expect_vec(project_ball({0.3, 0.4}, {{0, 0}, 1}), {0.3, 0.4});
  expect_vec(project_ball({3, 4}, {{0, 0}, 1}), {0.6, 0.8});
  expect_vec(project_ball({0, 0}, {{0, 0}, 0}), {0, 0});
  expect_vec(project_ball({5, 5}, {{1, 1}, 0}), {1, 1});
}

TEST(ProjectPolygon, SquareCases) {
  const auto sq = unit_square();
  expect_vec(project_polygon({0.25, 0.75}, sq), {0.25, 0.75});
  expect_vec(project_polygon({2, 0.5}, sq), {1, 0.5}, 1e-12);
  expect_vec(project_polygon({2, 2}, sq), {1, 1}, 1e-12);
}

TEST(ProjectPolygon, MatchesBoxOnRandomPoints) {
  const auto sq = unit_square();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 4);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 p{u(rng), u(rng)};
    expect_vec(project_polygon(p, sq), project_box(p, kUnit), 1e-12);
  }
}

TEST(ProjectPolygon, ProjectionIsNearestPoint) {
  const std::vector<Vec2> tri{{0, 0}, {4, 0}, {1, 3}};
  const auto poly = ConvexPolygon2D::from_vertices(tri);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-5, 8);
  std::uniform_real_distribution<double> w(0, 1);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p{u(rng), u(rng)};
    const Vec2 q = project_polygon(p, poly);
    EXPECT_LE(poly.violation(q), 1e-12);
    // No sampled point of the triangle is closer than the projection.
    for (int k = 0; k < 50; ++k) {
      double a = w(rng), b = w(rng);
      if (a + b > 1) a = 1 - a, b = 1 - b;
      const Vec2 z = tri[0] + (tri[1] - tri[0]) * a + (tri[2] - tri[0]) * b;
      EXPECT_LE(distance(p, q), distance(p, z) + 1e-12);
    }
  }
}

TEST(ProjectPolygon, RejectsEmptySet) {
  // x <= 0 and -x <= -1 cannot both hold.
  std::vector<Halfspace> hs{{{1, 0}, 0.0}, {{-1, 0}, -1.0}};
  EXPECT_THROW(project_polygon({0, 0}, ConvexPolygon2D(hs)), DegenerateSet);
}

TEST(FeasibleSet, ProjectIsIdempotent) {
  std::vector<FeasibleSet> sets{kUnit, Ball2D{{1, 2}, 0.5}, unit_square()};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-4, 4);
  for (const auto& s : sets) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 p{u(rng), u(rng)};
      const Vec2 q = project(p, s);
      EXPECT_TRUE(contains(s, q));
      expect_vec(project(q, s), q, 1e-12);
      EXPECT_NEAR(distance_to(p, s), distance(p, q), 1e-12);
    }
  }
}
