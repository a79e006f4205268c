#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "trajsim/errors.hpp"
#include "trajsim/objectives.hpp"

using namespace trajsim;

// Reference values below come from tests/oracles/derived_values.py.

TEST(LeadingPath, Endpoints) {
  EXPECT_EQ(leading_path({1, 2}, {5, 6}, 1.0), (Vec2{1, 2}));
  EXPECT_EQ(leading_path({1, 2}, {5, 6}, 0.0), (Vec2{5, 6}));
  EXPECT_EQ(leading_path({0, 0}, {2, 4}, 0.5), (Vec2{1, 2}));
}

TEST(Huber, BranchesAndContinuity) {
  EXPECT_DOUBLE_EQ(huber_value(0.5, 1.0, 0.5), 0.125);
  EXPECT_DOUBLE_EQ(huber_quadratic_branch(1.0), 0.5);
  EXPECT_DOUBLE_EQ(huber_linear_branch(1.0, 1.0, 0.5), 0.5);
  EXPECT_DOUBLE_EQ(huber_value(2.0, 1.0, 0.5), 1.75);
}

TEST(Huber, PrintedConstantJumps) {
  const double jump = huber_linear_branch(1.0, 1.0, 0.5, HuberConstant::printed) - huber_quadratic_branch(1.0);
  EXPECT_NEAR(jump, -0.125, 1e-15);
}

TEST(Huber, MidpointStrongConcavity) {
  // U + (mu/2)|x|^2 stays concave along random segments.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-6, 6);
  const double v = 1.5, mu = 0.3;
  const Vec2 ell{0.5, -1.0};
  const LeadingPathUtility U{ell, v, mu, D2DUtilityKind::huber};
  auto f = [&](const Vec2& x) { return U.value(x) + 0.5 * mu * norm_sq(x); };
  for (int i = 0; i < 2000; ++i) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    EXPECT_GE(f((a + b) * 0.5), 0.5 * (f(a) + f(b)) - 1e-9);
  }
}

TEST(D2DGradient, Examples) {
  EXPECT_EQ(d2d_gradient({0, 0}, {0.3, 0.4}, 1.0, 0.7), (Vec2{0.3, 0.4}));
  const Vec2 pure = d2d_gradient({0, 0}, {3, 4}, 1.0, 0.0);
  EXPECT_NEAR(pure.x, 0.6, 1e-15);
  EXPECT_NEAR(pure.y, 0.8, 1e-15);
  const Vec2 half = d2d_gradient({0, 0}, {3, 4}, 1.0, 0.5);
  EXPECT_NEAR(half.x, 1.8, 1e-15);
  EXPECT_NEAR(half.y, 2.4, 1e-15);
}

TEST(D2DGradient, CombinedEqualsPiecewise) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10), w(0, 1);
  for (int i = 0; i < 10000; ++i) {
    const Vec2 x{u(rng), u(rng)}, l{u(rng), u(rng)};
    const double v = 0.1 + 5 * w(rng), mu = 0.01 + 0.99 * w(rng);
    const Vec2 a = d2d_gradient(x, l, v, mu), b = d2d_gradient_piecewise(x, l, v, mu);
    EXPECT_NEAR(a.x, b.x, 1e-12);
    EXPECT_NEAR(a.y, b.y, 1e-12);
  }
}

TEST(D2DStepSize, Examples) {
  EXPECT_DOUBLE_EQ(d2d_step_size(5, 1, 1, 0.5, 1, 1.01), 5.05);
  EXPECT_DOUBLE_EQ(d2d_step_size(1, 10, 1, 0.05, 1, 1.01), 1.01);
  EXPECT_THROW(d2d_step_size(5, 1, 0.5, 0.5, 1, 1.0), EmptyStepInterval);
  EXPECT_THROW(d2d_step_size(5, 1, 1, 0.995, 1, 1.01), EmptyStepInterval);
  // L-dominated branch with the default alpha_min has an empty interval.
  EXPECT_THROW(d2d_step_size(1, 10, 1, 0.5, 1, 1.01), EmptyStepInterval);
}

TEST(D2DStepSize, StepRespectsCap) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-50, 50), w(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 x{u(rng), u(rng)}, l{u(rng), u(rng)};
    const double v = 0.5 + 3 * w(rng), alpha = 0.2 + 0.8 * w(rng);
    const Vec2 g = d2d_gradient(x, l, v, 0.2);
    if (norm(g) == 0) continue;
    const double gbar = norm(g) * (1 + w(rng));
    const double gamma = d2d_step_size(gbar, v, alpha, 0.01, 1.0, 1.01);
    EXPECT_LE(norm(g / gamma), alpha * v + 1e-12);
  }
}

TEST(Rate, UnitDistanceAndLimits) {
  EXPECT_NEAR(rate({0, 0}, {1, 0}, 2.5, 1.0, 0.2), 0.8744691179161410747, 1e-15);
  EXPECT_LT(rate({0, 0}, {1e6, 0}, 2.5, 1.0, 0.2), 1e-12);
  EXPECT_NEAR(rate({0, 0}, {3, 0}, 2.5, 1.0, 1e-12), 1.0, 1e-9);
  // Distances below d_min are clamped.
  EXPECT_EQ(rate({0, 0}, {0, 0}, 2.5, 1.0, 0.2), rate({0, 0}, {1, 0}, 2.5, 1.0, 0.2));
}

TEST(Lambda, Increasing) {
  EXPECT_EQ(lambda_increasing(10, 10), 1.0);
  EXPECT_EQ(lambda_increasing(1, 10), 0.1);
  EXPECT_EQ(lambda_increasing(5, 10), 0.5);
}

TEST(Lambda, DirectionCells) {
  EXPECT_EQ(lambda_direction({5, 0}, {0, 0}, {0, 0}, 1.0), 1.0);
  EXPECT_EQ(lambda_direction({5, 0}, {0, 0}, {1, 0}, 1.0), 0.0);
  EXPECT_NEAR(lambda_direction(0.5, std::numbers::pi / 2), 0.75, 1e-15);
  // Current straight away from the goal: theta = pi, lambda = 1.
  EXPECT_NEAR(lambda_direction({5, 0}, {0, 0}, {-1, 0}, 1.0), 1.0, 1e-15);
  // Goal reached: theta defined as pi.
  EXPECT_EQ(lambda_direction({0, 0}, {0, 0}, {1, 0}, 1.0), 1.0);
}

TEST(Lambda, RangeOnRandomInputs) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const double l = lambda_direction({u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}, 1.5);
    EXPECT_GE(l, 0.0);
    EXPECT_LE(l, 1.0);
    const double a = alpha_schedule(2 * (u(rng) + 1), 3, 10, std::abs(u(rng)), std::numbers::pi * std::abs(u(rng)));
    EXPECT_GT(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(Alpha, Examples) {
  EXPECT_EQ(alpha_schedule(0.0, 5, 10, 1.0, 0.0), 1.0);
  EXPECT_EQ(alpha_schedule(3.0, 0, 10, 0.0, 1.0), 1.0);
  EXPECT_NEAR(alpha_schedule(1.0, 1, 10, 1.0, 0.0), 0.33287108369807955329, 1e-15);
}

TEST(OceanUtility, Examples) {
  EXPECT_DOUBLE_EQ(ocean_utility({1, 1}, {0, 0}, {4, 5}, {1, 1}, 1.0), -25.0);
  EXPECT_EQ(ocean_utility({1, 1}, {1, 1}, {4, 5}, {1, 1}, 0.0), 0.0);
  EXPECT_EQ(ocean_utility({1, 0}, {0, 0}, {2, 0}, {1, 0}, 0.5), 0.0);
}

TEST(OceanGradient, Examples) {
  EXPECT_EQ(ocean_gradient({1, 2}, {0, 0}, {3, 3}, 1.0), (Vec2{-2, -4}));
  EXPECT_EQ(ocean_gradient({1, 2}, {0, 0}, {3, 3}, 0.0), (Vec2{3, 3}));
  EXPECT_EQ(ocean_gradient({1, 0}, {0, 0}, {0, 2}, 0.5), (Vec2{-1, 1}));
}

TEST(OceanStepSize, Examples) {
  EXPECT_NEAR(ocean_step_size({3, 4}, {0, 0}, 1.0, 1.0, 1e-3, 1.01), 5.0, 1e-15);
  const double g = ocean_step_size({1, 0}, {0.5, 0}, 1.0, 1.0, 1e-3, 1.01);
  EXPECT_NEAR(g, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(norm(Vec2{1, 0} / g - Vec2{0.5, 0}), 1.0, 1e-15);
  EXPECT_THROW(ocean_step_size({1, 0}, {1, 0}, 0.5, 1.0, 2, 1.01), RootExistence);
  EXPECT_EQ(ocean_step_size({0, 0}, {0.2, 0}, 1.0, 1.0, 2, 1.01), 2.02);
}

TEST(OceanStepSize, StepIsFeasible) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 2000; ++i) {
    const Vec2 vo{0.6 * u(rng), 0.6 * u(rng)};
    const Vec2 g{100 * u(rng), 100 * u(rng)};
    const double reach = 0.9;
    const double gamma = ocean_step_size(g, vo, 0.9, 1.0, 2.0, 1.01);
    EXPECT_LE(norm(g / gamma - vo), reach * (1 + 1e-12));
  }
}
