#pragma once

#include <variant>

#include "trajsim/vec2.hpp"

namespace trajsim {

// ---------------------------------------------------------------------------
// D2D family: U_t(x) = -h(|x - l(t)|) around a leading path l(t).

enum class D2DUtilityKind { squared, huber };

// `printed` reproduces the published constant (1 - mu^2) v^2 / 2, which leaves a
// jump at d = v_max. Kept only for comparison runs.
enum class HuberConstant { corrected, printed };

/// l = lam * y + (1 - lam) * d.
Vec2 leading_path(const Vec2& y, const Vec2& d, double lam);

double huber_quadratic_branch(double dist);
double huber_linear_branch(double dist, double v_max, double mu,
                           HuberConstant constant = HuberConstant::corrected);
double huber_value(double dist, double v_max, double mu,
                   HuberConstant constant = HuberConstant::corrected);
/// h'(dist).
double huber_derivative(double dist, double v_max, double mu);

/// Projection onto the disc of radius v_max centred at the origin.
Vec2 project_speed(const Vec2& w, double v_max);

/// mu (l - x) + (1 - mu) P_v(l - x).
Vec2 d2d_gradient(const Vec2& x, const Vec2& ell, double v_max, double mu);
/// Same gradient written case by case (inside / outside the v_max disc).
Vec2 d2d_gradient_piecewise(const Vec2& x, const Vec2& ell, double v_max, double mu);

/// gamma = margin * max{gbar / (v_max alpha_t), L}. Throws EmptyStepInterval when
/// that is not strictly below gbar / (v_max alpha_min).
double d2d_step_size(double gbar, double v_max, double alpha_t, double alpha_min, double L,
                     double margin);

/// Achievable rate in bits/s; distances below d_min are clamped to d_min.
double rate(const Vec2& x, const Vec2& y, double alpha_p, double bandwidth_hz, double sigma2,
            double d_min = 1.0);

// ---------------------------------------------------------------------------
// Ocean family: U_t(x) = -lam |x - d|^2 - (1 - lam) <x_prev - x, v_o>.

double lambda_increasing(int t, int T);

struct DirectionTerms {
  double eta = 0.0;    // |v_o| / v_o_max, clamped to [0, 1]
  double theta = 0.0;  // angle between d - x and v_o, in [0, pi]
};

/// theta is set to pi when d == x or v_o == 0 (the angle is undefined there).
DirectionTerms direction_terms(const Vec2& d, const Vec2& x_hat, const Vec2& v_o, double v_o_max);

double lambda_direction(double eta, double theta);
double lambda_direction(const Vec2& d, const Vec2& x_hat, const Vec2& v_o, double v_o_max);

/// alpha = exp(-beta (delta / T + eta cos(theta / 2))).
double alpha_schedule(double beta, double delta, int T, double eta, double theta);

double ocean_utility(const Vec2& x, const Vec2& x_prev, const Vec2& d, const Vec2& v_o, double lam);
Vec2 ocean_gradient(const Vec2& x, const Vec2& d, const Vec2& v_o, double lam);

/// Positive root of (|v_o|^2 - a^2 v^2) g^2 - 2 <grad, v_o> g + |grad|^2 = 0 with
/// a = alpha_t, v = v_max, raised to margin * L if smaller. Throws RootExistence
/// unless alpha_t v_max > |v_o|. A zero gradient returns margin * L.
double ocean_step_size(const Vec2& grad, const Vec2& v_o, double alpha_t, double v_max, double L,
                       double margin);

// ---------------------------------------------------------------------------
// Per-slot utility handles shared by the engine, the offline solver and metrics.

struct LeadingPathUtility {
  Vec2 ell;
  double v_max = 1.0;
  double mu = 1.0;
  D2DUtilityKind kind = D2DUtilityKind::huber;
  HuberConstant constant = HuberConstant::corrected;

  double value(const Vec2& x) const;
  Vec2 gradient(const Vec2& x) const;
};

struct OceanUtility {
  Vec2 goal;
  Vec2 current;  // m/slot
  Vec2 x_prev;
  double lambda = 1.0;

  double value(const Vec2& x) const { return ocean_utility(x, x_prev, goal, current, lambda); }
  Vec2 gradient(const Vec2& x) const { return ocean_gradient(x, goal, current, lambda); }
};

using SlotUtility = std::variant<LeadingPathUtility, OceanUtility>;

double utility_value(const SlotUtility& u, const Vec2& x);
Vec2 utility_gradient(const SlotUtility& u, const Vec2& x);
/// Lipschitz constant of the gradient: 1 for the D2D family, 2 for the ocean family.
double smoothness(const SlotUtility& u);

}  // namespace trajsim
