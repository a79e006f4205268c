#include "trajsim/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "trajsim/errors.hpp"

namespace trajsim {

Vec2 leading_path(const Vec2& y, const Vec2& d, double lam) { return lam * y + (1.0 - lam) * d; }

double huber_quadratic_branch(double dist) { return 0.5 * dist * dist; }

double huber_linear_branch(double dist, double v_max, double mu, HuberConstant constant) {
  const double c = constant == HuberConstant::corrected ? (1.0 - mu) : (1.0 - mu * mu);
  return v_max * (1.0 - mu) * dist + 0.5 * mu * dist * dist - 0.5 * c * v_max * v_max;
}

double huber_value(double dist, double v_max, double mu, HuberConstant constant) {
  if (dist <= v_max) return huber_quadratic_branch(dist);
  return huber_linear_branch(dist, v_max, mu, constant);
}

double huber_derivative(double dist, double v_max, double mu) {
  if (dist <= v_max) return dist;
  return v_max * (1.0 - mu) + mu * dist;
}

Vec2 project_speed(const Vec2& w, double v_max) {
  const double n = norm(w);
  if (n <= v_max) return w;
  return w * (v_max / n);
}

Vec2 d2d_gradient(const Vec2& x, const Vec2& ell, double v_max, double mu) {
  const Vec2 diff = ell - x;
  return mu * diff + (1.0 - mu) * project_speed(diff, v_max);
}

Vec2 d2d_gradient_piecewise(const Vec2& x, const Vec2& ell, double v_max, double mu) {
  const Vec2 diff = ell - x;
  const double n = norm(diff);
  if (n <= v_max) return diff;
  return v_max * (1.0 - mu) * (diff / n) + mu * diff;
}

double d2d_step_size(double gbar, double v_max, double alpha_t, double alpha_min, double L,
                     double margin) {
  if (!(gbar > 0.0)) throw std::invalid_argument("d2d_step_size needs a positive gradient bound");
  if (!(alpha_min > 0.0 && alpha_min <= alpha_t && alpha_t <= 1.0)) {
    throw std::invalid_argument("d2d_step_size needs 0 < alpha_min <= alpha_t <= 1");
  }
  const double lower = std::max(gbar / (v_max * alpha_t), L);
  const double candidate = margin * lower;
  const double upper = gbar / (v_max * alpha_min);
  if (!(candidate < upper)) throw EmptyStepInterval(lower, candidate, upper);
  return candidate;
}

double rate(const Vec2& x, const Vec2& y, double alpha_p, double bandwidth_hz, double sigma2,
            double d_min) {
  const double dist = std::max(distance(x, y), d_min);
  const double rss = std::pow(dist, -alpha_p);
  return bandwidth_hz * std::log2(1.0 + rss / (rss + sigma2));
}

double lambda_increasing(int t, int T) {
  if (T < 1 || t < 1 || t > T) throw std::invalid_argument("lambda_increasing needs 1 <= t <= T");
  return static_cast<double>(t) / static_cast<double>(T);
}

DirectionTerms direction_terms(const Vec2& d, const Vec2& x_hat, const Vec2& v_o, double v_o_max) {
  DirectionTerms out;
  const double speed = norm(v_o);
  const Vec2 to_goal = d - x_hat;
  if (speed == 0.0 || (to_goal.x == 0.0 && to_goal.y == 0.0)) {
    out.theta = std::numbers::pi;
  } else {
    out.theta = std::atan2(std::abs(cross(to_goal, v_o)), dot(to_goal, v_o));
  }
  if (speed > 0.0) {
    if (!(v_o_max > 0.0)) throw std::invalid_argument("v_o_max must be positive for a nonzero current");
    out.eta = std::min(speed / v_o_max, 1.0);
  }
  return out;
}

double lambda_direction(double eta, double theta) {
  const double c = std::cos(0.5 * theta);
  return std::clamp(1.0 - eta * c * c, 0.0, 1.0);
}

double lambda_direction(const Vec2& d, const Vec2& x_hat, const Vec2& v_o, double v_o_max) {
  const auto terms = direction_terms(d, x_hat, v_o, v_o_max);
  return lambda_direction(terms.eta, terms.theta);
}

double alpha_schedule(double beta, double delta, int T, double eta, double theta) {
  if (beta < 0.0 || delta < 0.0 || T < 1) throw std::invalid_argument("alpha_schedule: bad parameters");
  return std::exp(-beta * (delta / static_cast<double>(T) + eta * std::cos(0.5 * theta)));
}

double ocean_utility(const Vec2& x, const Vec2& x_prev, const Vec2& d, const Vec2& v_o, double lam) {
  return -lam * norm_sq(x - d) - (1.0 - lam) * dot(x_prev - x, v_o);
}

Vec2 ocean_gradient(const Vec2& x, const Vec2& d, const Vec2& v_o, double lam) {
  return -2.0 * lam * (x - d) + (1.0 - lam) * v_o;
}

double ocean_step_size(const Vec2& grad, const Vec2& v_o, double alpha_t, double v_max, double L,
                       double margin) {
  const double reach = alpha_t * v_max;
  const double speed = norm(v_o);
  if (!(reach > speed)) throw RootExistence(alpha_t, speed / v_max);
  const double floor = margin * L;
  const double c = norm_sq(grad);
  if (c == 0.0) return floor;
  // With A = a^2 v^2 - |v_o|^2 > 0 the equation reads A g^2 + 2 p g - c = 0,
  // whose roots have product -c / A < 0: exactly one is positive.
  const double A = reach * reach - speed * speed;
  const double p = dot(grad, v_o);
  const double s = std::sqrt(p * p + A * c);
  const double root = p <= 0.0 ? (s - p) / A : c / (p + s);
  return std::max(root, floor);
}

double LeadingPathUtility::value(const Vec2& x) const {
  const double dist = distance(x, ell);
  if (kind == D2DUtilityKind::squared) return -0.5 * dist * dist;
  return -huber_value(dist, v_max, mu, constant);
}

Vec2 LeadingPathUtility::gradient(const Vec2& x) const {
  if (kind == D2DUtilityKind::squared) return ell - x;
  return d2d_gradient(x, ell, v_max, mu);
}

double utility_value(const SlotUtility& u, const Vec2& x) {
  return std::visit([&](const auto& f) { return f.value(x); }, u);
}

Vec2 utility_gradient(const SlotUtility& u, const Vec2& x) {
  return std::visit([&](const auto& f) { return f.gradient(x); }, u);
}

double smoothness(const SlotUtility& u) { return std::holds_alternative<OceanUtility>(u) ? 2.0 : 1.0; }

}  // namespace trajsim
