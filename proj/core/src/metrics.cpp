#include "trajsim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "trajsim/errors.hpp"
#include "trajsim/noise.hpp"

namespace trajsim {

double regret(std::span<const Vec2> offline, std::span<const Vec2> online,
              std::span<const SlotUtility> utilities) {
  if (offline.size() != online.size() || offline.size() != utilities.size()) {
    throw HorizonMismatch("regret needs equal horizons: offline " + std::to_string(offline.size()) +
                          ", online " + std::to_string(online.size()) + ", utilities " +
                          std::to_string(utilities.size()));
  }
  double off = 0.0, on = 0.0;
  for (std::size_t t = 0; t < utilities.size(); ++t) {
    off += utility_value(utilities[t], offline[t]);
    on += utility_value(utilities[t], online[t]);
  }
  return off - on;
}

double squared_path_length(std::span<const Vec2> traj) {
  double s = 0.0;
  for (std::size_t t = 1; t < traj.size(); ++t) s += norm_sq(traj[t] - traj[t - 1]);
  return s;
}

GradientVariation gradient_variation(std::span<const SlotUtility> utilities, const Box2D& region,
                                     int samples, std::uint64_t seed) {
  GradientVariation gv;
  if (utilities.size() < 2) return gv;
  if (!region.bounded() || !region.valid()) throw std::invalid_argument("gradient_variation needs a bounded box");
  const std::array<Vec2, 4> corners{region.lo, Vec2{region.hi.x, region.lo.y}, region.hi,
                                    Vec2{region.lo.x, region.hi.y}};

  for (std::size_t t = 0; t + 1 < utilities.size(); ++t) {
    const SlotUtility& a = utilities[t];
    const SlotUtility& b = utilities[t + 1];
    const auto* la = std::get_if<LeadingPathUtility>(&a);
    const auto* lb = std::get_if<LeadingPathUtility>(&b);
    if (la && lb && la->kind == D2DUtilityKind::squared && lb->kind == D2DUtilityKind::squared) {
      gv.value += norm_sq(lb->ell - la->ell);
      continue;
    }
    if (std::holds_alternative<OceanUtility>(a) && std::holds_alternative<OceanUtility>(b)) {
      // The difference is affine in x, so its squared norm is convex and peaks at a vertex.
      double worst = 0.0;
      for (const auto& c : corners) worst = std::max(worst, norm_sq(utility_gradient(b, c) - utility_gradient(a, c)));
      gv.value += worst;
      continue;
    }
    gv.exact = false;
    gv.samples = samples;
    auto rng = make_rng(seed, Stream::sampler, t);
    std::uniform_real_distribution<double> ux(region.lo.x, region.hi.x), uy(region.lo.y, region.hi.y);
    double worst = 0.0;
    for (const auto& c : corners) worst = std::max(worst, norm_sq(utility_gradient(b, c) - utility_gradient(a, c)));
    for (int k = 0; k < samples; ++k) {
      const Vec2 p{ux(rng), uy(rng)};
      worst = std::max(worst, norm_sq(utility_gradient(b, p) - utility_gradient(a, p)));
    }
    gv.value += worst;
  }
  return gv;
}

double cumulative_error(std::span<const double> eps_sq) {
  double s = 0.0;
  for (double e : eps_sq) s += e;
  return s;
}

std::vector<double> energy_steps(std::span<const Vec2> traj, const VelocityField* field, double c_d,
                                 double slot_duration) {
  if (!(slot_duration > 0.0)) throw std::invalid_argument("slot duration must be positive");
  std::vector<double> out;
  if (traj.size() < 2) return out;
  out.reserve(traj.size() - 1);
  for (std::size_t t = 0; t + 1 < traj.size(); ++t) {
    Vec2 rel = (traj[t + 1] - traj[t]) / slot_duration;
    if (field) rel -= sample_velocity(*field, traj[t], static_cast<double>(t) * slot_duration);
    const double vr = norm(rel);
    out.push_back(c_d * vr * vr * vr * slot_duration);
  }
  return out;
}

double energy_cost(std::span<const Vec2> traj, const VelocityField* field, double c_d,
                   double slot_duration) {
  double e = 0.0;
  for (double s : energy_steps(traj, field, c_d, slot_duration)) e += s;
  return e;
}

std::vector<Vec2> straight_line(const Vec2& s, const Vec2& d, int T) {
  if (T < 1) throw std::invalid_argument("straight_line needs T >= 1");
  std::vector<Vec2> pts(static_cast<std::size_t>(T), s);
  for (int t = 1; t < T; ++t) pts[t] = s + (d - s) * (static_cast<double>(t) / (T - 1));
  if (T > 1) pts.back() = d;
  return pts;
}

double energy_conserved(std::span<const Vec2> traj, const Vec2& goal, const VelocityField* field,
                        double c_d, double slot_duration) {
  if (traj.empty()) return 0.0;
  const auto ref = straight_line(traj.front(), goal, static_cast<int>(traj.size()));
  return energy_cost(ref, field, c_d, slot_duration) - energy_cost(traj, field, c_d, slot_duration);
}

Box2D bounding_box(std::span<const Vec2> points, double pad) {
  if (points.empty()) throw std::invalid_argument("bounding_box of no points");
  Box2D b{points.front(), points.front()};
  for (const auto& p : points) {
    b.lo.x = std::min(b.lo.x, p.x);
    b.lo.y = std::min(b.lo.y, p.y);
    b.hi.x = std::max(b.hi.x, p.x);
    b.hi.y = std::max(b.hi.y, p.y);
  }
  b.lo -= Vec2{pad, pad};
  b.hi += Vec2{pad, pad};
  return b;
}

}  // namespace trajsim
