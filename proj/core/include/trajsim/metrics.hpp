#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trajsim/objectives.hpp"
#include "trajsim/ocean_field.hpp"
#include "trajsim/sets.hpp"

namespace trajsim {

/// sum_t U_t(offline(t)) - sum_t U_t(online(t)). Throws HorizonMismatch on length mismatch.
double regret(std::span<const Vec2> offline, std::span<const Vec2> online,
              std::span<const SlotUtility> utilities);

/// sum_t |x(t+1) - x(t)|^2.
double squared_path_length(std::span<const Vec2> traj);

struct GradientVariation {
  double value = 0.0;
  int samples = 0;     // Monte Carlo samples per slot pair, 0 when every term was exact
  bool exact = true;
};

/// sum_t max_{x in region} |grad U_{t+1}(x) - grad U_t(x)|^2. Exact for the
/// quadratic leading-path utilities and for the ocean family (affine difference,
/// maximized at a box vertex); sampled with `samples` uniform points otherwise.
GradientVariation gradient_variation(std::span<const SlotUtility> utilities, const Box2D& region,
                                     int samples = 256, std::uint64_t seed = 0);

double cumulative_error(std::span<const double> eps_sq);

/// Per-step energy c_d |dx/dt - v_o(x(t), (t-1) dt)|^3 dt. A null field means still water.
std::vector<double> energy_steps(std::span<const Vec2> traj, const VelocityField* field, double c_d,
                                 double slot_duration);
double energy_cost(std::span<const Vec2> traj, const VelocityField* field, double c_d,
                   double slot_duration);

/// T points from s to d at uniform spacing.
std::vector<Vec2> straight_line(const Vec2& s, const Vec2& d, int T);

/// Energy of the uniform straight line from traj.front() to `goal` over the same
/// number of slots, minus the energy of traj.
double energy_conserved(std::span<const Vec2> traj, const Vec2& goal, const VelocityField* field,
                        double c_d, double slot_duration);

/// Smallest box holding all the points, padded by `pad` on each side.
Box2D bounding_box(std::span<const Vec2> points, double pad = 0.0);

}  // namespace trajsim
