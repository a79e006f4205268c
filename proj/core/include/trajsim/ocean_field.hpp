#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "trajsim/vec2.hpp"

namespace trajsim {

/// Gridded current field. Components are stored as (t, y, x) row-major arrays in m/s;
/// grid coordinates are meters and seconds.
class VelocityField {
 public:
  VelocityField() = default;
  VelocityField(std::vector<double> x_grid, std::vector<double> y_grid, std::vector<double> t_grid,
                std::vector<double> u, std::vector<double> v);

  const std::vector<double>& x_grid() const { return x_; }
  const std::vector<double>& y_grid() const { return y_; }
  const std::vector<double>& t_grid() const { return t_; }
  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }

  std::size_t index(std::size_t k, std::size_t j, std::size_t i) const {
    return (k * y_.size() + j) * x_.size() + i;
  }
  /// Largest stored speed.
  double v_o_max() const { return v_o_max_; }
  bool empty() const { return u_.empty(); }

 private:
  std::vector<double> x_, y_, t_, u_, v_;
  double v_o_max_ = 0.0;
};

/// Reads the `t,x,y,u,v` CSV format. Throws UnitsError on a header mismatch,
/// ParseError on a malformed row and LatticeError when a lattice cell is missing.
VelocityField load_field(const std::filesystem::path& path);
void write_field(const VelocityField& field, const std::filesystem::path& path);

/// Bilinear in space, linear in time; queries outside the lattice are clamped to its edge.
Vec2 sample_velocity(const VelocityField& field, const Vec2& x, double t);

struct FieldPerturbation {
  double sigma_fraction = 0.0;  // of the field's v_o_max
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, (sigma_fraction v_o_max)^2) to every stored component.
VelocityField perturb_field(const VelocityField& field, const FieldPerturbation& pert);

struct UniformFlow {
  double u = 0.0;
  double v = 0.0;
};
/// Counter-clockwise vortex; speed strength * (r/R) exp((1 - r^2/R^2)/2), peaking at r = R.
struct SingleGyre {
  Vec2 center;
  double strength = 0.0;
  double radius = 1.0;
};
/// Radial flow pointing away from `goal` with constant speed.
struct AwayFromGoal {
  Vec2 goal;
  double speed = 0.0;
};
using SynthSpec = std::variant<UniformFlow, SingleGyre, AwayFromGoal>;

struct Axis {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  std::vector<double> points() const;
};

Vec2 synth_velocity(const SynthSpec& spec, const Vec2& p);
VelocityField synth_field(const SynthSpec& spec, const Axis& x, const Axis& y, const Axis& t);

}  // namespace trajsim
