#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajsim/engine.hpp"
#include "trajsim/noise.hpp"
#include "trajsim/objectives.hpp"
#include "trajsim/ocean_field.hpp"
#include "trajsim/offline.hpp"
#include "trajsim/sets.hpp"

namespace trajsim {

enum class ScenarioKind { d2d, ocean, adversary };
enum class PeerSchedule { linear_over_horizon, constant_speed };
enum class LambdaStrategy { increasing, direction_dependent };
enum class AdversaryPolicy { zero, ioga, random };

/// d(t) = position + (t - 1) * velocity.
struct GoalSchedule {
  Vec2 position;
  Vec2 velocity;  // m/slot
  Vec2 at(int t) const { return position + velocity * static_cast<double>(t - 1); }
};

struct PeerConfig {
  Vec2 start;
  Vec2 dest;
  PeerSchedule schedule = PeerSchedule::linear_over_horizon;
  double speed = 1.0;      // m/slot, constant_speed only
  double noise_std = 0.0;  // m, per coordinate

  Vec2 at(int t, int T) const;
};

struct D2DParams {
  D2DUtilityKind utility = D2DUtilityKind::huber;
  double mu = 1e-3;
  HuberConstant huber_constant = HuberConstant::corrected;
  double alpha = 1.0;  // constant alpha(t)
  double alpha_min = 0.5;
  double alpha_p = 2.5;
  double bandwidth_hz = 10e6;
  double sigma2 = 0.2;
  double d_min = 1.0;  // m
  PeerConfig peer;
};

struct FieldSource {
  std::optional<std::filesystem::path> file;
  std::optional<SynthSpec> synthetic;
  Axis x_axis;
  Axis y_axis;
  Axis t_axis;
};

struct OceanParams {
  LambdaStrategy lambda_strategy = LambdaStrategy::direction_dependent;
  double beta = 0.2;
  double perturbation_sigma_fraction = 0.0;
  std::optional<double> v_o_max;  // m/s; defaults to the field's largest speed
  FieldSource field;
};

struct AdversaryParams {
  int T = 100;
  double W = 1.0;
  AdversaryPolicy policy = AdversaryPolicy::ioga;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::d2d;
  Vec2 start;
  GoalSchedule goal;
  int delta = 0;                 // excess slots
  std::optional<int> horizon;    // overrides T_ETA + delta when set
  double v_max = 1.0;            // m/slot
  double slot_duration = 1.0;    // s
  double margin = 1.01;
  double c_d = 1.0;              // drag coefficient for the energy report
  std::optional<Box2D> region;   // the feasible set X; the whole plane when absent
  std::optional<double> arrival_radius;  // m; defaults to 1e-3 * v_max
  UpdateMode mode = UpdateMode::standard;
  NoiseModel noise;
  std::uint64_t seed = 0;
  D2DParams d2d;
  OceanParams ocean;
  AdversaryParams adversary;
  OfflineOptions offline;

  // Filled by resolve().
  int T_eta = 0;
  int T = 0;
  std::vector<std::string> warnings;
};

/// Validates the config and computes T_eta = ceil(|s - d(1)| / v_max) and T.
void resolve(ScenarioConfig& config);

/// Paired offline/online summary of one episode.
struct RegretReport {
  std::vector<double> offline_utilities;
  std::vector<double> online_utilities;
  double regret = 0.0;
  double S_T = 0.0;
  double G_T = 0.0;
  int G_T_samples = 0;
  double E_T_bound = 0.0;
  double E_T_realized = 0.0;
  double energy_online = 0.0;
  double energy_straight = 0.0;
  double energy_conserved = 0.0;
  double avg_rate = 0.0;
  double final_goal_distance = 0.0;
  bool has_offline = false;
  bool has_rate = false;
};

struct EpisodeReport {
  ScenarioKind kind = ScenarioKind::d2d;
  int T = 0;
  Episode episode;
  RegretReport metrics;
  std::vector<double> rate_series;    // d2d, T entries
  std::vector<double> energy_series;  // T - 1 entries
  std::optional<OfflineSolution> offline;
  double wall_time_s = 0.0;
  std::vector<std::string> warnings;
};

struct RunOptions {
  bool offline = false;  // solve the offline benchmark and fill regret and S_T
};

EpisodeReport run_d2d(const ScenarioConfig& config, const RunOptions& options = {});
/// `field` overrides the configured field source when given.
EpisodeReport run_ocean(const ScenarioConfig& config, const RunOptions& options = {},
                        const VelocityField* field = nullptr);
EpisodeReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Builds the field described by the config (file or synthetic lattice).
VelocityField build_field(const ScenarioConfig& config);

/// The offline problem matching a finished episode: the revealed utilities and caps.
OfflineProblem offline_problem(const ScenarioConfig& config, const Episode& episode);

struct AdversaryResult {
  double regret = 0.0;
  std::vector<double> x;
  std::vector<double> w;
};

/// Scalar game with U_t(x) = -(x - w(t))^2 / 2 and w(t) = -W sign(x(t)), sign(0) = +1.
AdversaryResult run_adversary(int T, double W, AdversaryPolicy policy, std::uint64_t seed = 0,
                              double margin = 1.01);

enum class SweepParam { delta, noise_sigma, horizon };

struct SweepRow {
  SweepParam param = SweepParam::delta;
  double value = 0.0;
  std::optional<EpisodeReport> report;
  std::string error;
  int exit_code = 0;  // CLI code of the failure, 0 on success
};

/// Applies one sweep value to a copy of the config and re-resolves it.
ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param, double value);

/// One episode per value with the same base seed; a failing row records its error.
std::vector<SweepRow> sweep(const ScenarioConfig& base, SweepParam param, std::span<const double> values,
                            const RunOptions& options = {});

const char* to_string(ScenarioKind kind);
const char* to_string(SweepParam param);

}  // namespace trajsim
