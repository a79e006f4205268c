// trajsim: run, sweep and benchmark online trajectory episodes from JSON configs.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "trajsim/config.hpp"
#include "trajsim/errors.hpp"
#include "trajsim/metrics.hpp"
#include "trajsim/offline.hpp"
#include "trajsim/scenarios.hpp"
#include "trajsim/trace_io.hpp"
#include "trajsim/version.hpp"

namespace fs = std::filesystem;
using namespace trajsim;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

ParsedConfig load(const Common& c, const std::string& mode = "") {
  ParsedConfig pc = parse_config(c.config);
  if (c.seed) {
    pc.config.seed = *c.seed;
  }
  if (mode == "lookahead") pc.config.mode = UpdateMode::lookahead;
  if (mode == "standard") pc.config.mode = UpdateMode::standard;
  resolve(pc.config);
  return pc;
}

fs::path prepare_out(const std::string& out) {
  fs::path dir(out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + out + ": " + ec.message());
  return dir;
}

void manifest(const ParsedConfig& pc, const fs::path& dir, const std::string& started,
              const std::vector<fs::path>& outputs) {
  RunManifest m;
  m.config_hash = pc.hash;
  m.seed = pc.config.seed;
  m.tool_version = kVersion;
  m.start_timestamp = started;
  for (const auto& p : outputs) m.output_paths.push_back(p.string());
  write_manifest(m, dir / "manifest.json");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

void print_summary(const EpisodeReport& r) {
  const RegretReport& m = r.metrics;
  std::printf("T=%d final_goal_distance=%.6g energy=%.6g energy_conserved=%.6g", r.T, m.final_goal_distance,
              m.energy_online, m.energy_conserved);
  if (m.has_rate) std::printf(" avg_rate=%.6g", m.avg_rate);
  if (m.has_offline) std::printf(" regret=%.6g S_T=%.6g", m.regret, m.S_T);
  std::printf(" G_T=%.6g E_T_bound=%.6g E_T_realized=%.6g\n", m.G_T, m.E_T_bound, m.E_T_realized);
}

int cmd_run(const Common& c, const std::string& mode, bool offline) {
  const std::string started = utc_timestamp();
  ParsedConfig pc = load(c, mode);
  if (pc.config.kind == ScenarioKind::adversary) {
    throw SchemaError("kind", "use the 'adversary' subcommand for adversary games");
  }
  print_warnings(pc.config.warnings);
  const EpisodeReport rep = run_scenario(pc.config, RunOptions{offline});
  print_warnings(rep.warnings);
  const fs::path dir = prepare_out(c.out);
  emit_trace(rep, dir / "trace.csv");
  const SummaryRow row = summary_row("run", 0.0, rep);
  emit_summary(std::span<const SummaryRow>(&row, 1), dir / "summary.csv");
  manifest(pc, dir, started, {dir / "trace.csv", dir / "summary.csv"});
  print_summary(rep);
  return 0;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw SchemaError("--values", "'" + item + "' is not a number");
    }
  }
  if (values.empty()) throw SchemaError("--values", "needs at least one value");
  return values;
}

int cmd_sweep(const Common& c, const std::string& param_name, const std::string& values_text, bool offline) {
  const std::string started = utc_timestamp();
  ParsedConfig pc = load(c);
  SweepParam param = SweepParam::delta;
  if (param_name == "noise_sigma") param = SweepParam::noise_sigma;
  if (param_name == "horizon") param = SweepParam::horizon;
  const std::vector<double> values = parse_values(values_text);

  const auto rows = sweep(pc.config, param, values, RunOptions{offline});
  const fs::path dir = prepare_out(c.out);
  std::vector<SummaryRow> summary;
  std::vector<fs::path> outputs;
  int code = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    if (row.report) {
      print_warnings(row.report->warnings);
      const fs::path trace = dir / ("trace_" + std::to_string(i) + ".csv");
      emit_trace(*row.report, trace);
      outputs.push_back(trace);
      summary.push_back(summary_row(param_name, row.value, *row.report));
    } else {
      std::cerr << "error: " << param_name << "=" << row.value << ": " << row.error << '\n';
      summary.push_back(failed_row(param_name, row.value));
      code = std::max(code, row.exit_code);
    }
  }
  emit_summary(summary, dir / "summary.csv");
  outputs.push_back(dir / "summary.csv");
  manifest(pc, dir, started, outputs);
  std::cout << format_summary(summary);
  return code;
}

int cmd_benchmark(const Common& c) {
  const std::string started = utc_timestamp();
  ParsedConfig pc = load(c);
  print_warnings(pc.config.warnings);
  const EpisodeReport rep = run_scenario(pc.config, RunOptions{true});
  print_warnings(rep.warnings);
  const fs::path dir = prepare_out(c.out);
  emit_trace(rep, dir / "trace.csv");
  const SummaryRow row = summary_row("benchmark", 0.0, rep);
  emit_summary(std::span<const SummaryRow>(&row, 1), dir / "summary.csv");

  std::string text = "t,offline1,offline2,online1,online2,offline_utility,online_utility\n";
  const auto& off = rep.offline->trajectory;
  const auto& on = rep.episode.trajectory;
  char buf[256];
  for (std::size_t t = 0; t < on.size(); ++t) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", t + 1, off[t].x, off[t].y, on[t].x,
                  on[t].y, rep.metrics.offline_utilities[t], rep.metrics.online_utilities[t]);
    text += buf;
  }
  write_text(dir / "offline.csv", text);
  manifest(pc, dir, started, {dir / "trace.csv", dir / "summary.csv", dir / "offline.csv"});
  print_summary(rep);
  if (!rep.offline->converged) {
    std::cerr << "error: offline benchmark did not converge (" << rep.offline->warning << ")\n";
    return 4;
  }
  return 0;
}

int cmd_oracle(const Common& c, const std::string& grid_text) {
  const std::string started = utc_timestamp();
  ParsedConfig pc = load(c);
  if (pc.config.kind == ScenarioKind::adversary) throw SchemaError("kind", "oracle needs a d2d or ocean config");
  if (pc.config.T > 6) {
    throw SchemaError("horizon_slots", "oracle needs T <= 6, config resolves to T = " + std::to_string(pc.config.T));
  }
  GridSpec grid;
  if (std::sscanf(grid_text.c_str(), "%dx%d", &grid.nx, &grid.ny) != 2) {
    throw SchemaError("--grid", "expected NxM, got '" + grid_text + "'");
  }
  if (grid.nx < 2 || grid.ny < 2 || grid.nx > 101 || grid.ny > 101) {
    throw SchemaError("--grid", "each side must be between 2 and 101");
  }

  const EpisodeReport rep = run_scenario(pc.config, RunOptions{true});
  const OfflineProblem problem = offline_problem(pc.config, rep.episode);
  if (pc.config.region && pc.config.region->bounded()) {
    grid.box = *pc.config.region;
  } else {
    std::vector<Vec2> pts = rep.episode.trajectory;
    pts.insert(pts.end(), rep.offline->trajectory.begin(), rep.offline->trajectory.end());
    grid.box = bounding_box(pts, pc.config.v_max);
  }
  const OracleSolution dp = dp_oracle(problem, grid);

  const fs::path dir = prepare_out(c.out);
  std::string text = "method,utility\n";
  char buf[128];
  std::snprintf(buf, sizeof buf, "offline,%.17g\noracle,%.17g\nonline,%.17g\n", rep.offline->utility, dp.utility,
                problem.total_utility(rep.episode.trajectory));
  text += buf;
  write_text(dir / "oracle.csv", text);
  manifest(pc, dir, started, {dir / "oracle.csv"});
  std::cout << text;
  if (rep.offline->utility < dp.utility - 1e-3) {
    std::cerr << "warning: offline utility is below the grid oracle by " << dp.utility - rep.offline->utility << '\n';
  }
  return rep.offline->converged ? 0 : 4;
}

int cmd_adversary(int T, double W, const std::string& policy_name, std::optional<std::uint64_t> seed,
                  const std::string& out) {
  AdversaryPolicy policy = AdversaryPolicy::ioga;
  if (policy_name == "zero") policy = AdversaryPolicy::zero;
  if (policy_name == "random") policy = AdversaryPolicy::random;
  const std::uint64_t s = seed ? *seed : env_seed().value_or(0);
  const AdversaryResult res = run_adversary(T, W, policy, s);

  const fs::path dir = prepare_out(out);
  std::string text = "t,x,w,loss\n";
  char buf[160];
  for (std::size_t t = 0; t < res.x.size(); ++t) {
    const double d = res.x[t] - res.w[t];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", t + 1, res.x[t], res.w[t], 0.5 * d * d);
    text += buf;
  }
  write_text(dir / "adversary.csv", text);
  std::printf("policy=%s T=%d W=%g regret=%.17g lower_bound=%.17g\n", policy_name.c_str(), T, W, res.regret,
              0.5 * W * W * T);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online trajectory planning with inexact gradient feedback"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common common;
  std::string mode;
  bool offline = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "JSON scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "Seed (overrides the config and TRAJSIM_SEED)");
    sub->add_option("--out", common.out, "Output directory")->required();
  };

  auto* run = app.add_subcommand("run", "Run one episode and write trace.csv and summary.csv");
  add_common(run);
  run->add_option("--mode", mode, "Update rule")->check(CLI::IsMember({"standard", "lookahead"}));
  run->add_flag("--offline", offline, "Also solve the offline benchmark and report regret");

  std::string param, values;
  auto* sw = app.add_subcommand("sweep", "Run one episode per parameter value");
  add_common(sw);
  sw->add_option("--param", param, "Swept parameter")->required()->check(CLI::IsMember({"delta", "noise_sigma", "horizon"}));
  sw->add_option("--values", values, "Comma-separated values")->required();
  sw->add_flag("--offline", offline, "Also solve the offline benchmark per row");

  auto* bench = app.add_subcommand("benchmark", "Run an episode against the offline benchmark");
  add_common(bench);

  std::string grid;
  auto* oracle = app.add_subcommand("oracle", "Compare the offline solver with the grid oracle (T <= 6)");
  add_common(oracle);
  oracle->add_option("--grid", grid, "Grid resolution NxM")->required();

  int adv_T = 100;
  double adv_W = 1.0;
  std::string policy = "ioga";
  std::optional<std::uint64_t> adv_seed;
  std::string adv_out;
  auto* adv = app.add_subcommand("adversary", "Play the sign-flipping adversary");
  adv->add_option("--T", adv_T, "Horizon")->required()->check(CLI::PositiveNumber);
  adv->add_option("--W", adv_W, "Amplitude")->required()->check(CLI::PositiveNumber);
  adv->add_option("--policy", policy, "Player policy")->check(CLI::IsMember({"ioga", "zero", "random"}));
  adv->add_option("--seed", adv_seed, "Seed for the random policy");
  adv->add_option("--out", adv_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) return cmd_run(common, mode, offline);
    if (*sw) return cmd_sweep(common, param, values, offline);
    if (*bench) return cmd_benchmark(common);
    if (*oracle) return cmd_oracle(common, grid);
    if (*adv) return cmd_adversary(adv_T, adv_W, policy, adv_seed, adv_out);
  } catch (const InfeasibleStepSize& e) {
    std::cerr << "error: slot " << e.slot() << ": " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 1;
}
