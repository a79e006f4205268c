#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "trajsim/scenarios.hpp"

namespace trajsim {

inline constexpr const char* kTraceHeader =
    "t,x1,x2,goal1,goal2,lambda,alpha,gamma,grad_norm,eps_sq,utility,energy_step,slack";
inline constexpr const char* kSummaryHeader =
    "param,value,regret,S_T,G_T,E_T_bound,E_T_realized,avg_rate,energy,energy_conserved,final_goal_distance";

/// One trace line; step columns are empty on the last slot.
struct TraceRow {
  int t = 0;
  double x1 = 0.0, x2 = 0.0, goal1 = 0.0, goal2 = 0.0;
  std::optional<double> lambda, alpha, gamma, grad_norm, eps_sq, utility, energy_step, slack;
};

struct SummaryRow {
  std::string param;
  double value = 0.0;
  std::optional<double> regret, S_T, G_T, E_T_bound, E_T_realized, avg_rate, energy, energy_conserved,
      final_goal_distance;
};

std::vector<TraceRow> trace_rows(const EpisodeReport& report);
SummaryRow summary_row(const std::string& param, double value, const EpisodeReport& report);
/// Row for a sweep value whose episode failed: every metric cell empty.
SummaryRow failed_row(const std::string& param, double value);

/// Numbers are written with 17 significant digits, so they parse back exactly.
std::string format_trace(std::span<const TraceRow> rows);
std::string format_summary(std::span<const SummaryRow> rows);

void emit_trace(const EpisodeReport& report, const std::filesystem::path& path);
void emit_summary(std::span<const SummaryRow> rows, const std::filesystem::path& path);

std::vector<TraceRow> read_trace(const std::filesystem::path& path);
std::vector<SummaryRow> read_summary(const std::filesystem::path& path);

/// Writes `text` to `path` (truncating). Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace trajsim
