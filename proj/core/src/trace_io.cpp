#include "trajsim/trace_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajsim/errors.hpp"

namespace trajsim {

namespace {

void put(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void put(std::string& out, const std::optional<double>& v) {
  if (v && std::isfinite(*v)) put(out, *v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> cell(const std::string& s, const std::filesystem::path& path, std::size_t line) {
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(path.string() + ":" + std::to_string(line) + ": bad number '" + s + "'");
  }
  return v;
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const char* header,
                                               std::size_t columns) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header) throw UnitsError(path.string() + ": unexpected header");
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != columns) {
      throw ParseError(path.string() + ":" + std::to_string(rows.size() + 2) + ": expected " +
                       std::to_string(columns) + " columns");
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace

std::vector<TraceRow> trace_rows(const EpisodeReport& report) {
  const Episode& ep = report.episode;
  std::vector<TraceRow> rows;
  rows.reserve(ep.trajectory.size());
  for (std::size_t i = 0; i < ep.trajectory.size(); ++i) {
    TraceRow r;
    const SlotContext& ctx = ep.contexts[i];
    r.t = ctx.t;
    r.x1 = ep.trajectory[i].x;
    r.x2 = ep.trajectory[i].y;
    r.goal1 = ctx.goal.x;
    r.goal2 = ctx.goal.y;
    r.lambda = ctx.lambda;
    r.alpha = ctx.alpha;
    r.utility = report.metrics.online_utilities[i];
    if (i < ep.steps.size()) {
      const StepRecord& s = ep.steps[i];
      r.gamma = s.gamma;
      r.grad_norm = norm(s.grad_tilde);
      r.eps_sq = s.eps_sq_realized;
      r.energy_step = report.energy_series[i];
      r.slack = s.constraint_slack;
    }
    rows.push_back(r);
  }
  return rows;
}

SummaryRow summary_row(const std::string& param, double value, const EpisodeReport& report) {
  const RegretReport& m = report.metrics;
  SummaryRow r;
  r.param = param;
  r.value = value;
  if (m.has_offline) {
    r.regret = m.regret;
    r.S_T = m.S_T;
  }
  r.G_T = m.G_T;
  r.E_T_bound = m.E_T_bound;
  r.E_T_realized = m.E_T_realized;
  if (m.has_rate) r.avg_rate = m.avg_rate;
  r.energy = m.energy_online;
  r.energy_conserved = m.energy_conserved;
  r.final_goal_distance = m.final_goal_distance;
  return r;
}

SummaryRow failed_row(const std::string& param, double value) {
  SummaryRow r;
  r.param = param;
  r.value = value;
  return r;
}

std::string format_trace(std::span<const TraceRow> rows) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += std::to_string(r.t);
    for (double v : {r.x1, r.x2, r.goal1, r.goal2}) {
      out += ',';
      put(out, v);
    }
    for (const auto* v : {&r.lambda, &r.alpha, &r.gamma, &r.grad_norm, &r.eps_sq, &r.utility, &r.energy_step, &r.slack}) {
      out += ',';
      put(out, *v);
    }
    out += '\n';
  }
  return out;
}

std::string format_summary(std::span<const SummaryRow> rows) {
  std::string out = kSummaryHeader;
  out += '\n';
  for (const auto& r : rows) {
    out += r.param;
    out += ',';
    put(out, r.value);
    for (const auto* v : {&r.regret, &r.S_T, &r.G_T, &r.E_T_bound, &r.E_T_realized, &r.avg_rate, &r.energy,
                          &r.energy_conserved, &r.final_goal_distance}) {
      out += ',';
      put(out, *v);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw IoError("failed while writing " + path.string());
}

void emit_trace(const EpisodeReport& report, const std::filesystem::path& path) {
  write_text(path, format_trace(trace_rows(report)));
}

void emit_summary(std::span<const SummaryRow> rows, const std::filesystem::path& path) {
  write_text(path, format_summary(rows));
}

std::vector<TraceRow> read_trace(const std::filesystem::path& path) {
  std::vector<TraceRow> out;
  std::size_t line = 1;
  for (const auto& c : read_csv(path, kTraceHeader, 13)) {
    ++line;
    TraceRow r;
    const auto t = cell(c[0], path, line);
    if (!t) throw ParseError(path.string() + ":" + std::to_string(line) + ": missing slot index");
    r.t = static_cast<int>(*t);
    double* fixed[] = {&r.x1, &r.x2, &r.goal1, &r.goal2};
    for (int k = 0; k < 4; ++k) {
      const auto v = cell(c[1 + k], path, line);
      if (!v) throw ParseError(path.string() + ":" + std::to_string(line) + ": missing position");
      *fixed[k] = *v;
    }
    std::optional<double>* opt[] = {&r.lambda, &r.alpha, &r.gamma, &r.grad_norm, &r.eps_sq, &r.utility, &r.energy_step, &r.slack};
    for (int k = 0; k < 8; ++k) *opt[k] = cell(c[5 + k], path, line);
    out.push_back(r);
  }
  return out;
}

std::vector<SummaryRow> read_summary(const std::filesystem::path& path) {
  std::vector<SummaryRow> out;
  std::size_t line = 1;
  for (const auto& c : read_csv(path, kSummaryHeader, 11)) {
    ++line;
    SummaryRow r;
    r.param = c[0];
    const auto v = cell(c[1], path, line);
    if (!v) throw ParseError(path.string() + ":" + std::to_string(line) + ": missing value");
    r.value = *v;
    std::optional<double>* opt[] = {&r.regret, &r.S_T, &r.G_T, &r.E_T_bound, &r.E_T_realized, &r.avg_rate,
                                    &r.energy, &r.energy_conserved, &r.final_goal_distance};
    for (int k = 0; k < 9; ++k) *opt[k] = cell(c[2 + k], path, line);
    out.push_back(r);
  }
  return out;
}

}  // namespace trajsim
