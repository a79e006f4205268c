#include "trajsim/ocean_field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "trajsim/errors.hpp"
#include "trajsim/noise.hpp"

namespace trajsim {

namespace {

void check_axis(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw std::invalid_argument(std::string("empty ") + name + " grid");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw std::invalid_argument(std::string("non-finite ") + name + " grid value");
    if (i > 0 && !(g[i] > g[i - 1])) {
      throw std::invalid_argument(std::string(name) + " grid is not strictly ascending");
    }
  }
}

// Index of the lower cell corner and the fractional position inside the cell.
struct Bracket {
  std::size_t lo = 0;
  std::size_t hi = 0;
  double w = 0.0;
};

Bracket bracket(const std::vector<double>& g, double q) {
  if (g.size() == 1 || q <= g.front()) return {0, 0, 0.0};
  if (q >= g.back()) return {g.size() - 1, g.size() - 1, 0.0};
  const auto it = std::upper_bound(g.begin(), g.end(), q);
  const std::size_t hi = static_cast<std::size_t>(it - g.begin());
  const std::size_t lo = hi - 1;
  return {lo, hi, (q - g[lo]) / (g[hi] - g[lo])};
}

double parse_number(std::string_view s, std::size_t line) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) {
    throw ParseError("field file line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return value;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

VelocityField::VelocityField(std::vector<double> x_grid, std::vector<double> y_grid,
                             std::vector<double> t_grid, std::vector<double> u, std::vector<double> v)
    : x_(std::move(x_grid)), y_(std::move(y_grid)), t_(std::move(t_grid)), u_(std::move(u)), v_(std::move(v)) {
  check_axis(x_, "x");
  check_axis(y_, "y");
  check_axis(t_, "t");
  const std::size_t n = x_.size() * y_.size() * t_.size();
  if (u_.size() != n || v_.size() != n) throw std::invalid_argument("field arrays do not match the grid shape");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(u_[i]) || !std::isfinite(v_[i])) throw std::invalid_argument("non-finite field value");
    v_o_max_ = std::max(v_o_max_, std::hypot(u_[i], v_[i]));
  }
}

VelocityField load_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open field file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw UnitsError("field file " + path.string() + " has no header");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,x,y,u,v") {
    throw UnitsError("field header must be exactly 't,x,y,u,v' (s, m, m, m/s, m/s), got '" + line + "'");
  }

  struct Row {
    double t, x, y, u, v;
  };
  std::vector<Row> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    double vals[5];
    std::size_t start = 0;
    int col = 0;
    for (;; ++col) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell(line.data() + start, (comma == std::string::npos ? line.size() : comma) - start);
      if (col >= 5) throw ParseError("field file line " + std::to_string(lineno) + ": expected 5 columns");
      vals[col] = parse_number(cell, lineno);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (col != 4) throw ParseError("field file line " + std::to_string(lineno) + ": expected 5 columns");
    rows.push_back({vals[0], vals[1], vals[2], vals[3], vals[4]});
  }
  if (rows.empty()) throw LatticeError("field file " + path.string() + " has no data rows");

  std::map<double, std::size_t> ts, ys, xs;
  for (const auto& r : rows) {
    ts.emplace(r.t, 0);
    ys.emplace(r.y, 0);
    xs.emplace(r.x, 0);
  }
  auto number = [](std::map<double, std::size_t>& m) {
    std::vector<double> grid;
    for (auto& [value, idx] : m) {
      idx = grid.size();
      grid.push_back(value);
    }
    return grid;
  };
  std::vector<double> tg = number(ts), yg = number(ys), xg = number(xs);

  const std::size_t n = tg.size() * yg.size() * xg.size();
  std::vector<double> u(n, 0.0), v(n, 0.0);
  std::vector<char> seen(n, 0);
  for (const auto& r : rows) {
    const std::size_t idx = (ts[r.t] * yg.size() + ys[r.y]) * xg.size() + xs[r.x];
    if (seen[idx]) {
      throw ParseError("duplicate lattice cell t=" + fmt(r.t) + " x=" + fmt(r.x) + " y=" + fmt(r.y));
    }
    seen[idx] = 1;
    u[idx] = r.u;
    v[idx] = r.v;
  }
  for (std::size_t k = 0; k < tg.size(); ++k) {
    for (std::size_t j = 0; j < yg.size(); ++j) {
      for (std::size_t i = 0; i < xg.size(); ++i) {
        if (!seen[(k * yg.size() + j) * xg.size() + i]) {
          throw LatticeError("missing lattice cell t=" + fmt(tg[k]) + " x=" + fmt(xg[i]) + " y=" + fmt(yg[j]));
        }
      }
    }
  }
  return VelocityField(std::move(xg), std::move(yg), std::move(tg), std::move(u), std::move(v));
}

void write_field(const VelocityField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write field file " + path.string());
  out << "t,x,y,u,v\n";
  const auto& xs = field.x_grid();
  const auto& ys = field.y_grid();
  const auto& ts = field.t_grid();
  for (std::size_t k = 0; k < ts.size(); ++k) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t idx = field.index(k, j, i);
        out << fmt(ts[k]) << ',' << fmt(xs[i]) << ',' << fmt(ys[j]) << ',' << fmt(field.u()[idx]) << ','
            << fmt(field.v()[idx]) << '\n';
      }
    }
  }
  if (!out) throw IoError("failed while writing " + path.string());
}

Vec2 sample_velocity(const VelocityField& field, const Vec2& x, double t) {
  if (field.empty()) return {};
  const Bracket bx = bracket(field.x_grid(), x.x);
  const Bracket by = bracket(field.y_grid(), x.y);
  const Bracket bt = bracket(field.t_grid(), t);
  const auto& u = field.u();
  const auto& v = field.v();

  auto slice = [&](std::size_t k) {
    const std::size_t i00 = field.index(k, by.lo, bx.lo), i10 = field.index(k, by.lo, bx.hi);
    const std::size_t i01 = field.index(k, by.hi, bx.lo), i11 = field.index(k, by.hi, bx.hi);
    const double a = (1.0 - bx.w) * (1.0 - by.w), b = bx.w * (1.0 - by.w);
    const double c = (1.0 - bx.w) * by.w, d = bx.w * by.w;
    return Vec2{a * u[i00] + b * u[i10] + c * u[i01] + d * u[i11],
                a * v[i00] + b * v[i10] + c * v[i01] + d * v[i11]};
  };
  const Vec2 s0 = slice(bt.lo);
  if (bt.w == 0.0) return s0;
  return (1.0 - bt.w) * s0 + bt.w * slice(bt.hi);
}

VelocityField perturb_field(const VelocityField& field, const FieldPerturbation& pert) {
  if (pert.sigma_fraction < 0.0 || pert.sigma_fraction > 1.0) {
    throw std::invalid_argument("sigma_fraction must lie in [0, 1]");
  }
  if (pert.sigma_fraction == 0.0 || field.empty()) return field;
  const double sigma = pert.sigma_fraction * field.v_o_max();
  std::vector<double> u = field.u(), v = field.v();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Vec2 n = gaussian_pair(pert.seed, Stream::field, i, sigma);
    u[i] += n.x;
    v[i] += n.y;
  }
  return VelocityField(field.x_grid(), field.y_grid(), field.t_grid(), std::move(u), std::move(v));
}

std::vector<double> Axis::points() const {
  if (n < 1) throw std::invalid_argument("axis needs at least one point");
  if (n == 1) return {lo};
  if (!(hi > lo)) throw std::invalid_argument("axis upper bound must exceed the lower bound");
  std::vector<double> pts(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  pts.back() = hi;
  return pts;
}

Vec2 synth_velocity(const SynthSpec& spec, const Vec2& p) {
  if (const auto* s = std::get_if<UniformFlow>(&spec)) return {s->u, s->v};
  if (const auto* s = std::get_if<SingleGyre>(&spec)) {
    const Vec2 r = p - s->center;
    const double rr = norm(r);
    if (rr == 0.0) return {};
    const double q = rr / s->radius;
    const double speed = s->strength * q * std::exp(0.5 * (1.0 - q * q));
    return Vec2{-r.y, r.x} * (speed / rr);
  }
  const auto& s = std::get<AwayFromGoal>(spec);
  const Vec2 r = p - s.goal;
  const double rr = norm(r);
  if (rr == 0.0) return {};
  return r * (s.speed / rr);
}

VelocityField synth_field(const SynthSpec& spec, const Axis& x, const Axis& y, const Axis& t) {
  if (const auto* g = std::get_if<SingleGyre>(&spec); g && !(g->radius > 0.0)) {
    throw std::invalid_argument("gyre radius must be positive");
  }
  std::vector<double> xs = x.points(), ys = y.points(), ts = t.points();
  const std::size_t n = xs.size() * ys.size() * ts.size();
  std::vector<double> u(n), v(n);
  std::size_t idx = 0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    for (double yy : ys) {
      for (double xx : xs) {
        const Vec2 w = synth_velocity(spec, {xx, yy});
        u[idx] = w.x;
        v[idx] = w.y;
        ++idx;
      }
    }
  }
  return VelocityField(std::move(xs), std::move(ys), std::move(ts), std::move(u), std::move(v));
}

}  // namespace trajsim
