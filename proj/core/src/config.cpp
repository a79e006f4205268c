#include "trajsim/config.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "trajsim/errors.hpp"
#include "trajsim/version.hpp"

namespace trajsim {

namespace {

using nlohmann::json;

constexpr const char* kUnitSuffixes[] = {"_m_per_slot", "_m_per_s", "_slots", "_m", "_s", "_hz"};

// Walks one JSON object, remembering which keys were read so the rest can be rejected.
class Reader {
 public:
  Reader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw SchemaError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json* find(const std::string& key) {
    known_.insert(key);
    const auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return obj_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    const json* v = find(key);
    return v ? as_number(*v, key) : fallback;
  }
  std::optional<double> opt_number(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_number(*v, key);
  }
  double required_unit_number(const std::string& key) {
    const json* v = find(key);
    if (!v) throw UnitsError("missing unit-bearing field '" + key_path(key) + "'");
    return as_number(*v, key);
  }
  int integer(const std::string& key, int fallback) {
    const json* v = find(key);
    return v ? as_int(*v, key) : fallback;
  }
  std::optional<int> opt_integer(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_int(*v, key);
  }
  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = find(key);
    if (!v) return fallback;
    if (!v->is_string()) throw SchemaError(key_path(key), "expected a string");
    return v->get<std::string>();
  }
  std::optional<Vec2> opt_point(const std::string& key) {
    const json* v = find(key);
    if (!v) return std::nullopt;
    return as_point(*v, key);
  }
  Vec2 required_point(const std::string& key) {
    const json* v = find(key);
    if (!v) throw UnitsError("missing unit-bearing field '" + key_path(key) + "'");
    return as_point(*v, key);
  }
  Vec2 point(const std::string& key, const Vec2& fallback) { return opt_point(key).value_or(fallback); }

  Reader child(const std::string& key) {
    const json* v = find(key);
    static const json empty = json::object();
    return Reader(v ? *v : empty, key_path(key));
  }

  /// Rejects keys that were never asked for.
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (known_.count(key)) continue;
      for (const auto& k : known_) {
        for (const char* suffix : kUnitSuffixes) {
          if (k == key + suffix) {
            throw UnitsError("field '" + key_path(key) + "' needs units; write '" + key_path(k) + "'");
          }
        }
      }
      throw SchemaError(key_path(key), "unknown key");
    }
  }

  Vec2 as_point(const json& v, const std::string& key) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw SchemaError(key_path(key), "expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  double as_number(const json& v, const std::string& key) const {
    if (!v.is_number()) throw SchemaError(key_path(key), "expected a number");
    return v.get<double>();
  }
  int as_int(const json& v, const std::string& key) const {
    if (!v.is_number_integer()) throw SchemaError(key_path(key), "expected an integer");
    return v.get<int>();
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> known_;
};

template <class Enum>
Enum pick(Reader& r, const std::string& key, const std::string& fallback,
          std::initializer_list<std::pair<const char*, Enum>> options) {
  const std::string s = r.string(key, fallback);
  for (const auto& [name, value] : options) {
    if (s == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : options) allowed += std::string(allowed.empty() ? "" : ", ") + name;
  throw SchemaError(r.key_path(key), "'" + s + "' is not one of: " + allowed);
}

Axis read_axis(Reader& r, const std::string& key) {
  const json* v = r.find(key);
  if (!v) throw UnitsError("missing unit-bearing field '" + r.key_path(key) + "'");
  if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() ||
      !(*v)[2].is_number_integer()) {
    throw SchemaError(r.key_path(key), "expected [lo, hi, n]");
  }
  Axis a{(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<int>()};
  if (a.n < 1 || (a.n > 1 && !(a.hi > a.lo))) throw SchemaError(r.key_path(key), "needs n >= 1 and hi > lo");
  return a;
}

void read_d2d(Reader& r, ScenarioConfig& c) {
  D2DParams& d = c.d2d;
  d.utility = pick<D2DUtilityKind>(r, "utility", "huber",
                                   {{"huber", D2DUtilityKind::huber}, {"squared", D2DUtilityKind::squared}});
  d.mu = r.number("mu", d.mu);
  d.huber_constant = pick<HuberConstant>(r, "huber_constant", "corrected",
                                         {{"corrected", HuberConstant::corrected}, {"printed", HuberConstant::printed}});
  d.alpha = r.number("alpha", d.alpha);
  d.alpha_min = r.number("alpha_min", d.alpha_min);
  d.alpha_p = r.number("alpha_p", d.alpha_p);
  d.bandwidth_hz = r.number("bandwidth_hz", d.bandwidth_hz);
  d.sigma2 = r.number("sigma2", d.sigma2);
  d.d_min = r.number("d_min_m", d.d_min);

  Reader p = r.child("peer");
  if (!r.has("peer")) throw UnitsError("missing unit-bearing field '" + r.key_path("peer") + "'");
  d.peer.start = p.required_point("start_m");
  d.peer.dest = p.point("dest_m", d.peer.start);
  d.peer.schedule = pick<PeerSchedule>(p, "schedule", "linear_over_horizon",
                                       {{"linear_over_horizon", PeerSchedule::linear_over_horizon},
                                        {"constant_speed", PeerSchedule::constant_speed}});
  d.peer.speed = p.number("speed_m_per_slot", c.v_max);
  d.peer.noise_std = p.number("noise_std_m", 0.0);
  p.finish();
}

void read_ocean(Reader& r, ScenarioConfig& c, const std::filesystem::path& base_dir) {
  OceanParams& o = c.ocean;
  o.lambda_strategy = pick<LambdaStrategy>(r, "lambda_strategy", "direction_dependent",
                                           {{"direction_dependent", LambdaStrategy::direction_dependent},
                                            {"increasing", LambdaStrategy::increasing}});
  o.beta = r.number("beta", o.beta);
  o.perturbation_sigma_fraction = r.number("perturbation_sigma_fraction", 0.0);
  o.v_o_max = r.opt_number("v_o_max_m_per_s");

  if (!r.has("field")) throw SchemaError(r.key_path("field"), "required");
  Reader f = r.child("field");
  if (f.has("file")) {
    std::filesystem::path p = f.string("file", "");
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    o.field.file = p;
  }
  if (f.has("synthetic")) {
    Reader s = f.child("synthetic");
    const std::string type = s.string("type", "");
    if (type == "uniform") {
      o.field.synthetic = UniformFlow{s.number("u_m_per_s", 0.0), s.number("v_m_per_s", 0.0)};
    } else if (type == "single_gyre") {
      o.field.synthetic = SingleGyre{s.required_point("center_m"), s.required_unit_number("strength_m_per_s"),
                                     s.required_unit_number("radius_m")};
    } else if (type == "away_from_goal") {
      o.field.synthetic = AwayFromGoal{s.point("goal_m", c.goal.position), s.required_unit_number("speed_m_per_s")};
    } else {
      throw SchemaError(s.key_path("type"), "expected uniform, single_gyre or away_from_goal");
    }
    s.finish();
    o.field.x_axis = read_axis(f, "x_m");
    o.field.y_axis = read_axis(f, "y_m");
    o.field.t_axis = f.has("t_s") ? read_axis(f, "t_s") : Axis{0.0, 0.0, 1};
  }
  f.finish();
}

}  // namespace

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("TRAJSIM_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (*end != '\0') return std::nullopt;
  return static_cast<std::uint64_t>(v);
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ParsedConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config is not valid JSON: ") + e.what());
  }

  ParsedConfig out;
  out.canonical = doc.dump();
  out.hash = fnv1a_hex(out.canonical);
  ScenarioConfig& c = out.config;

  Reader r(doc, "");
  c.kind = pick<ScenarioKind>(r, "kind", "",
                              {{"d2d", ScenarioKind::d2d}, {"ocean", ScenarioKind::ocean}, {"adversary", ScenarioKind::adversary}});
  if (const json* s = r.find("seed")) {
    if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long long>() >= 0)) {
      throw SchemaError("seed", "expected a non-negative integer");
    }
    c.seed = s->get<std::uint64_t>();
    out.seed_from_config = true;
  } else {
    c.seed = env_seed().value_or(0);
  }

  if (c.kind == ScenarioKind::adversary) {
    Reader a = r.child("adversary");
    c.adversary.T = a.integer("T", c.adversary.T);
    c.adversary.W = a.number("W", c.adversary.W);
    c.adversary.policy = pick<AdversaryPolicy>(
        a, "policy", "ioga",
        {{"ioga", AdversaryPolicy::ioga}, {"zero", AdversaryPolicy::zero}, {"random", AdversaryPolicy::random}});
    a.finish();
    r.finish();
    resolve(c);
    return out;
  }

  c.slot_duration = r.number("slot_duration_s", 1.0);
  const auto per_slot = r.opt_number("v_max_m_per_slot");
  const auto per_second = r.opt_number("v_max_m_per_s");
  if (per_slot && per_second) throw SchemaError("v_max_m_per_slot", "give v_max in one unit only");
  if (!per_slot && !per_second) throw UnitsError("missing unit-bearing field 'v_max_m_per_slot' (or 'v_max_m_per_s')");
  c.v_max = per_slot ? *per_slot : *per_second * c.slot_duration;

  c.start = r.required_point("start_m");
  if (!r.has("goal")) throw UnitsError("missing unit-bearing field 'goal.position_m'");
  {
    Reader g = r.child("goal");
    c.goal.position = g.required_point("position_m");
    c.goal.velocity = g.point("velocity_m_per_slot", Vec2{});
    g.finish();
  }
  c.delta = r.integer("delta_slots", 0);
  if (c.delta < 0) throw SchemaError("delta_slots", "must be >= 0");
  c.horizon = r.opt_integer("horizon_slots");
  c.c_d = r.number("c_d", c.c_d);
  c.arrival_radius = r.opt_number("arrival_radius_m");
  c.mode = pick<UpdateMode>(r, "mode", "standard", {{"standard", UpdateMode::standard}, {"lookahead", UpdateMode::lookahead}});
  if (r.has("region_m")) {
    Reader b = r.child("region_m");
    const json* lo = b.find("lo");
    const json* hi = b.find("hi");
    if (!lo || !hi) throw SchemaError("region_m", "needs 'lo' and 'hi'");
    c.region = Box2D{b.as_point(*lo, "lo"), b.as_point(*hi, "hi")};
    b.finish();
  }
  {
    Reader s = r.child("step");
    c.margin = s.number("margin", c.margin);
    s.finish();
  }
  {
    Reader n = r.child("noise");
    c.noise.kind = pick<NoiseKind>(n, "kind", "none",
                                   {{"none", NoiseKind::none}, {"gaussian_decaying", NoiseKind::gaussian_decaying}});
    c.noise.eps0 = n.number("eps0", 0.0);
    c.noise.decay_q = n.number("decay_q", 0.0);
    n.finish();
  }
  {
    Reader o = r.child("offline");
    c.offline.max_iter = o.integer("max_iter", c.offline.max_iter);
    c.offline.tol = o.number("tol", c.offline.tol);
    c.offline.move_tol = o.number("move_tol_m", c.offline.move_tol);
    o.finish();
  }

  if (c.kind == ScenarioKind::d2d) {
    if (!r.has("d2d")) throw UnitsError("missing unit-bearing field 'd2d.peer.start_m'");
    Reader d = r.child("d2d");
    read_d2d(d, c);
    d.finish();
  } else {
    if (!r.has("ocean")) throw SchemaError("ocean", "required for kind 'ocean'");
    Reader o = r.child("ocean");
    read_ocean(o, c, base_dir);
    o.finish();
  }
  r.finish();
  resolve(c);
  return out;
}

ParsedConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.parent_path());
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& m, const std::filesystem::path& path) {
  json j;
  j["config_hash"] = m.config_hash;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  j["start_timestamp"] = m.start_timestamp;
  j["output_paths"] = m.output_paths;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace trajsim
