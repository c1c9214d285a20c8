#include "platoon/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "platoon/errors.hpp"

namespace platoon {

using nlohmann::json;

namespace {

constexpr double kDeg = kPi / 180.0;

struct UnitEntry {
  std::string_view name;
  double scale;
};

std::vector<UnitEntry> units_for(Dimension dim) {
  switch (dim) {
    case Dimension::length: return {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}};
    case Dimension::time: return {{"s", 1.0}, {"ms", 1e-3}};
    case Dimension::angle: return {{"rad", 1.0}, {"deg", kDeg}};
    case Dimension::speed: return {{"m/s", 1.0}};
    case Dimension::angular_rate: return {{"rad/s", 1.0}, {"deg/s", kDeg}};
    case Dimension::rate: return {{"1/s", 1.0}, {"/s", 1.0}};
  }
  return {};
}

const char* canonical_unit(Dimension dim) {
  switch (dim) {
    case Dimension::length: return "m";
    case Dimension::time: return "s";
    case Dimension::angle: return "rad";
    case Dimension::speed: return "m/s";
    case Dimension::angular_rate: return "rad/s";
    case Dimension::rate: return "1/s";
  }
  return "";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// Walks one JSON object, recording every problem instead of stopping at the first.
class Reader {
 public:
  Reader(std::vector<std::string>& problems, const json* node, std::string path, bool report_missing = true)
      : problems_(problems), node_(node), path_(std::move(path)), report_missing_(report_missing) {
    if (node_ && !node_->is_object()) {
      problems_.push_back("'" + path_ + "' must be an object");
      node_ = nullptr;
    }
  }

  bool present() const { return node_ != nullptr; }

  const json* get(const std::string& key, bool required) {
    known_.insert(key);
    if (node_) {
      auto it = node_->find(key);
      if (it != node_->end()) return &*it;
    }
    if (required && report_missing_) problems_.push_back("missing required key '" + where(key) + "'");
    return nullptr;
  }

  Reader section(const std::string& key, bool required) {
    const json* n = get(key, false);
    return Reader(problems_, n, where(key), report_missing_ && (required || n != nullptr));
  }

  std::optional<double> quantity(const std::string& key, Dimension dim, bool required = true) {
    const json* n = get(key, required);
    if (!n) return std::nullopt;
    if (!n->is_string()) {
      problems_.push_back("'" + where(key) + "' needs an explicit unit, e.g. \"1.0 " + canonical_unit(dim) + "\"");
      return std::nullopt;
    }
    try {
      return parse_quantity(n->get<std::string>(), dim, where(key));
    } catch (const ConfigError& e) {
      problems_.push_back(e.what());
      return std::nullopt;
    }
  }

  std::optional<double> number(const std::string& key, bool required = true) {
    const json* n = get(key, required);
    if (!n) return std::nullopt;
    if (!n->is_number()) {
      problems_.push_back("'" + where(key) + "' must be a number");
      return std::nullopt;
    }
    return n->get<double>();
  }

  std::optional<int> integer(const std::string& key, bool required = true) {
    const json* n = get(key, required);
    if (!n) return std::nullopt;
    if (!n->is_number_integer()) {
      problems_.push_back("'" + where(key) + "' must be an integer");
      return std::nullopt;
    }
    return n->get<int>();
  }

  std::optional<std::string> text(const std::string& key, bool required = true) {
    const json* n = get(key, required);
    if (!n) return std::nullopt;
    if (!n->is_string()) {
      problems_.push_back("'" + where(key) + "' must be a string");
      return std::nullopt;
    }
    return n->get<std::string>();
  }

  std::optional<bool> boolean(const std::string& key, bool required = true) {
    const json* n = get(key, required);
    if (!n) return std::nullopt;
    if (!n->is_boolean()) {
      problems_.push_back("'" + where(key) + "' must be true or false");
      return std::nullopt;
    }
    return n->get<bool>();
  }

  void fail(const std::string& msg) { problems_.push_back(msg); }

  // Reports keys that were never asked for.
  void finish() {
    if (!node_) return;
    for (auto it = node_->begin(); it != node_->end(); ++it)
      if (!known_.count(it.key())) problems_.push_back("unknown key '" + where(it.key()) + "'");
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  const std::string& path() const { return path_; }

 private:
  std::vector<std::string>& problems_;
  const json* node_;
  std::string path_;
  bool report_missing_;
  std::set<std::string> known_;
};

template <class T>
void assign(T& target, const std::optional<T>& v) {
  if (v) target = *v;
}

RelativePlacement read_relative(Reader r) {
  RelativePlacement p;
  assign(p.d, r.quantity("d", Dimension::length));
  assign(p.beta, r.quantity("beta", Dimension::angle));
  assign(p.gamma, r.quantity("gamma", Dimension::angle));
  r.finish();
  return p;
}

Pose read_pose(Reader r) {
  Pose p;
  assign(p.x, r.quantity("x", Dimension::length));
  assign(p.y, r.quantity("y", Dimension::length));
  assign(p.phi, r.quantity("phi", Dimension::angle));
  r.finish();
  return p;
}

void read_initial(Reader r, Config& cfg, std::vector<std::string>& problems) {
  const json* rel = r.get("relative", false);
  const json* abs = r.get("absolute", false);
  if (r.present() && (rel != nullptr) == (abs != nullptr))
    r.fail("'" + r.path() + "' needs exactly one of 'relative' or 'absolute'");
  const int n = cfg.followers;
  if (rel) {
    std::vector<RelativePlacement> out;
    if (rel->is_array()) {
      for (std::size_t i = 0; i < rel->size(); ++i)
        out.push_back(read_relative(Reader(problems, &(*rel)[i], r.where("relative") + "[" + std::to_string(i) + "]")));
      if (n > 0 && static_cast<int>(out.size()) != n)
        r.fail("'" + r.where("relative") + "' lists " + std::to_string(out.size()) + " entries for " +
               std::to_string(n) + " followers");
    } else {
      const RelativePlacement one = read_relative(Reader(problems, rel, r.where("relative")));
      out.assign(static_cast<std::size_t>(std::max(n, 0)), one);
    }
    cfg.initial = std::move(out);
  } else if (abs) {
    std::vector<Pose> out;
    if (!abs->is_array()) {
      r.fail("'" + r.where("absolute") + "' must be an array of poses");
    } else {
      for (std::size_t i = 0; i < abs->size(); ++i)
        out.push_back(read_pose(Reader(problems, &(*abs)[i], r.where("absolute") + "[" + std::to_string(i) + "]")));
      if (n > 0 && static_cast<int>(out.size()) != n)
        r.fail("'" + r.where("absolute") + "' lists " + std::to_string(out.size()) + " poses for " +
               std::to_string(n) + " followers");
    }
    cfg.initial = std::move(out);
  } else if (!r.present()) {
    r.get("relative", true);
  }
  r.finish();
}

LeaderTrajectory read_trajectory(Reader r, std::vector<std::string>& problems) {
  const auto kind = r.text("kind");
  LeaderTrajectory out = ConstantMotion{};
  if (!kind) {
    r.finish();
    return out;
  }
  if (*kind == "constant") {
    ConstantMotion c;
    assign(c.v0, r.quantity("v0", Dimension::speed));
    assign(c.omega0, r.quantity("omega0", Dimension::angular_rate));
    out = c;
  } else if (*kind == "sinusoidal") {
    SinusoidalTurn s;
    assign(s.v0, r.quantity("v0", Dimension::speed));
    assign(s.amplitude, r.quantity("amplitude", Dimension::angular_rate));
    assign(s.frequency, r.quantity("frequency", Dimension::angular_rate));
    out = s;
  } else if (*kind == "schedule") {
    PiecewiseSchedule sched;
    const json* segs = r.get("segments", true);
    if (segs && !segs->is_array()) {
      r.fail("'" + r.where("segments") + "' must be an array");
    } else if (segs) {
      for (std::size_t i = 0; i < segs->size(); ++i) {
        Reader s(problems, &(*segs)[i], r.where("segments") + "[" + std::to_string(i) + "]");
        ScheduleSegment seg;
        assign(seg.start, s.quantity("start", Dimension::time));
        assign(seg.v0, s.quantity("v0", Dimension::speed));
        assign(seg.omega0, s.quantity("omega0", Dimension::angular_rate));
        s.finish();
        sched.segments.push_back(seg);
      }
    }
    out = sched;
  } else {
    r.fail("'" + r.where("kind") + "' must be one of constant, schedule, sinusoidal");
  }
  r.finish();
  return out;
}

json pose_json(const Pose& p) {
  return {{"x", format_quantity(p.x, Dimension::length)},
          {"y", format_quantity(p.y, Dimension::length)},
          {"phi", format_quantity(p.phi, Dimension::angle)}};
}

json trajectory_json(const LeaderTrajectory& traj) {
  if (const auto* c = std::get_if<ConstantMotion>(&traj))
    return {{"kind", "constant"},
            {"v0", format_quantity(c->v0, Dimension::speed)},
            {"omega0", format_quantity(c->omega0, Dimension::angular_rate)}};
  if (const auto* s = std::get_if<SinusoidalTurn>(&traj))
    return {{"kind", "sinusoidal"},
            {"v0", format_quantity(s->v0, Dimension::speed)},
            {"amplitude", format_quantity(s->amplitude, Dimension::angular_rate)},
            {"frequency", format_quantity(s->frequency, Dimension::angular_rate)}};
  const auto& sched = std::get<PiecewiseSchedule>(traj);
  json segs = json::array();
  for (const auto& seg : sched.segments)
    segs.push_back({{"start", format_quantity(seg.start, Dimension::time)},
                    {"v0", format_quantity(seg.v0, Dimension::speed)},
                    {"omega0", format_quantity(seg.omega0, Dimension::angular_rate)}});
  return {{"kind", "schedule"}, {"segments", segs}};
}

}  // namespace

double parse_quantity(std::string_view text, Dimension dim, std::string_view key) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || !std::isfinite(value))
    throw ConfigError("'" + std::string(key) + "': cannot read a number from \"" + std::string(text) + "\"");
  const std::string_view unit = trim(std::string_view(res.ptr, static_cast<std::size_t>(s.data() + s.size() - res.ptr)));
  if (unit.empty())
    throw ConfigError("'" + std::string(key) + "' needs an explicit unit (" + canonical_unit(dim) + ")");
  for (const auto& u : units_for(dim))
    if (u.name == unit) return u.scale == 1.0 ? value : value * u.scale;
  std::string allowed;
  for (const auto& u : units_for(dim)) allowed += (allowed.empty() ? "" : ", ") + std::string(u.name);
  throw ConfigError("'" + std::string(key) + "': unit '" + std::string(unit) + "' not allowed here (use " +
                    allowed + ")");
}

std::string format_quantity(double value, Dimension dim) { return shortest(value) + " " + canonical_unit(dim); }

Config parse_config(std::string_view text) {
  json root;
  if (trim(text).empty()) {
    root = json::object();
  } else {
    try {
      root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
      throw ConfigError(std::vector<std::string>{std::string("malformed JSON: ") + e.what()});
    }
  }

  std::vector<std::string> problems;
  Config cfg;
  Reader top(problems, &root, "");

  if (auto v = top.integer("schema_version")) {
    if (*v != kSchemaVersion)
      top.fail("unsupported schema_version " + std::to_string(*v) + " (expected " + std::to_string(kSchemaVersion) + ")");
    cfg.schema_version = *v;
  }

  {
    Reader r = top.section("platoon", true);
    if (auto n = r.integer("followers")) {
      if (*n < 1) r.fail("'platoon.followers' must be at least 1");
      cfg.followers = *n;
    }
    assign(cfg.desired_distance, r.quantity("desired_distance", Dimension::length));
    read_initial(r.section("initial", true), cfg, problems);
    r.finish();
  }

  {
    Reader r = top.section("leader", true);
    Reader pose = r.section("pose", false);
    if (pose.present()) cfg.leader_pose = read_pose(pose);
    cfg.leader = read_trajectory(r.section("trajectory", true), problems);
    r.finish();
  }

  {
    Reader r = top.section("constraints", true);
    assign(cfg.constraints.d_col, r.quantity("d_col", Dimension::length));
    assign(cfg.constraints.d_con, r.quantity("d_con", Dimension::length));
    assign(cfg.constraints.beta_con, r.quantity("beta_con", Dimension::angle));
    r.finish();
  }

  {
    Reader r = top.section("camera", true);
    assign(cfg.camera.range, r.quantity("range", Dimension::length));
    assign(cfg.camera.aov, r.quantity("angle_of_view", Dimension::angle));
    r.finish();
  }

  {
    Reader r = top.section("controller", true);
    auto& c = cfg.controller;
    assign(c.k_d, r.number("k_d"));
    assign(c.k_beta, r.number("k_beta"));
    assign(c.l_d, r.quantity("l_d", Dimension::rate));
    assign(c.l_beta, r.quantity("l_beta", Dimension::rate));
    assign(c.rho_inf_d, r.quantity("rho_inf_d", Dimension::length));
    assign(c.rho_inf_beta, r.quantity("rho_inf_beta", Dimension::angle));
    assign(c.soft_guard, r.number("soft_guard", false));
    if (const json* ov = r.get("overrides", false)) {
      if (!ov->is_array()) {
        r.fail("'controller.overrides' must be an array");
      } else {
        for (std::size_t i = 0; i < ov->size(); ++i) {
          Reader o(problems, &(*ov)[i], "controller.overrides[" + std::to_string(i) + "]");
          VehicleOverride entry;
          assign(entry.vehicle, o.integer("vehicle"));
          entry.k_d = o.number("k_d", false);
          entry.k_beta = o.number("k_beta", false);
          entry.desired_distance = o.quantity("desired_distance", Dimension::length, false);
          o.finish();
          if (cfg.followers > 0 && (entry.vehicle < 1 || entry.vehicle > cfg.followers))
            o.fail("'" + o.where("vehicle") + "' must lie in 1.." + std::to_string(cfg.followers));
          cfg.overrides.push_back(entry);
        }
      }
    }
    r.finish();
  }

  {
    Reader r = top.section("simulation", true);
    assign(cfg.dt, r.quantity("dt", Dimension::time));
    assign(cfg.duration, r.quantity("duration", Dimension::time));
    if (auto s = r.text("integrator", false)) {
      if (*s == "rk4") cfg.integrator = Integrator::rk4;
      else if (*s == "euler") cfg.integrator = Integrator::euler;
      else r.fail("'simulation.integrator' must be rk4 or euler");
    }
    if (auto s = r.text("breach_policy", false)) {
      if (*s == "halt") cfg.breach_policy = BreachPolicy::halt;
      else if (*s == "record") cfg.breach_policy = BreachPolicy::record;
      else r.fail("'simulation.breach_policy' must be halt or record");
    }
    assign(cfg.steady_window_fraction, r.number("steady_window_fraction", false));
    Reader sat = r.section("saturation", false);
    if (sat.present()) {
      assign(cfg.saturation.v_max, sat.quantity("v_max", Dimension::speed, false));
      assign(cfg.saturation.omega_max, sat.quantity("omega_max", Dimension::angular_rate, false));
      assign(cfg.saturation.clamp, sat.boolean("clamp", false));
      sat.finish();
    }
    r.finish();
  }

  {
    Reader r = top.section("output", false);
    if (r.present()) {
      assign(cfg.output.trace, r.text("trace", false));
      assign(cfg.output.report, r.text("report", false));
      assign(cfg.output.plot_data, r.boolean("plot_data", false));
      if (auto d = r.integer("decimation", false)) {
        if (*d < 1) r.fail("'output.decimation' must be at least 1");
        cfg.output.decimation = *d;
      }
      r.finish();
    }
  }
  top.finish();

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const Config& cfg) {
  json root;
  root["schema_version"] = cfg.schema_version;

  json initial;
  if (const auto* rel = std::get_if<std::vector<RelativePlacement>>(&cfg.initial)) {
    json arr = json::array();
    for (const auto& p : *rel)
      arr.push_back({{"d", format_quantity(p.d, Dimension::length)},
                     {"beta", format_quantity(p.beta, Dimension::angle)},
                     {"gamma", format_quantity(p.gamma, Dimension::angle)}});
    initial["relative"] = arr;
  } else {
    json arr = json::array();
    for (const auto& p : std::get<std::vector<Pose>>(cfg.initial)) arr.push_back(pose_json(p));
    initial["absolute"] = arr;
  }
  root["platoon"] = {{"followers", cfg.followers},
                     {"desired_distance", format_quantity(cfg.desired_distance, Dimension::length)},
                     {"initial", initial}};
  root["leader"] = {{"pose", pose_json(cfg.leader_pose)}, {"trajectory", trajectory_json(cfg.leader)}};
  root["constraints"] = {{"d_col", format_quantity(cfg.constraints.d_col, Dimension::length)},
                         {"d_con", format_quantity(cfg.constraints.d_con, Dimension::length)},
                         {"beta_con", format_quantity(cfg.constraints.beta_con, Dimension::angle)}};
  root["camera"] = {{"range", format_quantity(cfg.camera.range, Dimension::length)},
                    {"angle_of_view", format_quantity(cfg.camera.aov, Dimension::angle)}};

  const auto& c = cfg.controller;
  json ctrl = {{"k_d", c.k_d},
               {"k_beta", c.k_beta},
               {"l_d", format_quantity(c.l_d, Dimension::rate)},
               {"l_beta", format_quantity(c.l_beta, Dimension::rate)},
               {"rho_inf_d", format_quantity(c.rho_inf_d, Dimension::length)},
               {"rho_inf_beta", format_quantity(c.rho_inf_beta, Dimension::angle)},
               {"soft_guard", c.soft_guard}};
  if (!cfg.overrides.empty()) {
    json arr = json::array();
    for (const auto& o : cfg.overrides) {
      json e = {{"vehicle", o.vehicle}};
      if (o.k_d) e["k_d"] = *o.k_d;
      if (o.k_beta) e["k_beta"] = *o.k_beta;
      if (o.desired_distance) e["desired_distance"] = format_quantity(*o.desired_distance, Dimension::length);
      arr.push_back(e);
    }
    ctrl["overrides"] = arr;
  }
  root["controller"] = ctrl;

  json sim = {{"dt", format_quantity(cfg.dt, Dimension::time)},
              {"duration", format_quantity(cfg.duration, Dimension::time)},
              {"integrator", to_string(cfg.integrator)},
              {"breach_policy", to_string(cfg.breach_policy)},
              {"steady_window_fraction", cfg.steady_window_fraction}};
  json sat = {{"clamp", cfg.saturation.clamp}};
  if (std::isfinite(cfg.saturation.v_max)) sat["v_max"] = format_quantity(cfg.saturation.v_max, Dimension::speed);
  if (std::isfinite(cfg.saturation.omega_max))
    sat["omega_max"] = format_quantity(cfg.saturation.omega_max, Dimension::angular_rate);
  sim["saturation"] = sat;
  root["simulation"] = sim;

  root["output"] = {{"trace", cfg.output.trace},
                    {"report", cfg.output.report},
                    {"plot_data", cfg.output.plot_data},
                    {"decimation", cfg.output.decimation}};
  return root.dump(2) + "\n";
}

ScenarioSpec to_scenario_spec(const Config& cfg) {
  ScenarioSpec spec;
  spec.n_followers = cfg.followers;
  spec.leader = cfg.leader;
  spec.leader_pose = cfg.leader_pose;
  spec.initial = cfg.initial;
  spec.constraints = cfg.constraints;
  spec.camera = cfg.camera;
  spec.dt = cfg.dt;
  spec.duration = cfg.duration;
  spec.integrator = cfg.integrator;
  spec.breach_policy = cfg.breach_policy;
  spec.steady_window_fraction = cfg.steady_window_fraction;
  spec.saturation = cfg.saturation;

  std::vector<std::string> problems;
  for (const auto& o : cfg.overrides)
    if (o.vehicle < 1 || o.vehicle > cfg.followers)
      problems.push_back("override for vehicle " + std::to_string(o.vehicle) + " but the platoon has " +
                         std::to_string(cfg.followers) + " followers");
  const auto& c = cfg.controller;
  for (int i = 1; i <= cfg.followers; ++i) {
    double k_d = c.k_d, k_beta = c.k_beta, d_des = cfg.desired_distance;
    for (const auto& o : cfg.overrides) {
      if (o.vehicle != i) continue;
      if (o.k_d) k_d = *o.k_d;
      if (o.k_beta) k_beta = *o.k_beta;
      if (o.desired_distance) d_des = *o.desired_distance;
    }
    try {
      ControllerParams p =
          make_controller_params(k_d, k_beta, d_des, cfg.constraints, c.l_d, c.rho_inf_d, c.l_beta, c.rho_inf_beta);
      p.soft_guard = c.soft_guard;
      p.validate();
      spec.params.push_back(p);
    } catch (const ConfigError& e) {
      problems.push_back("vehicle " + std::to_string(i) + ": " + e.what());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return spec;
}

Scenario scenario_from_config(const Config& config) { return build_scenario(to_scenario_spec(config)); }

Config reference_config(bool rescaled_gain) {
  Config cfg;
  cfg.followers = 7;
  cfg.desired_distance = 0.75;
  cfg.initial = std::vector<RelativePlacement>(7, RelativePlacement{1.2, 0.0, 0.0});
  cfg.leader = SinusoidalTurn{0.3, 0.2, 0.2};
  cfg.constraints = {0.0375, 2.0, 45.0 * kDeg};
  cfg.camera = {2.0, 90.0 * kDeg};
  cfg.controller.k_d = rescaled_gain ? 0.5 : 0.005;
  cfg.controller.k_beta = 0.001;
  cfg.controller.l_d = 0.5;
  cfg.controller.l_beta = 0.5;
  cfg.controller.rho_inf_d = 0.0625;
  cfg.controller.rho_inf_beta = 1.15 * kDeg;
  cfg.dt = 1e-3;
  cfg.duration = 60.0;
  cfg.output.decimation = 10;
  return cfg;
}

}  // namespace platoon
