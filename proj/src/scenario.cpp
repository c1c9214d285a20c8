#include "platoon/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "platoon/envelope.hpp"
#include "platoon/errors.hpp"

namespace platoon {

namespace {

bool finite_pose(const Pose& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.phi); }

template <class F>
void collect(std::vector<std::string>& problems, const std::string& prefix, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    problems.push_back(prefix + e.what());
  }
}

void append_unique(std::vector<InitialViolation>& into, const std::vector<InitialViolation>& more) {
  for (const auto& v : more) {
    const bool seen = std::any_of(into.begin(), into.end(), [&](const InitialViolation& w) {
      return w.vehicle == v.vehicle && w.channel == v.channel;
    });
    if (!seen) into.push_back(v);
  }
}

}  // namespace

const char* to_string(BreachPolicy p) noexcept { return p == BreachPolicy::halt ? "halt" : "record"; }
const char* to_string(Integrator i) noexcept { return i == Integrator::rk4 ? "rk4" : "euler"; }

long Scenario::steps() const noexcept {
  const double q = duration / dt;
  const double nearest = std::round(q);
  if (std::fabs(q - nearest) <= 1e-9 * std::max(1.0, q)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(q));
}

std::vector<Pose> Scenario::initial_poses() const {
  std::vector<Pose> poses;
  poses.reserve(follower_poses.size() + 1);
  poses.push_back(leader_pose);
  poses.insert(poses.end(), follower_poses.begin(), follower_poses.end());
  return poses;
}

std::vector<Pose> place_followers(const Pose& leader, const std::vector<RelativePlacement>& placement) {
  std::vector<Pose> out;
  out.reserve(placement.size());
  Pose ahead = leader;
  for (const auto& rel : placement) {
    Pose p;
    p.phi = wrap_angle(ahead.phi + rel.gamma);
    // The predecessor lies at distance d along the line of sight phi + beta.
    const double sight = p.phi + rel.beta;
    p.x = ahead.x - rel.d * std::cos(sight);
    p.y = ahead.y - rel.d * std::sin(sight);
    out.push_back(p);
    ahead = p;
  }
  return out;
}

Scenario build_scenario(const ScenarioSpec& spec) {
  std::vector<std::string> problems;
  const int n = spec.n_followers;

  if (n < 1) problems.push_back("at least one follower is required");
  if (static_cast<int>(spec.params.size()) != n)
    problems.push_back("expected " + std::to_string(n) + " controller parameter sets, got " +
                       std::to_string(spec.params.size()));
  if (!(spec.dt > 0.0) || !std::isfinite(spec.dt)) problems.push_back("dt must be positive");
  if (!(spec.duration >= 0.0) || !std::isfinite(spec.duration)) problems.push_back("duration must be >= 0");
  if (!(spec.steady_window_fraction > 0.0 && spec.steady_window_fraction <= 1.0))
    problems.push_back("steady-state window fraction must lie in (0, 1]");
  if (!(spec.saturation.v_max > 0.0) || !(spec.saturation.omega_max > 0.0))
    problems.push_back("saturation limits must be positive");

  collect(problems, "", [&] { spec.constraints.validate(); });
  collect(problems, "", [&] { spec.camera.validate(); });
  if (spec.constraints.d_con > spec.camera.range)
    problems.push_back("d_con exceeds the camera range");
  if (spec.constraints.beta_con > spec.camera.aov / 2.0)
    problems.push_back("beta_con exceeds half the camera angle of view");
  collect(problems, "", [&] { validate(spec.leader); });
  if (!finite_pose(spec.leader_pose)) problems.push_back("leader pose must be finite");

  for (std::size_t i = 0; i < spec.params.size(); ++i) {
    const auto& p = spec.params[i];
    const std::string who = "vehicle " + std::to_string(i + 1) + ": ";
    collect(problems, who, [&] { p.validate(); });
    collect(problems, who, [&] {
      const EnvelopeBounds b = derive_bounds(p.d_des, spec.constraints);
      if (p.env.distance.m_lower != b.m_lower_d || p.env.distance.m_upper != b.m_upper_d ||
          p.env.bearing.m_lower != b.m_beta || p.env.bearing.m_upper != b.m_beta)
        throw ConfigError("envelope bounds disagree with the constraints");
    });
  }

  const auto* absolute = std::get_if<std::vector<Pose>>(&spec.initial);
  const auto* relative = std::get_if<std::vector<RelativePlacement>>(&spec.initial);
  const std::size_t placed = absolute ? absolute->size() : relative->size();
  if (static_cast<int>(placed) != n)
    problems.push_back("expected " + std::to_string(n) + " initial placements, got " + std::to_string(placed));
  if (absolute && !std::all_of(absolute->begin(), absolute->end(), finite_pose))
    problems.push_back("initial poses must be finite");

  if (!problems.empty()) throw ConfigError(std::move(problems));

  Scenario s;
  s.n_followers = n;
  s.leader = spec.leader;
  s.leader_pose = spec.leader_pose;
  s.leader_pose.phi = wrap_angle(spec.leader_pose.phi);
  s.params = spec.params;
  s.constraints = spec.constraints;
  s.camera = spec.camera;
  s.dt = spec.dt;
  s.duration = spec.duration;
  s.integrator = spec.integrator;
  s.breach_policy = spec.breach_policy;
  s.steady_window_fraction = spec.steady_window_fraction;
  s.saturation = spec.saturation;
  if (absolute) {
    s.follower_poses = *absolute;
    for (auto& p : s.follower_poses) p.phi = wrap_angle(p.phi);
  } else {
    s.follower_poses = place_followers(s.leader_pose, *relative);
  }

  // Initial feasibility on the geometry as it will actually be measured.
  std::vector<double> e_d(n), e_beta(n);
  std::vector<EnvelopePair> envs(n);
  const auto poses = s.initial_poses();
  for (int i = 0; i < n; ++i) {
    Measurement m;
    try {
      m = relative_measurement(poses[i + 1], poses[i]);
    } catch (const DegenerateGeometry&) {
      throw ConfigError("vehicle " + std::to_string(i + 1) + " starts on top of its predecessor");
    }
    e_d[i] = distance_error(m, s.params[i].d_des);
    e_beta[i] = bearing_error(m);
    envs[i] = s.params[i].env;
  }
  auto violations = find_initial_violations(e_d, e_beta, envs);

  // Declared triples are checked as written too, so a value placed exactly on a
  // boundary cannot slip through on round-off in the pose construction.
  if (relative) {
    for (int i = 0; i < n; ++i) {
      e_d[i] = (*relative)[i].d - s.params[i].d_des;
      e_beta[i] = (*relative)[i].beta;
    }
    append_unique(violations, find_initial_violations(e_d, e_beta, envs));
    std::sort(violations.begin(), violations.end(), [](const InitialViolation& a, const InitialViolation& b) {
      return a.vehicle != b.vehicle ? a.vehicle < b.vehicle : a.channel < b.channel;
    });
  }
  if (!violations.empty()) throw InitialFeasibilityError(std::move(violations));
  return s;
}

}  // namespace platoon
