#pragma once

#include <limits>
#include <variant>
#include <vector>

#include "platoon/controller.hpp"
#include "platoon/geometry.hpp"
#include "platoon/kinematics.hpp"

namespace platoon {

enum class BreachPolicy { halt, record };

const char* to_string(BreachPolicy p) noexcept;
const char* to_string(Integrator i) noexcept;

// Follower placement relative to its predecessor: distance, bearing and
// relative heading gamma = phi_follower - phi_predecessor.
struct RelativePlacement {
  double d = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  bool operator==(const RelativePlacement&) const = default;
};

using InitialPlacement = std::variant<std::vector<Pose>, std::vector<RelativePlacement>>;

// Optional actuator-limit diagnostic. Exceeding a limit is counted; values are
// only clamped when clamp is set.
struct SaturationLimits {
  double v_max = std::numeric_limits<double>::infinity();
  double omega_max = std::numeric_limits<double>::infinity();
  bool clamp = false;

  bool operator==(const SaturationLimits&) const = default;
};

// Unvalidated scenario description, as produced from a config file.
struct ScenarioSpec {
  int n_followers = 0;
  LeaderTrajectory leader = ConstantMotion{};
  Pose leader_pose;
  InitialPlacement initial = std::vector<RelativePlacement>{};
  std::vector<ControllerParams> params;  // one per follower, front to back
  Constraints constraints;
  CameraModel camera;
  double dt = 1e-3;
  double duration = 0.0;
  Integrator integrator = Integrator::rk4;
  BreachPolicy breach_policy = BreachPolicy::halt;
  double steady_window_fraction = 0.25;
  SaturationLimits saturation;

  bool operator==(const ScenarioSpec&) const = default;
};

// Validated, ready-to-run scenario. Obtain through build_scenario.
struct Scenario {
  int n_followers = 0;
  LeaderTrajectory leader;
  Pose leader_pose;
  std::vector<Pose> follower_poses;  // absolute initial poses, front to back
  std::vector<ControllerParams> params;
  Constraints constraints;
  CameraModel camera;
  double dt = 0.0;
  double duration = 0.0;
  Integrator integrator = Integrator::rk4;
  BreachPolicy breach_policy = BreachPolicy::halt;
  double steady_window_fraction = 0.25;
  SaturationLimits saturation;

  // ceil(duration / dt), ignoring round-off in the quotient.
  long steps() const noexcept;
  // All N + 1 initial poses, leader first.
  std::vector<Pose> initial_poses() const;
};

// Places followers front to back from (d, beta, gamma) triples starting at the leader.
std::vector<Pose> place_followers(const Pose& leader, const std::vector<RelativePlacement>& placement);

// Validates everything and checks initial feasibility. Throws ConfigError
// (listing every structural problem) or InitialFeasibilityError.
Scenario build_scenario(const ScenarioSpec& spec);

}  // namespace platoon
