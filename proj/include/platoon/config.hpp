#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "platoon/geometry.hpp"
#include "platoon/kinematics.hpp"
#include "platoon/scenario.hpp"

namespace platoon {

inline constexpr int kSchemaVersion = 1;

// Controller settings shared by all followers unless overridden.
struct ControllerSettings {
  double k_d = 0.0;
  double k_beta = 0.0;
  double l_d = 0.0;           // [1/s]
  double l_beta = 0.0;        // [1/s]
  double rho_inf_d = 0.0;     // [m]
  double rho_inf_beta = 0.0;  // [rad]
  double soft_guard = 0.0;

  bool operator==(const ControllerSettings&) const = default;
};

// Heterogeneous per-vehicle values (1-based vehicle index).
struct VehicleOverride {
  int vehicle = 0;
  std::optional<double> k_d;
  std::optional<double> k_beta;
  std::optional<double> desired_distance;

  bool operator==(const VehicleOverride&) const = default;
};

struct OutputOptions {
  std::string trace = "trace.csv";
  std::string report = "report.json";
  bool plot_data = true;
  int decimation = 1;

  bool operator==(const OutputOptions&) const = default;
};

// Parsed configuration; all quantities in SI units and radians.
struct Config {
  int schema_version = kSchemaVersion;
  int followers = 0;
  double desired_distance = 0.0;
  InitialPlacement initial = std::vector<RelativePlacement>{};
  Pose leader_pose;
  LeaderTrajectory leader = ConstantMotion{};
  Constraints constraints;
  CameraModel camera;
  ControllerSettings controller;
  std::vector<VehicleOverride> overrides;
  double dt = 0.0;
  double duration = 0.0;
  Integrator integrator = Integrator::rk4;
  BreachPolicy breach_policy = BreachPolicy::halt;
  double steady_window_fraction = 0.25;
  SaturationLimits saturation;
  OutputOptions output;

  bool operator==(const Config&) const = default;
};

enum class Dimension { length, time, angle, speed, angular_rate, rate };

// Parses "<number> <unit>" (space optional) into SI / radians. Bare numbers are
// rejected. Throws ConfigError naming `key`.
double parse_quantity(std::string_view text, Dimension dim, std::string_view key);

// Shortest text that parses back to exactly `value`, followed by the canonical unit.
std::string format_quantity(double value, Dimension dim);

// Parses JSON text. Empty text is treated as an empty object. Throws
// ConfigError carrying every problem found (missing keys, unknown keys,
// unit-less quantities, invalid values).
Config parse_config(std::string_view text);
Config load_config(const std::string& path);

// JSON text that parse_config maps back to an identical Config.
std::string serialize_config(const Config& config);

// Expands shared settings and overrides into per-vehicle parameters.
// Throws ConfigError when a desired distance is incompatible with the constraints.
ScenarioSpec to_scenario_spec(const Config& config);

// Parse, expand and validate in one go.
Scenario scenario_from_config(const Config& config);

// Ideal-kinematics analog of the published scenario: 7 followers, sinusoidal
// leader turn, collinear start at 1.2 m spacing. With rescaled_gain the distance
// gain is 0.5 instead of 0.005 (see README).
Config reference_config(bool rescaled_gain = false);

}  // namespace platoon
