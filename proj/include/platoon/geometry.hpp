#pragma once

#include "platoon/kinematics.hpp"

namespace platoon {

// Camera-derived observation of the predecessor.
struct Measurement {
  double d = 0.0;     // center-to-center distance [m]
  double beta = 0.0;  // bearing from follower heading to line of sight [rad], (-pi, pi]

  bool operator==(const Measurement&) const = default;
};

struct CameraModel {
  double range = 0.0;  // max detection distance [m]
  double aov = 0.0;    // full angle of view [rad]

  // Throws ConfigError unless range > 0 and 0 < aov < pi.
  void validate() const;
  bool operator==(const CameraModel&) const = default;
};

struct Constraints {
  double d_col = 0.0;     // [m]
  double d_con = 0.0;     // [m]
  double beta_con = 0.0;  // [rad]

  // Throws ConfigError unless 0 < d_col < d_con and 0 < beta_con < pi/2.
  void validate() const;
  bool operator==(const Constraints&) const = default;
};

enum class Visibility { visible, out_of_range, out_of_fov };
enum class ConstraintStatus { ok, collision, connectivity_break };

const char* to_string(Visibility v) noexcept;
const char* to_string(ConstraintStatus s) noexcept;
// Inverse of to_string; throws ConfigError on unknown text.
ConstraintStatus parse_constraint_status(const char* text);

// beta = wrap(atan2(dy, dx) - phi_follower). Throws DegenerateGeometry when the
// positions coincide.
Measurement relative_measurement(const Pose& follower, const Pose& predecessor);

// gamma = wrap(phi_follower - phi_predecessor).
double relative_heading(const Pose& follower, const Pose& predecessor);

// out_of_range wins when both tests fail.
Visibility camera_visibility(const Measurement& m, const CameraModel& cam) noexcept;

// All comparisons are strict; d <= d_col is a collision, d >= d_con or
// |beta| >= beta_con a connectivity break.
ConstraintStatus constraint_status(const Measurement& m, const Constraints& c) noexcept;

}  // namespace platoon
