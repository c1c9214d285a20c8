#include "platoon/geometry.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "platoon/errors.hpp"

namespace platoon {

void CameraModel::validate() const {
  if (!(range > 0.0) || !std::isfinite(range)) throw ConfigError("camera: range must be positive");
  if (!(aov > 0.0 && aov < kPi)) throw ConfigError("camera: angle of view must lie in (0, 180) deg");
}

void Constraints::validate() const {
  if (!(d_col > 0.0)) throw ConfigError("constraints: d_col must be positive");
  if (!(d_con > d_col) || !std::isfinite(d_con))
    throw ConfigError("constraints: d_con must exceed d_col");
  if (!(beta_con > 0.0 && beta_con < kPi / 2.0))
    throw ConfigError("constraints: beta_con must lie in (0, 90) deg");
}

const char* to_string(Visibility v) noexcept {
  switch (v) {
    case Visibility::visible: return "visible";
    case Visibility::out_of_range: return "out_of_range";
    case Visibility::out_of_fov: return "out_of_fov";
  }
  return "?";
}

const char* to_string(ConstraintStatus s) noexcept {
  switch (s) {
    case ConstraintStatus::ok: return "ok";
    case ConstraintStatus::collision: return "collision";
    case ConstraintStatus::connectivity_break: return "connectivity_break";
  }
  return "?";
}

ConstraintStatus parse_constraint_status(const char* text) {
  for (auto s : {ConstraintStatus::ok, ConstraintStatus::collision, ConstraintStatus::connectivity_break})
    if (std::strcmp(text, to_string(s)) == 0) return s;
  throw ConfigError(std::string("unknown constraint status '") + text + "'");
}

Measurement relative_measurement(const Pose& follower, const Pose& predecessor) {
  const double dx = predecessor.x - follower.x;
  const double dy = predecessor.y - follower.y;
  const double d = std::hypot(dx, dy);
  if (d == 0.0) throw DegenerateGeometry("relative_measurement: coincident vehicle positions");
  return {d, wrap_angle(std::atan2(dy, dx) - follower.phi)};
}

double relative_heading(const Pose& follower, const Pose& predecessor) {
  return wrap_angle(follower.phi - predecessor.phi);
}

Visibility camera_visibility(const Measurement& m, const CameraModel& cam) noexcept {
  if (!(m.d <= cam.range)) return Visibility::out_of_range;
  if (!(std::fabs(m.beta) <= cam.aov / 2.0)) return Visibility::out_of_fov;
  return Visibility::visible;
}

ConstraintStatus constraint_status(const Measurement& m, const Constraints& c) noexcept {
  if (!(m.d > c.d_col)) return ConstraintStatus::collision;
  if (!(m.d < c.d_con) || !(std::fabs(m.beta) < c.beta_con)) return ConstraintStatus::connectivity_break;
  return ConstraintStatus::ok;
}

}  // namespace platoon
