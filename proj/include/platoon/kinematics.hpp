#pragma once

#include <numbers>
#include <variant>
#include <vector>

namespace platoon {

inline constexpr double kPi = std::numbers::pi;

// Planar pose of one vehicle. phi is kept in (-pi, pi].
struct Pose {
  double x = 0.0;    // [m]
  double y = 0.0;    // [m]
  double phi = 0.0;  // [rad]

  bool operator==(const Pose&) const = default;
};

struct ControlInput {
  double v = 0.0;      // linear velocity [m/s]
  double omega = 0.0;  // angular velocity [rad/s]

  bool operator==(const ControlInput&) const = default;
};

struct PoseRate {
  double dx = 0.0;
  double dy = 0.0;
  double dphi = 0.0;
};

enum class Integrator { euler, rk4 };

// Maps a finite angle to (-pi, pi]. Inputs within a few ulps of -pi land on +pi.
// Throws DomainError for non-finite input.
double wrap_angle(double a);

// Unicycle kinematics: (v cos phi, v sin phi, omega).
PoseRate unicycle_derivative(const Pose& pose, const ControlInput& input) noexcept;

// Advances one step with the input held constant over [t, t + dt).
// Throws ConfigError when dt <= 0.
Pose integrate_step(const Pose& pose, const ControlInput& input, double dt,
                    Integrator method = Integrator::rk4);

// Leader reference motion.
struct ConstantMotion {
  double v0 = 0.0;
  double omega0 = 0.0;

  bool operator==(const ConstantMotion&) const = default;
};

struct ScheduleSegment {
  double start = 0.0;  // [s], segment active from here until the next start
  double v0 = 0.0;
  double omega0 = 0.0;

  bool operator==(const ScheduleSegment&) const = default;
};

// Piecewise-constant command; the last segment is held past the end of the schedule.
struct PiecewiseSchedule {
  std::vector<ScheduleSegment> segments;

  bool operator==(const PiecewiseSchedule&) const = default;
};

// omega0(t) = amplitude * sin(frequency * t), v0 constant.
struct SinusoidalTurn {
  double v0 = 0.0;
  double amplitude = 0.0;  // [rad/s]
  double frequency = 0.0;  // [rad/s]

  bool operator==(const SinusoidalTurn&) const = default;
};

using LeaderTrajectory = std::variant<ConstantMotion, PiecewiseSchedule, SinusoidalTurn>;

// Checks finiteness and schedule ordering; throws ConfigError.
void validate(const LeaderTrajectory& traj);

// (v0(t), omega0(t)). Throws DomainError for t < 0.
ControlInput leader_command(const LeaderTrajectory& traj, double t);

}  // namespace platoon
