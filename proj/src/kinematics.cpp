#include "platoon/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "platoon/errors.hpp"

namespace platoon {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Pose advance(const Pose& p, const PoseRate& r, double h) noexcept {
  return {p.x + h * r.dx, p.y + h * r.dy, p.phi + h * r.dphi};
}

bool finite(double v) noexcept { return std::isfinite(v); }

}  // namespace

double wrap_angle(double a) {
  if (!std::isfinite(a)) throw DomainError("wrap_angle: non-finite angle");
  // remainder() is exact and lands in [-pi, pi].
  const double r = std::remainder(a, kTwoPi);
  const double snap = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(a));
  if (r <= -kPi + snap) return kPi;
  return r;
}

PoseRate unicycle_derivative(const Pose& pose, const ControlInput& input) noexcept {
  return {input.v * std::cos(pose.phi), input.v * std::sin(pose.phi), input.omega};
}

Pose integrate_step(const Pose& pose, const ControlInput& input, double dt, Integrator method) {
  if (!(dt > 0.0)) throw ConfigError("integrate_step: dt must be positive");

  Pose next;
  if (method == Integrator::euler) {
    next = advance(pose, unicycle_derivative(pose, input), dt);
  } else {
    const PoseRate k1 = unicycle_derivative(pose, input);
    const PoseRate k2 = unicycle_derivative(advance(pose, k1, dt / 2.0), input);
    const PoseRate k3 = unicycle_derivative(advance(pose, k2, dt / 2.0), input);
    const PoseRate k4 = unicycle_derivative(advance(pose, k3, dt), input);
    const double w = dt / 6.0;
    next.x = pose.x + w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
    next.y = pose.y + w * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
    next.phi = pose.phi + w * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
  }
  next.phi = wrap_angle(next.phi);
  return next;
}

void validate(const LeaderTrajectory& traj) {
  std::visit(
      overloaded{
          [](const ConstantMotion& c) {
            if (!finite(c.v0) || !finite(c.omega0))
              throw ConfigError("leader: constant motion parameters must be finite");
          },
          [](const PiecewiseSchedule& s) {
            if (s.segments.empty()) throw ConfigError("leader: schedule has no segments");
            if (s.segments.front().start != 0.0)
              throw ConfigError("leader: schedule must start at t = 0");
            for (std::size_t i = 0; i < s.segments.size(); ++i) {
              const auto& seg = s.segments[i];
              if (!finite(seg.start) || !finite(seg.v0) || !finite(seg.omega0))
                throw ConfigError("leader: schedule segment " + std::to_string(i) + " is not finite");
              if (i > 0 && !(seg.start > s.segments[i - 1].start))
                throw ConfigError("leader: schedule breakpoints must be strictly increasing");
            }
          },
          [](const SinusoidalTurn& s) {
            if (!finite(s.v0) || !finite(s.amplitude) || !finite(s.frequency))
              throw ConfigError("leader: sinusoidal parameters must be finite");
          },
      },
      traj);
}

ControlInput leader_command(const LeaderTrajectory& traj, double t) {
  if (!(t >= 0.0)) throw DomainError("leader_command: t must be >= 0");
  return std::visit(
      overloaded{
          [](const ConstantMotion& c) { return ControlInput{c.v0, c.omega0}; },
          [t](const PiecewiseSchedule& s) {
            if (s.segments.empty()) throw ConfigError("leader: schedule has no segments");
            auto it = std::upper_bound(s.segments.begin(), s.segments.end(), t,
                                       [](double tt, const ScheduleSegment& seg) { return tt < seg.start; });
            const auto& seg = (it == s.segments.begin()) ? *it : *std::prev(it);
            return ControlInput{seg.v0, seg.omega0};
          },
          [t](const SinusoidalTurn& s) {
            return ControlInput{s.v0, s.amplitude * std::sin(s.frequency * t)};
          },
      },
      traj);
}

}  // namespace platoon
