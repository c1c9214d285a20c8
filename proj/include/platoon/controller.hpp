#pragma once

#include "platoon/envelope.hpp"
#include "platoon/geometry.hpp"
#include "platoon/kinematics.hpp"

namespace platoon {

// Gains and envelopes of one follower's controller.
struct ControllerParams {
  double k_d = 0.0;     // [m/s per unit transformed error]
  double k_beta = 0.0;  // [rad/s per unit]
  double d_des = 0.0;   // [m]
  EnvelopePair env;
  // Normalized errors that sit outside the band by at most this much are pulled
  // back to (boundary - soft_guard) instead of raising EnvelopeBreach. 0 disables.
  double soft_guard = 0.0;

  // Throws ConfigError on nonpositive gains, invalid envelopes or negative soft_guard.
  void validate() const;
  bool operator==(const ControllerParams&) const = default;
};

// Builds parameters whose envelope bounds follow derive_bounds(d_des, c).
ControllerParams make_controller_params(double k_d, double k_beta, double d_des, const Constraints& c,
                                        double l_d, double rho_inf_d, double l_beta, double rho_inf_beta);

inline double distance_error(const Measurement& m, double d_des) noexcept { return m.d - d_des; }
inline double bearing_error(const Measurement& m) noexcept { return m.beta; }

// v = k_d * eps_d(e_d / rho_d(t)).
double linear_velocity(double e_d, double t, const ControllerParams& p);

// omega = k_beta * r_beta(xi) * eps_beta(xi) / rho_beta(t),  xi = e_beta / rho_beta(t).
double angular_velocity(double e_beta, double t, const ControllerParams& p);

// The full decentralized law. Depends on nothing but its arguments; no
// predecessor velocity or leader data enters. Breaches propagate as
// EnvelopeBreach tagged with channel and time.
ControlInput controller_step(const Measurement& m, double t, const ControllerParams& p);

}  // namespace platoon
