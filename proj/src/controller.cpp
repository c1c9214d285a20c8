#include "platoon/controller.hpp"

#include <cmath>

namespace platoon {

namespace {

double admissible_xi(double xi, const Envelope& env, double soft_guard, Channel channel, double t) {
  if (inside(xi, env)) return xi;
  if (soft_guard > 0.0) {
    if (xi >= env.m_upper && xi - env.m_upper <= soft_guard) return env.m_upper - soft_guard;
    if (xi <= -env.m_lower && -env.m_lower - xi <= soft_guard) return -env.m_lower + soft_guard;
  }
  throw EnvelopeBreach(xi, env.m_lower, env.m_upper).on_channel(channel).at_time(t);
}

}  // namespace

void ControllerParams::validate() const {
  if (!(k_d > 0.0) || !std::isfinite(k_d)) throw ConfigError("controller: k_d must be positive");
  if (!(k_beta > 0.0) || !std::isfinite(k_beta)) throw ConfigError("controller: k_beta must be positive");
  if (!(soft_guard >= 0.0)) throw ConfigError("controller: soft_guard must be >= 0");
  env.distance.validate();
  env.bearing.validate();
}

ControllerParams make_controller_params(double k_d, double k_beta, double d_des, const Constraints& c,
                                        double l_d, double rho_inf_d, double l_beta, double rho_inf_beta) {
  const EnvelopeBounds b = derive_bounds(d_des, c);
  ControllerParams p;
  p.k_d = k_d;
  p.k_beta = k_beta;
  p.d_des = d_des;
  p.env.distance = {b.m_lower_d, b.m_upper_d, l_d, rho_inf_d};
  p.env.bearing = {b.m_beta, b.m_beta, l_beta, rho_inf_beta};
  p.validate();
  return p;
}

double linear_velocity(double e_d, double t, const ControllerParams& p) {
  const Envelope& env = p.env.distance;
  const double xi = admissible_xi(normalize(e_d, rho(env, t)), env, p.soft_guard, Channel::distance, t);
  return p.k_d * transform(xi, env);
}

double angular_velocity(double e_beta, double t, const ControllerParams& p) {
  const Envelope& env = p.env.bearing;
  const double rho_t = rho(env, t);
  const double xi = admissible_xi(normalize(e_beta, rho_t), env, p.soft_guard, Channel::bearing, t);
  // The gain multiplies last so that scaling it scales omega exactly.
  return p.k_beta * (modulation(xi, env) * transform(xi, env) / rho_t);
}

ControlInput controller_step(const Measurement& m, double t, const ControllerParams& p) {
  return {linear_velocity(distance_error(m, p.d_des), t, p), angular_velocity(bearing_error(m), t, p)};
}

}  // namespace platoon
