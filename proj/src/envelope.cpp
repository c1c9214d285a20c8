#include "platoon/envelope.hpp"

#include <cmath>

namespace platoon {

void Envelope::validate() const {
  if (!(m_lower > 0.0) || !std::isfinite(m_lower)) throw ConfigError("envelope: m_lower must be positive");
  if (!(m_upper > 0.0) || !std::isfinite(m_upper)) throw ConfigError("envelope: m_upper must be positive");
  if (!(l > 0.0) || !std::isfinite(l)) throw ConfigError("envelope: decay rate l must be positive");
  if (!(rho_inf > 0.0 && rho_inf < m_max()))
    throw ConfigError("envelope: rho_inf must lie in (0, max(m_lower, m_upper))");
}

EnvelopeBounds derive_bounds(double d_des, const Constraints& c) {
  if (!(d_des > c.d_col && d_des < c.d_con))
    throw ConfigError("desired distance must lie strictly between d_col and d_con");
  return {d_des - c.d_col, c.d_con - d_des, c.beta_con};
}

double rho(const Envelope& env, double t) {
  if (!(t >= 0.0)) throw DomainError("rho: t must be >= 0");
  const double floor = env.rho_inf / env.m_max();
  // Same function as (1 - floor) e^{-lt} + floor, written so that rho(0) == 1 exactly.
  return 1.0 + (1.0 - floor) * std::expm1(-env.l * t);
}

double rho_dot(const Envelope& env, double t) {
  if (!(t >= 0.0)) throw DomainError("rho_dot: t must be >= 0");
  const double floor = env.rho_inf / env.m_max();
  return -env.l * (1.0 - floor) * std::exp(-env.l * t);
}

double normalize(double e, double rho_t) {
  if (!(rho_t > 0.0)) throw DomainError("normalize: performance function value must be positive");
  return e / rho_t;
}

bool inside(double xi, const Envelope& env) noexcept {
  return -env.m_lower < xi && xi < env.m_upper;
}

double transform(double xi, const Envelope& env) {
  if (!inside(xi, env)) throw EnvelopeBreach(xi, env.m_lower, env.m_upper);
  // log1p keeps full relative accuracy for small xi.
  return std::log1p(xi / env.m_lower) - std::log1p(-xi / env.m_upper);
}

double inverse_transform(double eps, const Envelope& env) {
  // xi = (e^eps - 1) / (e^eps / m_upper + 1 / m_lower), rewritten with e^-eps
  // for positive eps so neither branch overflows.
  if (eps <= 0.0) {
    const double g = std::exp(eps);
    return std::expm1(eps) / (g / env.m_upper + 1.0 / env.m_lower);
  }
  const double g = std::exp(-eps);
  return -std::expm1(-eps) / (1.0 / env.m_upper + g / env.m_lower);
}

double modulation(double xi, const Envelope& env) {
  if (!inside(xi, env)) throw EnvelopeBreach(xi, env.m_lower, env.m_upper);
  return (1.0 / env.m_lower + 1.0 / env.m_upper) /
         ((1.0 + xi / env.m_lower) * (1.0 - xi / env.m_upper));
}

bool check_envelope(double e, const Envelope& env, double t) {
  // Tested on the normalized error so the answer always agrees with transform
  // and the controller; comparing e against m * rho can differ in the last ulp.
  return inside(normalize(e, rho(env, t)), env);
}

std::vector<InitialViolation> find_initial_violations(std::span<const double> e_d0,
                                                      std::span<const double> e_beta0,
                                                      std::span<const EnvelopePair> envelopes) {
  if (e_d0.size() != envelopes.size() || e_beta0.size() != envelopes.size())
    throw ConfigError("initial feasibility: mismatched vehicle counts");
  std::vector<InitialViolation> out;
  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    const int vehicle = static_cast<int>(i) + 1;
    const auto& d = envelopes[i].distance;
    const auto& b = envelopes[i].bearing;
    if (!check_envelope(e_d0[i], d, 0.0))
      out.push_back({vehicle, Channel::distance, e_d0[i], -d.m_lower * rho(d, 0.0), d.m_upper * rho(d, 0.0)});
    if (!check_envelope(e_beta0[i], b, 0.0))
      out.push_back({vehicle, Channel::bearing, e_beta0[i], -b.m_lower * rho(b, 0.0), b.m_upper * rho(b, 0.0)});
  }
  return out;
}

void validate_initial(std::span<const double> e_d0, std::span<const double> e_beta0,
                      std::span<const EnvelopePair> envelopes) {
  auto violations = find_initial_violations(e_d0, e_beta0, envelopes);
  if (!violations.empty()) throw InitialFeasibilityError(std::move(violations));
}

}  // namespace platoon
