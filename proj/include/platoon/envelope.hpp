#pragma once

#include <span>
#include <vector>

#include "platoon/errors.hpp"
#include "platoon/geometry.hpp"

namespace platoon {

/// Prescribed-performance envelope for one error channel.
///
/// The admissible region at time t is the open band
/// (-m_lower * rho(t), m_upper * rho(t)) where
///
///   rho(t) = (1 - rho_inf / M) exp(-l t) + rho_inf / M,   M = max(m_lower, m_upper).
///
/// rho_inf is expressed in raw error units, so the band converges to
/// (-m_lower * rho_inf / M, m_upper * rho_inf / M); for the larger side this is
/// exactly +-rho_inf.
struct Envelope {
  double m_lower = 0.0;
  double m_upper = 0.0;
  double l = 0.0;        // decay rate [1/s]
  double rho_inf = 0.0;  // steady-state half-width, raw error units

  double m_max() const noexcept { return m_lower > m_upper ? m_lower : m_upper; }
  // Throws ConfigError unless m_lower, m_upper, l > 0 and 0 < rho_inf < m_max().
  void validate() const;
  bool operator==(const Envelope&) const = default;
};

// Bounds implied by the collision/connectivity constraints for a desired gap.
struct EnvelopeBounds {
  double m_lower_d = 0.0;  // d_des - d_col
  double m_upper_d = 0.0;  // d_con - d_des
  double m_beta = 0.0;     // beta_con, both sides

  bool operator==(const EnvelopeBounds&) const = default;
};

// Throws ConfigError unless d_col < d_des < d_con.
EnvelopeBounds derive_bounds(double d_des, const Constraints& c);

// Throws DomainError for t < 0.
double rho(const Envelope& env, double t);
double rho_dot(const Envelope& env, double t);

// e / rho_t. The result is not range-checked. Throws DomainError for rho_t <= 0.
double normalize(double e, double rho_t);

bool inside(double xi, const Envelope& env) noexcept;

// ln((1 + xi/m_lower) / (1 - xi/m_upper)). Throws EnvelopeBreach unless
// -m_lower < xi < m_upper.
double transform(double xi, const Envelope& env);

// Inverse of transform: maps any finite eps back into (-m_lower, m_upper).
double inverse_transform(double eps, const Envelope& env);

// d(transform)/d(xi) = (1/m_lower + 1/m_upper) / ((1 + xi/m_lower)(1 - xi/m_upper)).
// Throws EnvelopeBreach outside the open interval.
double modulation(double xi, const Envelope& env);

// -m_lower rho(t) < e < m_upper rho(t), strict, evaluated as inside(e / rho(t)).
bool check_envelope(double e, const Envelope& env, double t);

struct EnvelopePair {
  Envelope distance;
  Envelope bearing;

  bool operator==(const EnvelopePair&) const = default;
};

// Every (vehicle, channel) whose initial error lies on or outside its band at
// t = 0. Vehicles are reported 1-based. Spans must have equal length.
std::vector<InitialViolation> find_initial_violations(std::span<const double> e_d0,
                                                      std::span<const double> e_beta0,
                                                      std::span<const EnvelopePair> envelopes);

// Throws InitialFeasibilityError listing every violation.
void validate_initial(std::span<const double> e_d0, std::span<const double> e_beta0,
                      std::span<const EnvelopePair> envelopes);

}  // namespace platoon
