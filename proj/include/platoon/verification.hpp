#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "platoon/envelope.hpp"
#include "platoon/error_dynamics.hpp"
#include "platoon/scenario.hpp"
#include "platoon/simulator.hpp"

namespace platoon {

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string detail;
};

// `points` evenly spaced normalized errors covering the central `coverage`
// fraction of (-m_lower, m_upper).
std::vector<double> envelope_grid(const Envelope& env, int points = 10001, double coverage = 0.999);

// max |r(xi) - d eps/d xi| / r(xi) over the grid, derivative by a five-point stencil.
CheckResult check_derivative_identity(const Envelope& env, const std::string& label, double tolerance = 1e-6);

// max |inverse_transform(transform(xi)) - xi| / |xi| over the grid (exact zero for xi = 0).
CheckResult check_round_trip(const Envelope& env, const std::string& label, double tolerance = 1e-12);

// Per-vehicle rates vs vector form on random admissible states.
CheckResult check_vector_form(int n_followers, const Constraints& c, int samples = 1000, std::uint64_t seed = 7,
                              double tolerance = 1e-12);

// Worst centered-difference residual over both channels.
CheckResult check_audit(const AuditReport& audit, double tolerance, const std::string& label);

struct DtSweepRow {
  double dt = 0.0;
  double residual_d = 0.0;
  double residual_beta = 0.0;
  bool halted = false;
};

// Runs the scenario at each dt (same physical duration) and audits each trace.
std::vector<DtSweepRow> audit_dt_sweep(const Scenario& base, const std::vector<double>& dts,
                                       const AuditOptions& options = {});

}  // namespace platoon
