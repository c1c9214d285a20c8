#include "platoon/verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace platoon {

namespace {

std::string describe_at(double x) {
  std::ostringstream os;
  os.precision(10);
  os << "worst at xi=" << x;
  return os.str();
}

}  // namespace

std::vector<double> envelope_grid(const Envelope& env, int points, double coverage) {
  const double width = env.m_lower + env.m_upper;
  const double margin = 0.5 * (1.0 - coverage) * width;
  const double lo = -env.m_lower + margin;
  const double hi = env.m_upper - margin;
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) grid[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  return grid;
}

CheckResult check_derivative_identity(const Envelope& env, const std::string& label, double tolerance) {
  const double h = 1e-6 * (env.m_lower + env.m_upper);
  CheckResult r{"derivative identity (" + label + ")", 0.0, tolerance, false, ""};
  double worst_at = 0.0;
  for (double xi : envelope_grid(env)) {
    const double fd = (-transform(xi + 2 * h, env) + 8 * transform(xi + h, env) - 8 * transform(xi - h, env) +
                       transform(xi - 2 * h, env)) /
                      (12 * h);
    const double m = modulation(xi, env);
    const double rel = std::fabs(m - fd) / m;
    if (rel > r.residual) {
      r.residual = rel;
      worst_at = xi;
    }
  }
  r.pass = r.residual <= tolerance;
  r.detail = describe_at(worst_at);
  return r;
}

CheckResult check_round_trip(const Envelope& env, const std::string& label, double tolerance) {
  CheckResult r{"transform round trip (" + label + ")", 0.0, tolerance, false, ""};
  double worst_at = 0.0;
  for (double xi : envelope_grid(env)) {
    const double back = inverse_transform(transform(xi, env), env);
    const double err = xi == 0.0 ? std::fabs(back) : std::fabs(back - xi) / std::fabs(xi);
    if (err > r.residual) {
      r.residual = err;
      worst_at = xi;
    }
  }
  r.pass = r.residual <= tolerance;
  r.detail = describe_at(worst_at);
  return r;
}

CheckResult check_vector_form(int n, const Constraints& c, int samples, std::uint64_t seed, double tolerance) {
  CheckResult r{"per-vehicle vs vector-form error rates (N=" + std::to_string(n) + ")", 0.0, tolerance, false, ""};
  std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
  std::uniform_real_distribution<double> dist(std::nextafter(c.d_col, c.d_con), c.d_con);
  std::uniform_real_distribution<double> bearing(-c.beta_con, c.beta_con);
  std::uniform_real_distribution<double> heading(-kPi, kPi);
  std::uniform_real_distribution<double> speed(-0.5, 0.5);
  std::uniform_real_distribution<double> turn(-1.0, 1.0);

  std::vector<RelativeState> states(n);
  std::vector<ControlInput> inputs(n + 1);
  for (int k = 0; k < samples; ++k) {
    for (auto& s : states) s = {dist(rng), bearing(rng), heading(rng)};
    for (auto& u : inputs) u = {speed(rng), turn(rng)};
    const auto rows = error_dynamics_rhs(states, inputs);
    const auto stacked = vector_form_rhs(states, inputs);
    for (int i = 0; i < n; ++i) {
      r.residual = std::max(r.residual, std::fabs(rows[i].e_d_dot - stacked.e_d_dot(i)));
      r.residual = std::max(r.residual, std::fabs(rows[i].e_beta_dot - stacked.e_beta_dot(i)));
    }
  }
  r.pass = r.residual <= tolerance;
  r.detail = std::to_string(samples) + " random states";
  return r;
}

CheckResult check_audit(const AuditReport& audit, double tolerance, const std::string& label) {
  CheckResult r{"finite-difference audit (" + label + ")", std::max(audit.distance.max_abs, audit.bearing.max_abs),
                tolerance, false, ""};
  r.pass = audit.distance.max_abs <= tolerance && audit.bearing.max_abs <= tolerance;
  std::ostringstream os;
  os.precision(4);
  os << "distance " << audit.distance.max_abs << " at t=" << audit.distance.at_time << " s, bearing "
     << audit.bearing.max_abs << " at t=" << audit.bearing.at_time << " s, " << audit.samples << " samples";
  r.detail = os.str();
  return r;
}

std::vector<DtSweepRow> audit_dt_sweep(const Scenario& base, const std::vector<double>& dts,
                                       const AuditOptions& options) {
  std::vector<Scenario> runs;
  for (double dt : dts) {
    Scenario s = base;
    s.dt = dt;
    runs.push_back(std::move(s));
  }
  std::vector<DtSweepRow> out;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunResult res = run(runs[i]);
    DtSweepRow row;
    row.dt = runs[i].dt;
    row.halted = res.report.halted;
    if (res.trace.rows.size() >= 3) {
      const AuditReport audit = finite_difference_audit(res.trace, runs[i], options);
      row.residual_d = audit.distance.max_abs;
      row.residual_beta = audit.bearing.max_abs;
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace platoon
