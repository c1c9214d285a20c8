#include "platoon/error_dynamics.hpp"

#include <cmath>

#include "platoon/errors.hpp"
#include "platoon/geometry.hpp"

namespace platoon {

namespace {

void check_sizes(std::span<const RelativeState> states, std::span<const ControlInput> inputs) {
  if (inputs.size() != states.size() + 1)
    throw ConfigError("error dynamics: expected one input per follower plus the leader");
  for (const auto& st : states)
    if (st.d == 0.0) throw DegenerateGeometry("error dynamics: zero inter-vehicle distance");
}

void track(ChannelResidual& r, double residual, double t) {
  if (residual > r.max_abs) {
    r.max_abs = residual;
    r.at_time = t;
  }
}

}  // namespace

std::vector<RelativeState> relative_states(std::span<const Pose> poses, BearingConvention convention) {
  std::vector<RelativeState> out;
  if (poses.empty()) return out;
  out.reserve(poses.size() - 1);
  for (std::size_t i = 1; i < poses.size(); ++i) {
    const Measurement m = relative_measurement(poses[i], poses[i - 1]);
    const double beta = convention == BearingConvention::flipped ? -m.beta : m.beta;
    out.push_back({m.d, beta, relative_heading(poses[i], poses[i - 1])});
  }
  return out;
}

std::vector<ErrorRates> error_dynamics_rhs(std::span<const RelativeState> states,
                                           std::span<const ControlInput> inputs) {
  check_sizes(states, inputs);
  std::vector<ErrorRates> out(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    const auto& st = states[k];
    const ControlInput& own = inputs[k + 1];
    const ControlInput& ahead = inputs[k];
    const double sight = st.gamma + st.beta;
    out[k].e_d_dot = -own.v * std::cos(st.beta) + ahead.v * std::cos(sight);
    out[k].e_beta_dot = -own.omega + (own.v / st.d) * std::sin(st.beta) - (ahead.v / st.d) * std::sin(sight);
  }
  return out;
}

VectorFormState assemble_vector_form(std::span<const RelativeState> states, std::span<const ControlInput> inputs,
                                     std::span<const double> d_des) {
  check_sizes(states, inputs);
  const Eigen::Index n = static_cast<Eigen::Index>(states.size());
  VectorFormState vf;
  vf.v.resize(n);
  vf.omega.resize(n);
  vf.e_beta.resize(n);
  vf.c = Eigen::VectorXd::Zero(n);
  vf.s = Eigen::VectorXd::Zero(n);
  vf.D = Eigen::MatrixXd::Zero(n, n);
  vf.C_tilde = Eigen::MatrixXd::Zero(n, n);
  vf.S_tilde = Eigen::MatrixXd::Zero(n, n);
  if (!d_des.empty()) {
    if (d_des.size() != states.size()) throw ConfigError("vector form: d_des size mismatch");
    vf.e_d.resize(n);
  }

  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& st = states[static_cast<std::size_t>(i)];
    vf.v(i) = inputs[static_cast<std::size_t>(i) + 1].v;
    vf.omega(i) = inputs[static_cast<std::size_t>(i) + 1].omega;
    vf.e_beta(i) = st.beta;
    if (!d_des.empty()) vf.e_d(i) = st.d - d_des[static_cast<std::size_t>(i)];
    vf.D(i, i) = st.d;
    vf.C_tilde(i, i) = std::cos(st.beta);
    vf.S_tilde(i, i) = std::sin(st.beta);
    if (i > 0) {
      vf.C_tilde(i, i - 1) = -std::cos(st.beta + st.gamma);
      vf.S_tilde(i, i - 1) = -std::sin(st.beta + st.gamma);
    }
  }
  if (n > 0) {
    const double v0 = inputs[0].v;
    const double sight = states[0].gamma + states[0].beta;
    vf.c(0) = v0 * std::cos(sight);
    // Negative: the leader term enters the bearing rate as -(v0 / d1) sin(gamma1 + beta1).
    vf.s(0) = -v0 * std::sin(sight);
  }
  return vf;
}

StackedRates vector_form_rhs(const VectorFormState& vf) {
  StackedRates out;
  out.e_d_dot = -vf.C_tilde * vf.v + vf.c;
  out.e_beta_dot = -vf.omega + vf.D.diagonal().cwiseInverse().asDiagonal() * (vf.S_tilde * vf.v + vf.s);
  return out;
}

StackedRates vector_form_rhs(std::span<const RelativeState> states, std::span<const ControlInput> inputs) {
  return vector_form_rhs(assemble_vector_form(states, inputs));
}

AuditReport finite_difference_audit(const Trace& trace, const Scenario& scenario, const AuditOptions& options) {
  const auto& rows = trace.rows;
  if (rows.size() < 3) throw ConfigError("finite-difference audit needs at least three trace rows");
  const int n = trace.n_followers;
  if (n != scenario.n_followers) throw ConfigError("finite-difference audit: trace/scenario size mismatch");

  AuditReport report;
  report.vehicles.resize(n);
  for (int i = 0; i < n; ++i) report.vehicles[i].vehicle = i + 1;

  std::vector<RelativeState> prev = relative_states(rows[0].poses, options.convention);
  std::vector<RelativeState> cur = relative_states(rows[1].poses, options.convention);
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    std::vector<RelativeState> next = relative_states(rows[k + 1].poses, options.convention);
    const double span = rows[k + 1].t - rows[k - 1].t;
    const auto left = error_dynamics_rhs(cur, rows[k - 1].inputs);
    const auto right = error_dynamics_rhs(cur, rows[k].inputs);
    for (int i = 0; i < n; ++i) {
      const double fd_d = (next[i].d - prev[i].d) / span;
      const double fd_beta = wrap_angle(next[i].beta - prev[i].beta) / span;
      const double rate_d = 0.5 * (left[i].e_d_dot + right[i].e_d_dot);
      const double rate_beta = 0.5 * (left[i].e_beta_dot + right[i].e_beta_dot);
      track(report.vehicles[i].distance, std::fabs(fd_d - rate_d), rows[k].t);
      track(report.vehicles[i].bearing, std::fabs(fd_beta - rate_beta), rows[k].t);
    }
    ++report.samples;
    prev = std::move(cur);
    cur = std::move(next);
  }
  for (const auto& v : report.vehicles) {
    track(report.distance, v.distance.max_abs, v.distance.at_time);
    track(report.bearing, v.bearing.max_abs, v.bearing.at_time);
  }
  return report;
}

}  // namespace platoon
