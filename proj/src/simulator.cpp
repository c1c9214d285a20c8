#include "platoon/simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <sstream>

#include "platoon/controller.hpp"
#include "platoon/envelope.hpp"
#include "platoon/errors.hpp"

namespace platoon {

namespace {

FollowerSample sample_follower(const Measurement& m, double t, const ControllerParams& p, const Constraints& c) {
  FollowerSample s;
  s.m = m;
  s.e_d = distance_error(m, p.d_des);
  s.e_beta = bearing_error(m);
  s.rho_d = rho(p.env.distance, t);
  s.rho_beta = rho(p.env.bearing, t);
  s.xi_d = normalize(s.e_d, s.rho_d);
  s.xi_beta = normalize(s.e_beta, s.rho_beta);
  s.lb_d = -p.env.distance.m_lower * s.rho_d;
  s.ub_d = p.env.distance.m_upper * s.rho_d;
  s.lb_beta = -p.env.bearing.m_lower * s.rho_beta;
  s.ub_beta = p.env.bearing.m_upper * s.rho_beta;
  s.status = constraint_status(m, c);
  return s;
}

bool strictly_inside(double e, double lb, double ub) { return lb < e && e < ub; }

void note(ChannelStats& stats, bool ok, double t) {
  if (ok) return;
  ++stats.violations;
  if (!stats.first_violation) stats.first_violation = t;
}

}  // namespace

const char* to_string(EventKind k) noexcept {
  switch (k) {
    case EventKind::envelope_breach: return "envelope_breach";
    case EventKind::soft_guard: return "soft_guard";
    case EventKind::saturation: return "saturation";
    case EventKind::degenerate_geometry: return "degenerate_geometry";
  }
  return "?";
}

TraceMetrics summarize(const Trace& trace, double window_fraction) {
  TraceMetrics out;
  const int n = trace.n_followers;
  out.rows = static_cast<long>(trace.rows.size());
  out.vehicles.resize(n);
  for (int i = 0; i < n; ++i) out.vehicles[i].vehicle = i + 1;
  if (trace.rows.empty()) return out;

  out.final_time = trace.rows.back().t;
  out.steady_window_start = out.final_time * (1.0 - window_fraction);
  for (auto& v : out.vehicles) {
    v.min_d = std::numeric_limits<double>::infinity();
    v.max_d = -std::numeric_limits<double>::infinity();
  }

  for (const auto& row : trace.rows) {
    const bool steady = row.t >= out.steady_window_start;
    for (int i = 0; i < n; ++i) {
      const auto& s = row.followers[i];
      const auto& u = row.inputs[i + 1];
      auto& v = out.vehicles[i];
      note(v.distance, strictly_inside(s.e_d, s.lb_d, s.ub_d), row.t);
      note(v.bearing, strictly_inside(s.e_beta, s.lb_beta, s.ub_beta), row.t);
      if (s.status == ConstraintStatus::collision) ++v.collision_flags;
      if (s.status == ConstraintStatus::connectivity_break) ++v.connectivity_flags;
      v.min_d = std::min(v.min_d, s.m.d);
      v.max_d = std::max(v.max_d, s.m.d);
      v.max_abs_beta = std::max(v.max_abs_beta, std::fabs(s.m.beta));
      v.max_abs_v = std::max(v.max_abs_v, std::fabs(u.v));
      v.max_abs_omega = std::max(v.max_abs_omega, std::fabs(u.omega));
      if (steady) {
        v.steady_max_abs_e_d = std::max(v.steady_max_abs_e_d, std::fabs(s.e_d));
        v.steady_max_abs_e_beta = std::max(v.steady_max_abs_e_beta, std::fabs(s.e_beta));
      }
    }
  }
  for (const auto& v : out.vehicles) {
    out.envelope_violations += v.distance.violations + v.bearing.violations;
    out.constraint_flags += v.collision_flags + v.connectivity_flags;
    out.max_abs_v = std::max(out.max_abs_v, v.max_abs_v);
    out.max_abs_omega = std::max(out.max_abs_omega, v.max_abs_omega);
  }
  return out;
}

EngineState initial_state(const Scenario& s) {
  EngineState st;
  st.poses = s.initial_poses();
  st.last_valid.assign(s.n_followers, ControlInput{});
  return st;
}

TickOutcome evaluate_tick(const Scenario& s, EngineState& state) {
  const int n = s.n_followers;
  const double t = state.time(s.dt);
  TickOutcome out;
  out.row.t = t;
  out.row.poses = state.poses;
  out.row.inputs.resize(n + 1);
  out.row.followers.resize(n);
  out.row.inputs[0] = leader_command(s.leader, t);

  for (int i = 1; i <= n; ++i) {
    const ControllerParams& p = s.params[i - 1];
    Measurement m;
    try {
      m = relative_measurement(state.poses[i], state.poses[i - 1]);
    } catch (const DegenerateGeometry& e) {
      // No measurement means no controller; always stop here.
      out.events.push_back({t, i, EventKind::degenerate_geometry, e.what()});
      out.halt = true;
      out.halt_reason = "vehicle " + std::to_string(i) + " coincides with its predecessor";
      FollowerSample coincident;
      coincident.status = ConstraintStatus::collision;
      out.row.followers[i - 1] = coincident;
      out.row.inputs[i] = state.last_valid[i - 1];
      continue;
    }

    FollowerSample sample = sample_follower(m, t, p, s.constraints);
    ControlInput u;
    try {
      u = controller_step(m, t, p);
      if (!strictly_inside(sample.e_d, sample.lb_d, sample.ub_d) ||
          !strictly_inside(sample.e_beta, sample.lb_beta, sample.ub_beta))
        out.events.push_back({t, i, EventKind::soft_guard, "breach within soft-guard margin downgraded"});
      const bool over = std::fabs(u.v) > s.saturation.v_max || std::fabs(u.omega) > s.saturation.omega_max;
      if (over) {
        std::ostringstream os;
        os.precision(17);
        os << "command (" << u.v << ", " << u.omega << ") exceeds saturation limits";
        out.events.push_back({t, i, EventKind::saturation, os.str()});
        if (s.saturation.clamp) {
          u.v = std::clamp(u.v, -s.saturation.v_max, s.saturation.v_max);
          u.omega = std::clamp(u.omega, -s.saturation.omega_max, s.saturation.omega_max);
        }
      }
      state.last_valid[i - 1] = u;
    } catch (EnvelopeBreach& b) {
      b.for_vehicle(i);
      out.events.push_back({t, i, EventKind::envelope_breach, b.what()});
      u = state.last_valid[i - 1];
      if (s.breach_policy == BreachPolicy::halt && !out.halt) {
        out.halt = true;
        out.halt_reason = b.what();
      }
    }
    out.row.inputs[i] = u;
    out.row.followers[i - 1] = sample;
  }
  return out;
}

void advance(const Scenario& s, EngineState& state, std::span<const ControlInput> inputs) {
  for (std::size_t i = 0; i < state.poses.size(); ++i)
    state.poses[i] = integrate_step(state.poses[i], inputs[i], s.dt, s.integrator);
  ++state.tick;
}

TickOutcome step(const Scenario& s, EngineState& state) {
  TickOutcome out = evaluate_tick(s, state);
  if (!out.halt) advance(s, state, out.row.inputs);
  return out;
}

RunResult run(const Scenario& s) {
  const auto started = std::chrono::steady_clock::now();
  RunResult result;
  result.trace.n_followers = s.n_followers;
  const long steps = s.steps();
  result.trace.rows.reserve(static_cast<std::size_t>(steps) + 1);

  RunReport& report = result.report;
  EngineState state = initial_state(s);
  for (long k = 0; k <= steps; ++k) {
    TickOutcome tick = evaluate_tick(s, state);
    for (auto& e : tick.events) {
      switch (e.kind) {
        case EventKind::envelope_breach: ++report.breach_events; break;
        case EventKind::soft_guard: ++report.soft_guard_warnings; break;
        case EventKind::saturation: ++report.saturation_warnings; break;
        case EventKind::degenerate_geometry: break;
      }
      if (report.events.size() < RunReport::kMaxLoggedEvents) report.events.push_back(std::move(e));
    }
    result.trace.rows.push_back(std::move(tick.row));
    if (tick.halt) {
      report.halted = true;
      report.halt_reason = std::move(tick.halt_reason);
      break;
    }
    if (k < steps) advance(s, state, result.trace.rows.back().inputs);
  }

  report.metrics = summarize(result.trace, s.steady_window_fraction);
  report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

std::vector<RunResult> run_batch(std::span<const Scenario> scenarios) {
  std::vector<std::future<RunResult>> pending;
  pending.reserve(scenarios.size());
  for (const Scenario& s : scenarios)
    pending.push_back(std::async(std::launch::async, [&s] { return run(s); }));
  std::vector<RunResult> out;
  out.reserve(scenarios.size());
  for (auto& f : pending) out.push_back(f.get());
  return out;
}

}  // namespace platoon
