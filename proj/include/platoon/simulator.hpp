#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "platoon/geometry.hpp"
#include "platoon/kinematics.hpp"
#include "platoon/scenario.hpp"

namespace platoon {

// Everything logged for one follower at one instant.
struct FollowerSample {
  Measurement m;
  double e_d = 0.0;
  double e_beta = 0.0;
  double xi_d = 0.0;
  double xi_beta = 0.0;
  double rho_d = 0.0;
  double rho_beta = 0.0;
  double lb_d = 0.0;  // -m_lower * rho_d
  double ub_d = 0.0;  //  m_upper * rho_d
  double lb_beta = 0.0;
  double ub_beta = 0.0;
  ConstraintStatus status = ConstraintStatus::ok;

  bool operator==(const FollowerSample&) const = default;
};

// One trace row: state at t and the inputs computed from it (applied over [t, t + dt)).
// Index 0 of poses and inputs is the leader.
struct TraceRow {
  double t = 0.0;
  std::vector<Pose> poses;
  std::vector<ControlInput> inputs;
  std::vector<FollowerSample> followers;

  bool operator==(const TraceRow&) const = default;
};

struct Trace {
  int n_followers = 0;
  std::vector<TraceRow> rows;

  bool operator==(const Trace&) const = default;
};

enum class EventKind { envelope_breach, soft_guard, saturation, degenerate_geometry };

const char* to_string(EventKind k) noexcept;

struct Event {
  double t = 0.0;
  int vehicle = 0;
  EventKind kind = EventKind::envelope_breach;
  std::string message;
};

struct ChannelStats {
  long violations = 0;
  std::optional<double> first_violation;

  bool operator==(const ChannelStats&) const = default;
};

// Per-follower summary; every field is recomputable from the trace.
struct VehicleSummary {
  int vehicle = 0;
  ChannelStats distance;
  ChannelStats bearing;
  long collision_flags = 0;
  long connectivity_flags = 0;
  double min_d = 0.0;
  double max_d = 0.0;
  double max_abs_beta = 0.0;
  double max_abs_v = 0.0;
  double max_abs_omega = 0.0;
  double steady_max_abs_e_d = 0.0;
  double steady_max_abs_e_beta = 0.0;

  bool operator==(const VehicleSummary&) const = default;
};

struct TraceMetrics {
  long rows = 0;
  double final_time = 0.0;
  double steady_window_start = 0.0;
  long envelope_violations = 0;
  long constraint_flags = 0;
  double max_abs_v = 0.0;
  double max_abs_omega = 0.0;
  std::vector<VehicleSummary> vehicles;

  bool operator==(const TraceMetrics&) const = default;
};

struct RunReport {
  TraceMetrics metrics;
  bool halted = false;
  std::string halt_reason;
  long breach_events = 0;
  long soft_guard_warnings = 0;
  long saturation_warnings = 0;
  std::vector<Event> events;  // first kMaxLoggedEvents only
  double runtime_s = 0.0;

  static constexpr std::size_t kMaxLoggedEvents = 1000;
};

// Summarizes a trace. The steady-state window covers rows with
// t >= final_time * (1 - window_fraction).
TraceMetrics summarize(const Trace& trace, double window_fraction);

// Mutable engine state between ticks.
struct EngineState {
  long tick = 0;
  std::vector<Pose> poses;                // leader first
  std::vector<ControlInput> last_valid;   // last non-breaching output per follower

  double time(double dt) const noexcept { return static_cast<double>(tick) * dt; }
};

EngineState initial_state(const Scenario& s);

struct TickOutcome {
  TraceRow row;
  std::vector<Event> events;
  bool halt = false;
  std::string halt_reason;
};

// Measures, runs every controller and applies the monitors at the current
// state without advancing it. Honors the scenario's breach policy.
TickOutcome evaluate_tick(const Scenario& s, EngineState& state);

// Integrates every vehicle over one step with the row's inputs held.
void advance(const Scenario& s, EngineState& state, std::span<const ControlInput> inputs);

// evaluate_tick followed by advance (unless halted).
TickOutcome step(const Scenario& s, EngineState& state);

struct RunResult {
  Trace trace;
  RunReport report;
};

// Runs steps() ticks, producing steps() + 1 rows unless halted early.
RunResult run(const Scenario& s);

// Runs independent scenarios concurrently; results keep input order.
std::vector<RunResult> run_batch(std::span<const Scenario> scenarios);

}  // namespace platoon
