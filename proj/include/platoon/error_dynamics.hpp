#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "platoon/kinematics.hpp"
#include "platoon/scenario.hpp"
#include "platoon/simulator.hpp"

namespace platoon {

// Relative geometry of follower i with respect to vehicle i - 1.
struct RelativeState {
  double d = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

// How bearings are recomputed from poses. `flipped` negates the bearing and
// exists only to show that the audit catches a wrong sign convention.
enum class BearingConvention { line_of_sight_minus_heading, flipped };

// N relative states from N + 1 poses (leader first).
std::vector<RelativeState> relative_states(std::span<const Pose> poses,
                                           BearingConvention convention = BearingConvention::line_of_sight_minus_heading);

struct ErrorRates {
  double e_d_dot = 0.0;
  double e_beta_dot = 0.0;
};

// Per-vehicle distance/bearing error rates:
//   e_d'    = -v_i cos(beta_i) + v_{i-1} cos(gamma_i + beta_i)
//   e_beta' = -omega_i + (v_i / d_i) sin(beta_i) - (v_{i-1} / d_i) sin(gamma_i + beta_i)
// inputs holds N + 1 entries, leader first. Throws DegenerateGeometry if any d_i == 0.
std::vector<ErrorRates> error_dynamics_rhs(std::span<const RelativeState> states,
                                           std::span<const ControlInput> inputs);

// Stacked platoon quantities. C_tilde and S_tilde are lower bi-diagonal; c and s
// carry the leader's contribution in their first entry only:
//   c = [ v0 cos(gamma1 + beta1), 0, ... ],  s = [ -v0 sin(gamma1 + beta1), 0, ... ].
// The minus sign in s is what makes the stacked form agree with the per-vehicle rates.
struct VectorFormState {
  Eigen::VectorXd e_d;
  Eigen::VectorXd e_beta;
  Eigen::VectorXd v;
  Eigen::VectorXd omega;
  Eigen::VectorXd c;
  Eigen::VectorXd s;
  Eigen::MatrixXd D;
  Eigen::MatrixXd C_tilde;
  Eigen::MatrixXd S_tilde;
};

// d_des may be empty, in which case e_d is left zero-sized.
VectorFormState assemble_vector_form(std::span<const RelativeState> states, std::span<const ControlInput> inputs,
                                     std::span<const double> d_des = {});

struct StackedRates {
  Eigen::VectorXd e_d_dot;
  Eigen::VectorXd e_beta_dot;
};

// e_d' = -C_tilde v + c;   e_beta' = -omega + D^{-1} (S_tilde v + s).
StackedRates vector_form_rhs(const VectorFormState& vf);
StackedRates vector_form_rhs(std::span<const RelativeState> states, std::span<const ControlInput> inputs);

struct ChannelResidual {
  double max_abs = 0.0;
  double at_time = 0.0;
};

struct VehicleResidual {
  int vehicle = 0;
  ChannelResidual distance;
  ChannelResidual bearing;
};

struct AuditReport {
  std::vector<VehicleResidual> vehicles;
  ChannelResidual distance;  // worst over all vehicles
  ChannelResidual bearing;
  long samples = 0;
};

struct AuditOptions {
  BearingConvention convention = BearingConvention::line_of_sight_minus_heading;
};

/// Compares centered differences of the logged distance and bearing against
/// the analytic error rates along a trace.
///
/// Geometry is recomputed from the logged poses. Inputs are zero-order held,
/// so the rate is discontinuous at each tick: the centered difference at row k
/// is matched against the mean of the rates evaluated with the inputs of rows
/// k - 1 and k, which keeps the comparison second order in the step.
/// Requires an undecimated trace with at least three rows; throws ConfigError otherwise.
AuditReport finite_difference_audit(const Trace& trace, const Scenario& scenario, const AuditOptions& options = {});

}  // namespace platoon
