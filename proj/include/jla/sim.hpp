#pragma once

#include "jla/controller.hpp"
#include "jla/dynamics.hpp"
#include "jla/limits_param.hpp"
#include "jla/trajectory.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <vector>

namespace jla {

enum class Integrator { rk4, heun };

/// Additive joint-torque pulse active on [t_start, t_end).
struct Disturbance {
    double t_start = 0.0;
    double t_end = 0.0;
    Vec torque;
};

struct SimConfig {
    double dt_physics = 1e-3;
    double dt_control = 1e-3;  // integer multiple of dt_physics
    double duration = 10.0;
    Integrator integrator = Integrator::rk4;
    JointState initial;
    std::vector<Disturbance> disturbances;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const SimConfig& cfg, Eigen::Index dof);

/// Number of physics steps per control update.
long control_ratio(const SimConfig& cfg);

struct TraceSample {
    double t = 0.0;
    Vec q, dq;
    Vec q_d, dq_d, ddq_d;
    Vec tau;          // applied torque, disturbance included
    Vec zeta, psi;
    Vec zeta_d, psi_d;
    Vec psi_r, psi_r_dot;
    Vec gamma;        // unregularized psi_r argument
    Vec e_zeta, e_psi;
    double V = 0.0;
    Vec margin_q;     // (q - q0) / delta_q
    Vec margin_dq;    // (dq - dq0) / delta_dq
};

struct SimTrace {
    std::vector<TraceSample> samples;
    double dt = 0.0;
    bool diverged = false;
    double divergence_time = 0.0;
    std::string divergence_reason;
    bool gains_valid = true;
    Variant variant = Variant::eq9;
    ControllerKind controller = ControllerKind::limit_avoiding;

    Eigen::Index dof() const { return samples.empty() ? 0 : samples.front().q.size(); }
};

/// Closed-loop run: torque recomputed every dt_control and held, plant
/// integrated at dt_physics. Divergence ends the trace instead of throwing.
SimTrace simulate(const PlanarChainModel& model, const LimitSet& lim, const ControllerConfig& ctrl,
                  const TrajectorySpec& spec, const SimConfig& cfg);

/// Single fixed step of the plant under constant torque.
JointState integrate_step(const JointState& s, const Vec& tau, double dt,
                          const PlanarChainModel& model, Integrator method);

struct SweepRow {
    double dt_control = 0.0;
    double max_velocity_overshoot = 0.0;  // rad/s beyond the velocity box, 0 if none
    double max_position_overshoot = 0.0;  // rad beyond the position box
    double torque_oscillation = 0.0;      // mean |dtau| / mean |tau|
    double min_velocity_margin = 0.0;     // 1 - max |normalized dq|
    double final_error = 0.0;             // max |q - q_d| at the end, rad
    bool converged = false;
    bool diverged = false;
};

SweepRow summarize_sweep_run(double dt_control, const SimTrace& trace, const LimitSet& lim,
                             double settle_band);

/// Runs simulate once per entry of dt_controls. dt_physics is the smaller of
/// the base value and each dt_control. Serial reference implementation.
std::vector<SweepRow> sweep_timestep(const PlanarChainModel& model, const LimitSet& lim,
                                     const ControllerConfig& ctrl, const TrajectorySpec& spec,
                                     const SimConfig& base, const std::vector<double>& dt_controls,
                                     double settle_band = std::numbers::pi / 180.0);

}  // namespace jla
