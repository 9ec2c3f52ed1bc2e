#pragma once

#include "jla/controller.hpp"
#include "jla/sim.hpp"

#include <numbers>

namespace jla {

/// V = 1/2 (e_z' k1 e_z + 2 e_z' k2 e_p + e_p' k3 e_p), diagonal gains.
double lyapunov_value(const Vec& e_zeta, const Vec& e_psi, const GainSet& g);

/// Same quantity through the assembled block matrix P = [[k1, k2], [k2, k3]].
Mat lyapunov_weight(const GainSet& g);
double lyapunov_value_block(const Vec& e_zeta, const Vec& e_psi, const GainSet& g);

struct ResidualReport {
    double max_residual = 0.0;   // max over both lines
    double max_kinematic = 0.0;  // J_z de_z - delta_dq (tanh psi - gamma)
    double max_dynamic = 0.0;    // de_psi + k2^-1 k1 de_z + k2 e_z + k3 e_psi
    bool reliable = true;        // false when dt > 1e-3
};

/// Evaluates the closed-loop error dynamics along a trace. de_zeta comes
/// from central differences of e_zeta; de_psi uses the plant-implied
/// psi rate J_psi^-1 M^-1 (tau - h) minus the recorded psi_r rate, so the
/// check depends on the recorded torque column.
ResidualReport error_dynamics_residual(const SimTrace& trace, const LimitSet& lim, const GainSet& g,
                                       const PlanarChainModel& model);

struct MetricsReport {
    Vec rms_error;                 // rad, per joint over the window
    double settling_time = 0.0;    // s, first time after which every joint stays in band
    bool settled = false;
    double min_position_margin = 0.0;  // 1 - max |(q - q0) / delta_q|
    double min_velocity_margin = 0.0;
    long position_violations = 0;  // samples with some |normalized margin| >= 1
    long velocity_violations = 0;
    long lyapunov_increases = 0;   // steps with V[k+1] - V[k] > tol * max V
    double max_lyapunov = 0.0;
    double max_residual = 0.0;
    bool residual_reliable = false;
    bool diverged = false;
    bool gains_valid = true;
};

struct MetricsOptions {
    double settle_band = std::numbers::pi / 180.0;
    double window_start = 0.0;          // rms window start, s
    double lyapunov_tolerance = 1e-6;   // relative to max V
    bool compute_residual = false;
};

long count_lyapunov_increases(const SimTrace& trace, double relative_tolerance, double* max_v = nullptr);

MetricsReport trace_metrics(const SimTrace& trace, const LimitSet& lim, const GainSet& g,
                            const PlanarChainModel& model, const MetricsOptions& opt = {});

}  // namespace jla
