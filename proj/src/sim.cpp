#include "jla/sim.hpp"

#include "jla/analysis.hpp"

#include <cmath>
#include <sstream>

namespace jla {

namespace {

constexpr double kDivergenceBound = 1e6;

bool diverged_state(const JointState& s) {
    return !s.q.allFinite() || !s.dq.allFinite() || s.q.cwiseAbs().maxCoeff() > kDivergenceBound ||
           s.dq.cwiseAbs().maxCoeff() > kDivergenceBound;
}

Vec disturbance_at(const std::vector<Disturbance>& list, double t, Eigen::Index n) {
    Vec d = Vec::Zero(n);
    for (const auto& pulse : list) {
        if (t >= pulse.t_start && t < pulse.t_end) d += pulse.torque;
    }
    return d;
}

long steps_for(double duration, double dt) { return std::lround(duration / dt); }

}  // namespace

void validate(const SimConfig& cfg, Eigen::Index dof) {
    if (!(cfg.dt_physics > 0.0) || !std::isfinite(cfg.dt_physics)) {
        throw std::invalid_argument("sim.dt_physics must be positive");
    }
    if (!(cfg.dt_control >= cfg.dt_physics) || !std::isfinite(cfg.dt_control)) {
        throw std::invalid_argument("sim.dt_control must be >= sim.dt_physics");
    }
    const double ratio = cfg.dt_control / cfg.dt_physics;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio) {
        throw std::invalid_argument("sim.dt_control must be an integer multiple of sim.dt_physics");
    }
    if (!(cfg.duration > 0.0) || !std::isfinite(cfg.duration)) {
        throw std::invalid_argument("sim.duration must be positive");
    }
    if (cfg.initial.q.size() != dof || cfg.initial.dq.size() != dof) {
        throw std::invalid_argument("sim.initial must have one entry per joint");
    }
    if (!cfg.initial.q.allFinite() || !cfg.initial.dq.allFinite()) {
        throw std::invalid_argument("sim.initial must be finite");
    }
    for (std::size_t i = 0; i < cfg.disturbances.size(); ++i) {
        const auto& d = cfg.disturbances[i];
        const std::string tag = "disturbances[" + std::to_string(i) + "]";
        if (d.torque.size() != dof) throw std::invalid_argument(tag + ".torque must have one entry per joint");
        if (!(d.t_end >= d.t_start)) throw std::invalid_argument(tag + ".t_end must be >= t_start");
    }
}

long control_ratio(const SimConfig& cfg) { return std::lround(cfg.dt_control / cfg.dt_physics); }

JointState integrate_step(const JointState& s, const Vec& tau, double dt, const PlanarChainModel& model,
                          Integrator method) {
    auto accel = [&](const Vec& q, const Vec& dq) { return forward_dynamics(q, dq, tau, model); };
    if (method == Integrator::heun) {
        const Vec a1 = accel(s.q, s.dq);
        const Vec q1 = s.q + dt * s.dq;
        const Vec dq1 = s.dq + dt * a1;
        const Vec a2 = accel(q1, dq1);
        return {s.q + 0.5 * dt * (s.dq + dq1), s.dq + 0.5 * dt * (a1 + a2)};
    }
    const Vec& k1q = s.dq;
    const Vec k1v = accel(s.q, s.dq);
    const Vec k2q = s.dq + 0.5 * dt * k1v;
    const Vec k2v = accel(s.q + 0.5 * dt * k1q, k2q);
    const Vec k3q = s.dq + 0.5 * dt * k2v;
    const Vec k3v = accel(s.q + 0.5 * dt * k2q, k3q);
    const Vec k4q = s.dq + dt * k3v;
    const Vec k4v = accel(s.q + dt * k3q, k4q);
    return {s.q + dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
            s.dq + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

SimTrace simulate(const PlanarChainModel& model, const LimitSet& lim, const ControllerConfig& ctrl,
                  const TrajectorySpec& spec, const SimConfig& cfg) {
    const Eigen::Index n = model.dof();
    if (lim.size() != n || spec.size() != n) {
        throw std::invalid_argument("simulate: model, limits and trajectory disagree on joint count");
    }
    validate(cfg, n);
    const bool has_gains = ctrl.gains.k1.size() == n && ctrl.gains.k2.size() == n && ctrl.gains.k3.size() == n;
    if (ctrl.kind == ControllerKind::limit_avoiding && !has_gains) {
        throw std::invalid_argument("controller: k1, k2, k3 must have one entry per joint");
    }
    if (ctrl.kind == ControllerKind::computed_torque && (ctrl.pd.kp.size() != n || ctrl.pd.kd.size() != n)) {
        throw std::invalid_argument("controller: kp, kd must have one entry per joint");
    }

    SimTrace trace;
    trace.dt = cfg.dt_physics;
    trace.variant = ctrl.gains.variant;
    trace.controller = ctrl.kind;
    trace.gains_valid = has_gains && validate_gains(ctrl.gains).pass;

    const long steps = steps_for(cfg.duration, cfg.dt_physics);
    const long ratio = control_ratio(cfg);
    trace.samples.reserve(static_cast<std::size_t>(steps + 1));

    JointState state = cfg.initial;
    Vec tau_cmd = Vec::Zero(n);
    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt_physics;
        const DesiredPoint desired = eval(spec, t);

        TraceSample s;
        s.t = t;
        s.q = state.q;
        s.dq = state.dq;
        s.q_d = desired.q;
        s.dq_d = desired.dq;
        s.ddq_d = desired.ddq;
        s.margin_q = (state.q - lim.q0()).cwiseQuotient(lim.delta_q());
        s.margin_dq = (state.dq - lim.dq0()).cwiseQuotient(lim.delta_dq());

        try {
            if (has_gains) {
                const ControlDebug dbg = control_torque(state, desired, lim, ctrl.gains, model, ctrl.eps_sat);
                s.zeta = dbg.zeta;
                s.psi = dbg.psi;
                s.zeta_d = dbg.zeta_d;
                s.psi_d = dbg.psi_d;
                s.psi_r = dbg.psi_r;
                s.psi_r_dot = dbg.psi_r_dot;
                s.gamma = reference_gamma(dbg.zeta, dbg.zeta_d, dbg.psi_d, lim);
                s.e_zeta = dbg.e_zeta;
                s.e_psi = dbg.e_psi;
                s.V = lyapunov_value(dbg.e_zeta, dbg.e_psi, ctrl.gains);
                if (k % ratio == 0 && ctrl.kind == ControllerKind::limit_avoiding) tau_cmd = dbg.tau;
            } else {
                s.V = std::nan("");
            }
            if (k % ratio == 0 && ctrl.kind == ControllerKind::computed_torque) {
                tau_cmd = baseline_computed_torque(state, desired, ctrl.pd, model);
            }
        } catch (const ControlError& e) {
            trace.diverged = true;
            trace.divergence_time = t;
            trace.divergence_reason = e.what();
            break;
        }

        s.tau = tau_cmd + disturbance_at(cfg.disturbances, t, n);
        const Vec tau_applied = s.tau;
        trace.samples.push_back(std::move(s));
        if (k == steps) break;

        state = integrate_step(state, tau_applied, cfg.dt_physics, model, cfg.integrator);
        if (diverged_state(state)) {
            trace.diverged = true;
            trace.divergence_time = t + cfg.dt_physics;
            trace.divergence_reason = "state left the finite range";
            break;
        }
    }
    return trace;
}

SweepRow summarize_sweep_run(double dt_control, const SimTrace& trace, const LimitSet& lim,
                             double settle_band) {
    SweepRow row;
    row.dt_control = dt_control;
    row.diverged = trace.diverged;
    if (trace.samples.empty()) return row;

    double max_abs_dq = 0.0;
    double sum_dtau = 0.0;
    double sum_tau = 0.0;
    long n_dtau = 0;
    long n_tau = 0;
    for (std::size_t k = 0; k < trace.samples.size(); ++k) {
        const auto& s = trace.samples[k];
        max_abs_dq = std::max(max_abs_dq, s.margin_dq.cwiseAbs().maxCoeff());
        for (Eigen::Index i = 0; i < s.q.size(); ++i) {
            row.max_velocity_overshoot = std::max(
                {row.max_velocity_overshoot, s.dq[i] - lim.dq_max()[i], lim.dq_min()[i] - s.dq[i]});
            row.max_position_overshoot = std::max(
                {row.max_position_overshoot, s.q[i] - lim.q_max()[i], lim.q_min()[i] - s.q[i]});
            sum_tau += std::abs(s.tau[i]);
            ++n_tau;
        }
        if (k > 0) {
            sum_dtau += (s.tau - trace.samples[k - 1].tau).cwiseAbs().sum();
            n_dtau += s.q.size();
        }
    }
    row.min_velocity_margin = 1.0 - max_abs_dq;
    const double mean_tau = n_tau ? sum_tau / static_cast<double>(n_tau) : 0.0;
    const double mean_dtau = n_dtau ? sum_dtau / static_cast<double>(n_dtau) : 0.0;
    row.torque_oscillation = mean_tau > 0.0 ? mean_dtau / mean_tau : 0.0;

    const auto& last = trace.samples.back();
    row.final_error = (last.q - last.q_d).cwiseAbs().maxCoeff();
    row.converged = !trace.diverged && row.final_error < settle_band;
    return row;
}

std::vector<SweepRow> sweep_timestep(const PlanarChainModel& model, const LimitSet& lim,
                                     const ControllerConfig& ctrl, const TrajectorySpec& spec,
                                     const SimConfig& base, const std::vector<double>& dt_controls,
                                     double settle_band) {
    if (dt_controls.empty()) throw std::invalid_argument("sweep: dt list must not be empty");
    std::vector<SweepRow> rows;
    rows.reserve(dt_controls.size());
    for (double dt : dt_controls) {
        SimConfig cfg = base;
        cfg.dt_control = dt;
        cfg.dt_physics = std::min(base.dt_physics, dt);
        rows.push_back(summarize_sweep_run(dt, simulate(model, lim, ctrl, spec, cfg), lim, settle_band));
    }
    return rows;
}

}  // namespace jla
