#include "jla/analysis.hpp"

#include <cmath>
#include <limits>

namespace jla {

double lyapunov_value(const Vec& e_zeta, const Vec& e_psi, const GainSet& g) {
    return 0.5 * (e_zeta.dot(g.k1.cwiseProduct(e_zeta)) + 2.0 * e_zeta.dot(g.k2.cwiseProduct(e_psi)) +
                  e_psi.dot(g.k3.cwiseProduct(e_psi)));
}

Mat lyapunov_weight(const GainSet& g) {
    const Eigen::Index n = g.k1.size();
    Mat P = Mat::Zero(2 * n, 2 * n);
    P.topLeftCorner(n, n) = g.k1.asDiagonal();
    P.topRightCorner(n, n) = g.k2.asDiagonal();
    P.bottomLeftCorner(n, n) = g.k2.asDiagonal();
    P.bottomRightCorner(n, n) = g.k3.asDiagonal();
    return P;
}

double lyapunov_value_block(const Vec& e_zeta, const Vec& e_psi, const GainSet& g) {
    Vec e(e_zeta.size() + e_psi.size());
    e << e_zeta, e_psi;
    return 0.5 * e.dot(lyapunov_weight(g) * e);
}

ResidualReport error_dynamics_residual(const SimTrace& trace, const LimitSet& lim, const GainSet& g,
                                       const PlanarChainModel& model) {
    ResidualReport r;
    r.reliable = trace.dt <= 1e-3 + 1e-15;
    const auto& s = trace.samples;
    if (s.size() < 3 || s.front().e_zeta.size() == 0) return r;
    const double h = trace.dt;
    for (std::size_t k = 1; k + 1 < s.size(); ++k) {
        const auto& cur = s[k];
        const Vec de_zeta = (s[k + 1].e_zeta - s[k - 1].e_zeta) / (2.0 * h);

        const ParamJacobians j = jacobians({cur.zeta, cur.psi}, lim);
        const Vec kinematic =
            j.j_zeta.cwiseProduct(de_zeta) -
            lim.delta_dq().cwiseProduct((cur.psi.array().tanh() - cur.gamma.array()).matrix());

        const JointState eff = forward_map({cur.zeta, cur.psi}, lim);
        const Mat M = mass_matrix(eff.q, model);
        const Vec qdd = M.llt().solve(cur.tau - transformed_bias(eff.q, eff.dq, model));
        const Vec de_psi = qdd.cwiseQuotient(j.j_psi) - cur.psi_r_dot;
        Vec k3_term = g.k3.cwiseProduct(cur.e_psi);
        if (trace.variant == Variant::eq10) k3_term = k3_term.cwiseQuotient(j.j_psi);
        const Vec dynamic = de_psi + g.k1.cwiseQuotient(g.k2).cwiseProduct(de_zeta) +
                            g.k2.cwiseProduct(cur.e_zeta) + k3_term;

        r.max_kinematic = std::max(r.max_kinematic, kinematic.lpNorm<Eigen::Infinity>());
        r.max_dynamic = std::max(r.max_dynamic, dynamic.lpNorm<Eigen::Infinity>());
    }
    r.max_residual = std::max(r.max_kinematic, r.max_dynamic);
    return r;
}

long count_lyapunov_increases(const SimTrace& trace, double relative_tolerance, double* max_v) {
    double vmax = 0.0;
    for (const auto& s : trace.samples) {
        if (std::isfinite(s.V)) vmax = std::max(vmax, s.V);
    }
    if (max_v) *max_v = vmax;
    long count = 0;
    for (std::size_t k = 1; k < trace.samples.size(); ++k) {
        const double dv = trace.samples[k].V - trace.samples[k - 1].V;
        if (dv > relative_tolerance * vmax) ++count;
    }
    return count;
}

MetricsReport trace_metrics(const SimTrace& trace, const LimitSet& lim, const GainSet& g,
                            const PlanarChainModel& model, const MetricsOptions& opt) {
    MetricsReport m;
    m.diverged = trace.diverged;
    m.gains_valid = trace.gains_valid;
    const auto& s = trace.samples;
    const Eigen::Index n = lim.size();
    m.rms_error = Vec::Zero(n);
    if (s.empty()) return m;

    double max_q = 0.0;
    double max_dq = 0.0;
    long window = 0;
    std::size_t last_out_of_band = std::numeric_limits<std::size_t>::max();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const Vec err = s[k].q - s[k].q_d;
        if (s[k].t >= opt.window_start - 1e-12) {
            m.rms_error += err.cwiseProduct(err);
            ++window;
        }
        if ((err.cwiseAbs().array() >= opt.settle_band).any()) last_out_of_band = k;
        const double aq = s[k].margin_q.cwiseAbs().maxCoeff();
        const double adq = s[k].margin_dq.cwiseAbs().maxCoeff();
        max_q = std::max(max_q, aq);
        max_dq = std::max(max_dq, adq);
        if (aq >= 1.0) ++m.position_violations;
        if (adq >= 1.0) ++m.velocity_violations;
    }
    if (window > 0) m.rms_error = (m.rms_error / static_cast<double>(window)).cwiseSqrt();

    if (last_out_of_band == std::numeric_limits<std::size_t>::max()) {
        m.settled = true;
        m.settling_time = s.front().t;
    } else if (last_out_of_band + 1 < s.size()) {
        m.settled = true;
        m.settling_time = s[last_out_of_band + 1].t;
    } else {
        m.settled = false;
        m.settling_time = s.back().t;
    }
    m.min_position_margin = 1.0 - max_q;
    m.min_velocity_margin = 1.0 - max_dq;

    m.lyapunov_increases = count_lyapunov_increases(trace, opt.lyapunov_tolerance, &m.max_lyapunov);

    if (opt.compute_residual && s.front().e_zeta.size() == n) {
        const ResidualReport r = error_dynamics_residual(trace, lim, g, model);
        m.max_residual = r.max_residual;
        m.residual_reliable = r.reliable;
    } else {
        m.max_residual = std::nan("");
    }
    return m;
}

}  // namespace jla
