#include "jla/controller.hpp"

#include <cmath>
#include <sstream>

namespace jla {

namespace {

void ensure_finite(const Vec& v, const char* term) {
    if (!v.allFinite()) throw ControlError(std::string("control law: non-finite ") + term);
}

}  // namespace

GainReport validate_gains(const GainSet& g) {
    GainReport r;
    const auto n = g.k1.size();
    if (n == 0 || g.k2.size() != n || g.k3.size() != n) {
        r.message = "gain vectors empty or of different length";
        return r;
    }
    r.positive = g.k1.allFinite() && g.k2.allFinite() && g.k3.allFinite() &&
                 (g.k1.array() > 0).all() && (g.k2.array() > 0).all() && (g.k3.array() > 0).all();
    r.schur_margin = g.k3 - g.k2.cwiseProduct(g.k2).cwiseQuotient(g.k1);
    std::ostringstream os;
    if (!r.positive) os << "gains must be finite and strictly positive; ";
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(r.schur_margin[i] > 0.0)) {
            os << "joint " << i + 1 << ": k3 - k2^2/k1 = " << r.schur_margin[i] << " <= 0; ";
        }
    }
    if (!(g.p > 0.0) || !std::isfinite(g.p)) os << "regularization exponent p must be positive; ";
    r.pass = r.positive && (r.schur_margin.array() > 0.0).all() && g.p > 0.0 && std::isfinite(g.p);
    r.message = r.pass ? "ok" : os.str();
    return r;
}

Vec transformed_bias(const Vec& q, const Vec& dq, const PlanarChainModel& model) {
    return coriolis_matrix(q, dq, model) * dq + gravity_vector(q, model);
}

DesiredTransformed transform_desired(const DesiredPoint& desired, const LimitSet& lim,
                                     double eps_sat) {
    DesiredTransformed d;
    const TransformedState ts = backward_map({desired.q, desired.dq}, lim, InverseMode::saturated, eps_sat);
    d.zeta_d = ts.zeta;
    d.psi_d = ts.psi;
    const ParamJacobians j = jacobians(ts, lim);
    d.dq_d = lim.dq0() + lim.delta_dq().cwiseProduct(d.psi_d.array().tanh().matrix());
    d.zeta_d_dot = d.dq_d.cwiseQuotient(j.j_zeta);
    d.psi_d_dot = desired.ddq.cwiseQuotient(j.j_psi);
    return d;
}

ControlDebug control_torque(const JointState& js, const DesiredPoint& desired, const LimitSet& lim,
                            const GainSet& g, const PlanarChainModel& model, double eps_sat) {
    if (js.q.size() != lim.size() || g.k1.size() != lim.size() || model.dof() != lim.size()) {
        throw std::invalid_argument("control_torque: dimension mismatch between state, limits, gains, model");
    }
    ControlDebug out;
    const TransformedState ts = backward_map(js, lim, InverseMode::saturated, eps_sat);
    out.zeta = ts.zeta;
    out.psi = ts.psi;
    const DesiredTransformed d = transform_desired(desired, lim, eps_sat);
    out.zeta_d = d.zeta_d;
    out.psi_d = d.psi_d;

    // State seen through the parametrization; equals js when js is interior.
    const JointState eff = forward_map(ts, lim);
    const ParamJacobians j = jacobians(ts, lim);
    const Vec zeta_dot = eff.dq.cwiseQuotient(j.j_zeta);

    out.psi_r = psi_r(ts.zeta, d.zeta_d, d.psi_d, lim, g.p);
    ensure_finite(out.psi_r, "psi_r");
    out.psi_r_dot = psi_r_dot(ts.zeta, zeta_dot, d.zeta_d, d.zeta_d_dot, d.psi_d, d.psi_d_dot, lim, g.p);
    ensure_finite(out.psi_r_dot, "psi_r_dot");

    out.e_zeta = ts.zeta - d.zeta_d;
    out.e_psi = ts.psi - out.psi_r;
    out.e_zeta_dot = zeta_dot - d.zeta_d_dot;
    ensure_finite(out.e_zeta_dot, "e_zeta_dot");

    out.h_zeta_psi = transformed_bias(eff.q, eff.dq, model);
    ensure_finite(out.h_zeta_psi, "h_zeta_psi");

    Vec k3_term = g.k3.cwiseProduct(out.e_psi);
    if (g.variant == Variant::eq10) k3_term = k3_term.cwiseQuotient(j.j_psi);
    const Vec v = out.psi_r_dot - g.k1.cwiseQuotient(g.k2).cwiseProduct(out.e_zeta_dot) -
                  g.k2.cwiseProduct(out.e_zeta) - k3_term;
    ensure_finite(v, "feedback term");

    const Mat M = mass_matrix(eff.q, model);
    out.tau = out.h_zeta_psi + M * j.j_psi.cwiseProduct(v);
    ensure_finite(out.tau, "tau");
    return out;
}

Vec baseline_computed_torque(const JointState& js, const DesiredPoint& desired, const PdGains& gains,
                             const PlanarChainModel& model) {
    const DynTerms d = dyn_terms(js.q, js.dq, model);
    const Vec a = desired.ddq - gains.kd.cwiseProduct(js.dq - desired.dq) -
                  gains.kp.cwiseProduct(js.q - desired.q);
    return d.C * js.dq + d.G + d.M * a;
}

}  // namespace jla
