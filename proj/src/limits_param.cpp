#include "jla/limits_param.hpp"

#include <cmath>
#include <sstream>

namespace jla {

namespace {

void require_same_size(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << what << ": size mismatch (" << a.size() << " vs " << b.size() << ")";
        throw std::invalid_argument(os.str());
    }
}

bool strictly_inside(const Vec& x, const Vec& lo, const Vec& hi) {
    if (x.size() != lo.size()) return false;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
    }
    return true;
}

Vec sech2(const Vec& x) { return (1.0 - x.array().tanh().square()).matrix(); }

}  // namespace

LimitSet::LimitSet(Vec q_min, Vec q_max, Vec dq_min, Vec dq_max)
    : q_min_(std::move(q_min)),
      q_max_(std::move(q_max)),
      dq_min_(std::move(dq_min)),
      dq_max_(std::move(dq_max)) {
    if (q_min_.size() == 0) throw std::invalid_argument("LimitSet: empty joint set");
    require_same_size(q_min_, q_max_, "LimitSet position bounds");
    require_same_size(q_min_, dq_min_, "LimitSet velocity bounds");
    require_same_size(dq_min_, dq_max_, "LimitSet velocity bounds");
    for (Eigen::Index i = 0; i < q_min_.size(); ++i) {
        if (!std::isfinite(q_min_[i]) || !std::isfinite(q_max_[i]) || !(q_max_[i] - q_min_[i] > 0)) {
            throw std::invalid_argument("LimitSet: joint " + std::to_string(i) +
                                        " needs finite q_min < q_max");
        }
        if (!std::isfinite(dq_min_[i]) || !std::isfinite(dq_max_[i]) || !(dq_max_[i] - dq_min_[i] > 0)) {
            throw std::invalid_argument("LimitSet: joint " + std::to_string(i) +
                                        " needs finite dq_min < dq_max");
        }
    }
    q0_ = 0.5 * (q_max_ + q_min_);
    delta_q_ = 0.5 * (q_max_ - q_min_);
    dq0_ = 0.5 * (dq_max_ + dq_min_);
    delta_dq_ = 0.5 * (dq_max_ - dq_min_);
}

bool LimitSet::position_inside(const Vec& q) const { return strictly_inside(q, q_min_, q_max_); }
bool LimitSet::velocity_inside(const Vec& dq) const { return strictly_inside(dq, dq_min_, dq_max_); }

double sat(double x, double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("sat: lower bound exceeds upper bound");
    if (x >= hi) return hi;
    if (x <= lo) return lo;
    return x;
}

Vec sat(const Vec& x, const Vec& lo, const Vec& hi) {
    require_same_size(x, lo, "sat");
    require_same_size(lo, hi, "sat");
    Vec out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) out[i] = sat(x[i], lo[i], hi[i]);
    return out;
}

JointState forward_map(const TransformedState& ts, const LimitSet& lim) {
    require_same_size(ts.zeta, lim.q0(), "forward_map zeta");
    require_same_size(ts.psi, lim.dq0(), "forward_map psi");
    JointState js;
    js.q = lim.q0() + lim.delta_q().cwiseProduct(ts.zeta.array().tanh().matrix());
    js.dq = lim.dq0() + lim.delta_dq().cwiseProduct(ts.psi.array().tanh().matrix());
    return js;
}

Vec inverse_channel(const Vec& x, const Vec& center, const Vec& half_width,
                    InverseMode mode, double eps_sat, const char* channel) {
    require_same_size(x, center, channel);
    Vec out(x.size());
    const double bound = 1.0 - eps_sat;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double u = (x[i] - center[i]) / half_width[i];
        if (mode == InverseMode::saturated) {
            u = sat(u, -bound, bound);
        } else if (!(std::abs(u) < 1.0)) {
            std::ostringstream os;
            os << channel << ": joint " << i << " value " << x[i] << " outside open interval ("
               << center[i] - half_width[i] << ", " << center[i] + half_width[i] << ")";
            throw OutOfBoxError(os.str(), i);
        }
        out[i] = std::atanh(u);
    }
    return out;
}

TransformedState backward_map(const JointState& js, const LimitSet& lim, InverseMode mode,
                              double eps_sat) {
    return {inverse_channel(js.q, lim.q0(), lim.delta_q(), mode, eps_sat, "position"),
            inverse_channel(js.dq, lim.dq0(), lim.delta_dq(), mode, eps_sat, "velocity")};
}

ParamJacobians jacobians(const TransformedState& ts, const LimitSet& lim) {
    const Eigen::Index n = lim.size();
    return jacobians(ts, {Vec::Zero(n), Vec::Zero(n)}, lim);
}

ParamJacobians jacobians(const TransformedState& ts, const TransformedState& rates,
                         const LimitSet& lim) {
    require_same_size(ts.zeta, lim.q0(), "jacobians zeta");
    require_same_size(ts.psi, lim.dq0(), "jacobians psi");
    const Vec tz = ts.zeta.array().tanh().matrix();
    const Vec tp = ts.psi.array().tanh().matrix();
    ParamJacobians j;
    j.j_zeta = lim.delta_q().cwiseProduct(sech2(ts.zeta));
    j.j_psi = lim.delta_dq().cwiseProduct(sech2(ts.psi));
    // d/dt sech^2(x) = -2 tanh(x) sech^2(x) xdot
    j.j_zeta_dot = (-2.0 * tz.array() * j.j_zeta.array() * rates.zeta.array()).matrix();
    j.j_psi_dot = (-2.0 * tp.array() * j.j_psi.array() * rates.psi.array()).matrix();
    return j;
}

double regularize(double gamma, double p) {
    const double a = std::abs(gamma);
    if (a == 0.0) return 0.0;
    if (a <= 1.0) return gamma * std::exp(-std::log1p(std::pow(a, p)) / p);
    // (1 + a^p)^(1/p) = a (1 + a^-p)^(1/p)
    return std::copysign(std::exp(-std::log1p(std::exp(-p * std::log(a))) / p), gamma);
}

namespace {

// For |gamma| > 1 returns log(1 - sigma) where sigma = |regularize(gamma)|.
double log_one_minus_sigma(double a, double p) {
    const double log_u = -p * std::log(a);  // u = a^-p
    if (log_u > -575.0) {
        const double u = std::exp(log_u);
        const double one_minus = -std::expm1(-std::log1p(u) / p);
        if (one_minus > 0.0) return std::log(one_minus);
    }
    // 1 - (1+u)^(-1/p) ~ u/p as u -> 0
    return log_u - std::log(p);
}

}  // namespace

double regularized_atanh(double gamma, double p) {
    const double a = std::abs(gamma);
    if (a == 0.0) return 0.0;
    if (a <= 1.0) return std::atanh(regularize(gamma, p));
    const double s = std::abs(regularize(gamma, p));
    return std::copysign(0.5 * (std::log1p(s) - log_one_minus_sigma(a, p)), gamma);
}

double regularized_atanh_slope(double gamma, double p) {
    const double a = std::abs(gamma);
    if (a <= 1.0) {
        const double s = std::abs(regularize(gamma, p));
        const double dsigma = std::exp(-(p + 1.0) / p * std::log1p(std::pow(a, p)));
        return dsigma / ((1.0 - s) * (1.0 + s));
    }
    const double s = std::abs(regularize(gamma, p));
    const double log_u = -p * std::log(a);
    const double log_dsigma = -(p + 1.0) * (std::log(a) + std::log1p(std::exp(log_u)) / p);
    return std::exp(log_dsigma - log_one_minus_sigma(a, p) - std::log1p(s));
}

Vec reference_gamma(const Vec& zeta, const Vec& zeta_d, const Vec& psi_d, const LimitSet& lim) {
    require_same_size(zeta, lim.q0(), "psi_r zeta");
    require_same_size(zeta_d, lim.q0(), "psi_r zeta_d");
    require_same_size(psi_d, lim.q0(), "psi_r psi_d");
    // J_zeta J_zeta_d^-1 reduces to a ratio of sech^2 terms (delta_q cancels).
    const Vec ratio = sech2(zeta).cwiseQuotient(sech2(zeta_d));
    const Vec v_d = lim.delta_dq().cwiseProduct(psi_d.array().tanh().matrix()) + lim.dq0();
    return (ratio.cwiseProduct(v_d) - lim.dq0()).cwiseQuotient(lim.delta_dq());
}

Vec psi_r(const Vec& zeta, const Vec& zeta_d, const Vec& psi_d, const LimitSet& lim, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("psi_r: regularization exponent must be positive");
    const Vec gamma = reference_gamma(zeta, zeta_d, psi_d, lim);
    Vec out(gamma.size());
    for (Eigen::Index i = 0; i < gamma.size(); ++i) out[i] = regularized_atanh(gamma[i], p);
    return out;
}

Vec psi_r_dot(const Vec& zeta, const Vec& zeta_dot, const Vec& zeta_d, const Vec& zeta_d_dot,
              const Vec& psi_d, const Vec& psi_d_dot, const LimitSet& lim, double p) {
    if (!(p > 0.0)) throw std::invalid_argument("psi_r_dot: regularization exponent must be positive");
    require_same_size(zeta_dot, lim.q0(), "psi_r_dot zeta_dot");
    require_same_size(zeta_d_dot, lim.q0(), "psi_r_dot zeta_d_dot");
    require_same_size(psi_d_dot, lim.q0(), "psi_r_dot psi_d_dot");
    const Vec gamma = reference_gamma(zeta, zeta_d, psi_d, lim);

    const Vec ratio = sech2(zeta).cwiseQuotient(sech2(zeta_d));
    const Vec ratio_dot =
        (ratio.array() * (-2.0 * zeta.array().tanh() * zeta_dot.array() +
                          2.0 * zeta_d.array().tanh() * zeta_d_dot.array()))
            .matrix();
    const Vec v_d = lim.delta_dq().cwiseProduct(psi_d.array().tanh().matrix()) + lim.dq0();
    const Vec v_d_dot = (lim.delta_dq().array() * sech2(psi_d).array() * psi_d_dot.array()).matrix();
    const Vec gamma_dot =
        (ratio_dot.cwiseProduct(v_d) + ratio.cwiseProduct(v_d_dot)).cwiseQuotient(lim.delta_dq());

    Vec out(gamma.size());
    for (Eigen::Index i = 0; i < gamma.size(); ++i) {
        out[i] = regularized_atanh_slope(gamma[i], p) * gamma_dot[i];
    }
    return out;
}

}  // namespace jla
