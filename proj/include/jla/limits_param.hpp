#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace jla {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Interior margin applied by the saturated inverse maps.
inline constexpr double kDefaultEpsilonSat = 1e-6;
/// Default exponent of the regularized reference velocity state.
inline constexpr double kDefaultRegularizationP = 20.0;

/// Raised when a joint state lies outside the open feasible box.
class OutOfBoxError : public std::domain_error {
public:
    OutOfBoxError(const std::string& what, Eigen::Index joint)
        : std::domain_error(what), joint_(joint) {}
    Eigen::Index joint() const { return joint_; }

private:
    Eigen::Index joint_;
};

/// Axis-aligned position/velocity box for an n-joint arm. Radians and rad/s.
class LimitSet {
public:
    LimitSet(Vec q_min, Vec q_max, Vec dq_min, Vec dq_max);

    Eigen::Index size() const { return q_min_.size(); }

    const Vec& q_min() const { return q_min_; }
    const Vec& q_max() const { return q_max_; }
    const Vec& dq_min() const { return dq_min_; }
    const Vec& dq_max() const { return dq_max_; }

    const Vec& q0() const { return q0_; }
    const Vec& dq0() const { return dq0_; }
    const Vec& delta_q() const { return delta_q_; }
    const Vec& delta_dq() const { return delta_dq_; }

    bool position_inside(const Vec& q) const;
    bool velocity_inside(const Vec& dq) const;

private:
    Vec q_min_, q_max_, dq_min_, dq_max_;
    Vec q0_, dq0_, delta_q_, delta_dq_;
};

struct JointState {
    Vec q;
    Vec dq;

    bool inside(const LimitSet& lim) const {
        return lim.position_inside(q) && lim.velocity_inside(dq);
    }
};

/// Exogenous (unconstrained) coordinates whose tanh images fill the box.
struct TransformedState {
    Vec zeta;
    Vec psi;
};

enum class InverseMode { strict, saturated };

double sat(double x, double lo, double hi);
Vec sat(const Vec& x, const Vec& lo, const Vec& hi);

/// q = q0 + delta_q tanh(zeta), dq = dq0 + delta_dq tanh(psi).
JointState forward_map(const TransformedState& ts, const LimitSet& lim);

/// Inverse of forward_map. In saturated mode the normalized argument is
/// clamped to [-1 + eps_sat, 1 - eps_sat] before atanh, so any finite input
/// gives a finite result.
TransformedState backward_map(const JointState& js, const LimitSet& lim,
                              InverseMode mode = InverseMode::strict,
                              double eps_sat = kDefaultEpsilonSat);

/// Single-channel inverse: atanh((x - center) / half_width).
Vec inverse_channel(const Vec& x, const Vec& center, const Vec& half_width,
                    InverseMode mode, double eps_sat, const char* channel);

/// Diagonal parametrization Jacobians (stored as vectors) and their time
/// derivatives. The dotted entries are zero unless rates were supplied.
struct ParamJacobians {
    Vec j_zeta;
    Vec j_psi;
    Vec j_zeta_dot;
    Vec j_psi_dot;
};

ParamJacobians jacobians(const TransformedState& ts, const LimitSet& lim);
ParamJacobians jacobians(const TransformedState& ts, const TransformedState& rates,
                         const LimitSet& lim);

/// Componentwise gamma / (1 + |gamma|^p)^(1/p). Magnitude stays below one.
double regularize(double gamma, double p);
/// atanh(regularize(gamma, p)), evaluated without forming 1 - sigma directly
/// so that large |gamma| stays finite.
double regularized_atanh(double gamma, double p);
/// d/dgamma atanh(regularize(gamma, p)).
double regularized_atanh_slope(double gamma, double p);

/// Unregularized argument of the reference velocity state.
Vec reference_gamma(const Vec& zeta, const Vec& zeta_d, const Vec& psi_d,
                    const LimitSet& lim);

Vec psi_r(const Vec& zeta, const Vec& zeta_d, const Vec& psi_d, const LimitSet& lim,
          double p = kDefaultRegularizationP);

Vec psi_r_dot(const Vec& zeta, const Vec& zeta_dot, const Vec& zeta_d,
              const Vec& zeta_d_dot, const Vec& psi_d, const Vec& psi_d_dot,
              const LimitSet& lim, double p = kDefaultRegularizationP);

}  // namespace jla
