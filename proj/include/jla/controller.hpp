#pragma once

#include "jla/dynamics.hpp"
#include "jla/limits_param.hpp"
#include "jla/trajectory.hpp"

#include <stdexcept>
#include <string>

namespace jla {

enum class Variant {
    eq9,   // continuous-time law
    eq10,  // k3 term scaled by J_psi^-1, tolerates coarser control periods
};

/// Diagonal gains of the limit-avoiding law, stored as vectors.
struct GainSet {
    Vec k1;
    Vec k2;
    Vec k3;
    double p = kDefaultRegularizationP;
    Variant variant = Variant::eq9;
};

struct GainReport {
    bool pass = false;
    bool positive = false;      // every entry finite and > 0
    Vec schur_margin;           // k3 - k2^2 / k1 per joint
    std::string message;
};

GainReport validate_gains(const GainSet& g);

/// Thrown when an intermediate term of the control law goes non-finite.
class ControlError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ControlDebug {
    Vec zeta, psi;
    Vec zeta_d, psi_d;
    Vec e_zeta, e_psi;
    Vec e_zeta_dot;
    Vec psi_r, psi_r_dot;
    Vec h_zeta_psi;
    Vec tau;
};

/// C(q, dq) dq + G(q).
Vec transformed_bias(const Vec& q, const Vec& dq, const PlanarChainModel& model);

/// Transformed desired state (zeta_d, psi_d) and its rates, after the
/// interior saturation of the desired position and velocity.
struct DesiredTransformed {
    Vec zeta_d, psi_d;
    Vec zeta_d_dot, psi_d_dot;
    Vec dq_d;  // velocity consistent with psi_d
};

DesiredTransformed transform_desired(const DesiredPoint& desired, const LimitSet& lim,
                                     double eps_sat = kDefaultEpsilonSat);

/// Limit-avoiding feedback-linearizing torque. The measured state and the
/// desired trajectory both pass through the saturated inverse maps.
ControlDebug control_torque(const JointState& js, const DesiredPoint& desired,
                            const LimitSet& lim, const GainSet& g,
                            const PlanarChainModel& model,
                            double eps_sat = kDefaultEpsilonSat);

struct PdGains {
    Vec kp;
    Vec kd;
};

/// Plain computed-torque PD with no limit handling. Used for contrast only.
Vec baseline_computed_torque(const JointState& js, const DesiredPoint& desired,
                             const PdGains& gains, const PlanarChainModel& model);

enum class ControllerKind { limit_avoiding, computed_torque };

struct ControllerConfig {
    ControllerKind kind = ControllerKind::limit_avoiding;
    GainSet gains;
    PdGains pd;
    double eps_sat = kDefaultEpsilonSat;
    bool allow_invalid_gains = false;
};

}  // namespace jla
