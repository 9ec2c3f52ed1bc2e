#pragma once

#include "jla/limits_param.hpp"

namespace jla {

struct DesiredPoint {
    Vec q;
    Vec dq;
    Vec ddq;
};

/// Per-joint desired trajectory: either a constant target or
/// q_d = A sin(w t + phi0) + b. Angles in radians.
struct TrajectorySpec {
    enum class Kind { constant, sinusoid };

    Kind kind = Kind::constant;
    Vec target;     // constant
    Vec amplitude;  // sinusoid
    Vec omega;
    Vec phase;
    Vec offset;

    static TrajectorySpec constant(Vec target);
    static TrajectorySpec sinusoid(Vec amplitude, Vec omega, Vec phase, Vec offset);

    Eigen::Index size() const { return kind == Kind::constant ? target.size() : amplitude.size(); }
};

DesiredPoint eval(const TrajectorySpec& spec, double t);

struct FeasibilityReport {
    bool feasible = false;
    /// Smallest distance of q_d to the nearest position bound (rad), over joints and samples.
    double min_position_margin = 0.0;
    double min_velocity_margin = 0.0;
    Eigen::Index worst_position_joint = 0;
    Eigen::Index worst_velocity_joint = 0;
    double worst_position_time = 0.0;
    double worst_velocity_time = 0.0;
};

/// Samples [0, horizon] every dt_sample (endpoint included).
FeasibilityReport audit_feasibility(const TrajectorySpec& spec, const LimitSet& lim,
                                    double horizon, double dt_sample = 1e-3);

}  // namespace jla
