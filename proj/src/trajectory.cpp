#include "jla/trajectory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jla {

TrajectorySpec TrajectorySpec::constant(Vec target) {
    if (!target.allFinite()) throw std::invalid_argument("trajectory: non-finite target");
    TrajectorySpec s;
    s.kind = Kind::constant;
    s.target = std::move(target);
    return s;
}

TrajectorySpec TrajectorySpec::sinusoid(Vec amplitude, Vec omega, Vec phase, Vec offset) {
    const auto n = amplitude.size();
    if (omega.size() != n || phase.size() != n || offset.size() != n) {
        throw std::invalid_argument("trajectory: sinusoid parameter sizes differ");
    }
    if (!amplitude.allFinite() || !omega.allFinite() || !phase.allFinite() || !offset.allFinite()) {
        throw std::invalid_argument("trajectory: non-finite sinusoid parameter");
    }
    TrajectorySpec s;
    s.kind = Kind::sinusoid;
    s.amplitude = std::move(amplitude);
    s.omega = std::move(omega);
    s.phase = std::move(phase);
    s.offset = std::move(offset);
    return s;
}

DesiredPoint eval(const TrajectorySpec& spec, double t) {
    const Eigen::Index n = spec.size();
    if (spec.kind == TrajectorySpec::Kind::constant) {
        return {spec.target, Vec::Zero(n), Vec::Zero(n)};
    }
    DesiredPoint p{Vec(n), Vec(n), Vec(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const double arg = spec.omega[i] * t + spec.phase[i];
        const double s = std::sin(arg);
        const double c = std::cos(arg);
        const double A = spec.amplitude[i];
        const double w = spec.omega[i];
        p.q[i] = A * s + spec.offset[i];
        p.dq[i] = A * w * c;
        p.ddq[i] = -A * w * w * s;
    }
    return p;
}

FeasibilityReport audit_feasibility(const TrajectorySpec& spec, const LimitSet& lim, double horizon,
                                    double dt_sample) {
    if (!(dt_sample > 0.0)) throw std::invalid_argument("audit_feasibility: dt_sample must be positive");
    if (spec.size() != lim.size()) throw std::invalid_argument("audit_feasibility: joint count mismatch");
    FeasibilityReport r;
    r.min_position_margin = std::numeric_limits<double>::infinity();
    r.min_velocity_margin = std::numeric_limits<double>::infinity();
    const auto steps = static_cast<long>(std::floor(horizon / dt_sample + 1e-9));
    for (long k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * dt_sample;
        const DesiredPoint p = eval(spec, t);
        for (Eigen::Index i = 0; i < lim.size(); ++i) {
            const double mq = std::min(p.q[i] - lim.q_min()[i], lim.q_max()[i] - p.q[i]);
            const double mdq = std::min(p.dq[i] - lim.dq_min()[i], lim.dq_max()[i] - p.dq[i]);
            if (mq < r.min_position_margin) {
                r.min_position_margin = mq;
                r.worst_position_joint = i;
                r.worst_position_time = t;
            }
            if (mdq < r.min_velocity_margin) {
                r.min_velocity_margin = mdq;
                r.worst_velocity_joint = i;
                r.worst_velocity_time = t;
            }
        }
    }
    r.feasible = r.min_position_margin > 0.0 && r.min_velocity_margin > 0.0;
    return r;
}

}  // namespace jla
