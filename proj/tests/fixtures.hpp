#pragma once

#include "jla/dynamics.hpp"
#include "jla/limits_param.hpp"

#include <numbers>
#include <random>

namespace jla::test {

inline constexpr double kDeg = std::numbers::pi / 180.0;

inline Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
inline Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

// Two-link box: q in (-45, 90) x (-90, 90) deg, dq in (-90, 90) x (-90, 180) deg/s.
inline LimitSet two_link_limits() {
    return LimitSet(v2(-45, -90) * kDeg, v2(90, 90) * kDeg, v2(-90, -90) * kDeg, v2(90, 180) * kDeg);
}

inline PlanarChainModel unit_two_link() { return PlanarChainModel::uniform_rods(2); }

inline Vec uniform(std::mt19937_64& rng, const Vec& lo, const Vec& hi) {
    Vec out(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
        out[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    }
    return out;
}

inline Vec uniform(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
    return uniform(rng, Vec::Constant(n, lo), Vec::Constant(n, hi));
}

// Strictly interior point, kept a small fraction away from the faces.
inline JointState interior_point(std::mt19937_64& rng, const LimitSet& lim, double shrink = 0.999) {
    return {lim.q0() + shrink * lim.delta_q().cwiseProduct(uniform(rng, lim.size(), -1.0, 1.0)),
            lim.dq0() + shrink * lim.delta_dq().cwiseProduct(uniform(rng, lim.size(), -1.0, 1.0))};
}

}  // namespace jla::test
