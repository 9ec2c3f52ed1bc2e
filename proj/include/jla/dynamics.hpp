#pragma once

#include "jla/limits_param.hpp"

#include <Eigen/Dense>

#include <vector>

namespace jla {

struct LinkParams {
    double mass = 1.0;        // kg
    double length = 1.0;      // m
    double com_offset = 0.5;  // m, from the proximal joint along the link
    double inertia_com = 1.0 / 12.0;  // kg m^2, about the out-of-plane axis
};

/// Planar serial chain of revolute joints. Joint angles are relative; the
/// first link's absolute angle is measured from the +x axis.
class PlanarChainModel {
public:
    explicit PlanarChainModel(std::vector<LinkParams> links,
                              Eigen::Vector2d gravity = Eigen::Vector2d(0.0, -9.81));

    /// n identical uniform rods: mass m, length l, COM at l/2, inertia m l^2 / 12.
    static PlanarChainModel uniform_rods(int n, double mass = 1.0, double length = 1.0,
                                         Eigen::Vector2d gravity = Eigen::Vector2d(0.0, -9.81));

    Eigen::Index dof() const { return static_cast<Eigen::Index>(links_.size()); }
    const std::vector<LinkParams>& links() const { return links_; }
    const Eigen::Vector2d& gravity() const { return gravity_; }

    PlanarChainModel with_gravity(Eigen::Vector2d g) const { return PlanarChainModel(links_, g); }

private:
    std::vector<LinkParams> links_;
    Eigen::Vector2d gravity_;
};

struct DynTerms {
    Mat M;  // symmetric positive definite
    Mat C;  // Christoffel construction: Mdot - 2C is skew
    Vec G;
};

Mat mass_matrix(const Vec& q, const PlanarChainModel& model);
/// dM/dq_k for each k.
std::vector<Mat> mass_matrix_partials(const Vec& q, const PlanarChainModel& model);
Mat coriolis_matrix(const Vec& q, const Vec& dq, const PlanarChainModel& model);
Vec gravity_vector(const Vec& q, const PlanarChainModel& model);

DynTerms dyn_terms(const Vec& q, const Vec& dq, const PlanarChainModel& model);

/// qdd = M^-1 (tau - C dq - G).
Vec forward_dynamics(const Vec& q, const Vec& dq, const Vec& tau, const PlanarChainModel& model);

struct Energy {
    double kinetic = 0.0;
    double potential = 0.0;
    double total() const { return kinetic + potential; }
};

/// Potential is measured against the gravity vector with the joint-1 axis as datum.
Energy energy(const Vec& q, const Vec& dq, const PlanarChainModel& model);

/// Planar COM positions of every link, in base coordinates.
std::vector<Eigen::Vector2d> com_positions(const Vec& q, const PlanarChainModel& model);

}  // namespace jla
