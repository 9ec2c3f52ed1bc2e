#include "jla/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jla {

namespace {

void check_dim(const Vec& v, const PlanarChainModel& model, const char* what) {
    if (v.size() != model.dof()) {
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(model.dof()) +
                                    " entries, got " + std::to_string(v.size()));
    }
}

Vec absolute_angles(const Vec& q) {
    Vec theta(q.size());
    double acc = 0.0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        acc += q[i];
        theta[i] = acc;
    }
    return theta;
}

// Lever length of segment a when computing link i's COM velocity.
double lever(const std::vector<LinkParams>& links, Eigen::Index i, Eigen::Index a) {
    return a < i ? links[a].length : links[i].com_offset;
}

// Linear velocity Jacobian (2 x n) of link i's COM.
Eigen::Matrix2Xd com_jacobian(const Vec& theta, const PlanarChainModel& model, Eigen::Index i) {
    const auto& links = model.links();
    Eigen::Matrix2Xd J = Eigen::Matrix2Xd::Zero(2, model.dof());
    for (Eigen::Index k = 0; k <= i; ++k) {
        for (Eigen::Index a = k; a <= i; ++a) {
            const double L = lever(links, i, a);
            J(0, k) -= L * std::sin(theta[a]);
            J(1, k) += L * std::cos(theta[a]);
        }
    }
    return J;
}

}  // namespace

PlanarChainModel::PlanarChainModel(std::vector<LinkParams> links, Eigen::Vector2d gravity)
    : links_(std::move(links)), gravity_(gravity) {
    if (links_.empty()) throw std::invalid_argument("PlanarChainModel: at least one link required");
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const auto& l = links_[i];
        const std::string tag = "PlanarChainModel link " + std::to_string(i) + ": ";
        if (!(l.mass > 0.0)) throw std::invalid_argument(tag + "mass must be positive");
        if (!(l.length > 0.0)) throw std::invalid_argument(tag + "length must be positive");
        if (!(l.com_offset >= 0.0 && l.com_offset <= l.length)) {
            throw std::invalid_argument(tag + "com_offset must lie in [0, length]");
        }
        if (!(l.inertia_com >= 0.0)) throw std::invalid_argument(tag + "inertia_com must be non-negative");
    }
    if (!gravity_.allFinite()) throw std::invalid_argument("PlanarChainModel: gravity must be finite");
}

PlanarChainModel PlanarChainModel::uniform_rods(int n, double mass, double length,
                                                Eigen::Vector2d gravity) {
    if (n < 1) throw std::invalid_argument("PlanarChainModel: at least one link required");
    LinkParams rod{mass, length, 0.5 * length, mass * length * length / 12.0};
    return PlanarChainModel(std::vector<LinkParams>(static_cast<std::size_t>(n), rod), gravity);
}

Mat mass_matrix(const Vec& q, const PlanarChainModel& model) {
    check_dim(q, model, "mass_matrix q");
    const Eigen::Index n = model.dof();
    const Vec theta = absolute_angles(q);
    Mat M = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& link = model.links()[i];
        const Eigen::Matrix2Xd Jv = com_jacobian(theta, model, i);
        M.noalias() += link.mass * Jv.transpose() * Jv;
        // Angular rate of link i is the sum of joint rates 0..i.
        M.topLeftCorner(i + 1, i + 1).array() += link.inertia_com;
    }
    return M;
}

std::vector<Mat> mass_matrix_partials(const Vec& q, const PlanarChainModel& model) {
    check_dim(q, model, "mass_matrix_partials q");
    const Eigen::Index n = model.dof();
    const auto& links = model.links();
    const Vec theta = absolute_angles(q);
    std::vector<Mat> dM(static_cast<std::size_t>(n), Mat::Zero(n, n));
    // M_kl = sum_i m_i sum_{a>=k} sum_{b>=l} L_a L_b cos(theta_a - theta_b) + inertia terms;
    // d theta_a / d q_r = [r <= a].
    for (Eigen::Index i = 0; i < n; ++i) {
        const double m = links[i].mass;
        for (Eigen::Index a = 0; a <= i; ++a) {
            for (Eigen::Index b = 0; b <= i; ++b) {
                if (a == b) continue;
                const double w = -m * lever(links, i, a) * lever(links, i, b) * std::sin(theta[a] - theta[b]);
                for (Eigen::Index r = 0; r < n; ++r) {
                    const double s = (r <= a ? 1.0 : 0.0) - (r <= b ? 1.0 : 0.0);
                    if (s == 0.0) continue;
                    auto& D = dM[static_cast<std::size_t>(r)];
                    // (a, b) contributes to every (k, l) with k <= a and l <= b.
                    D.topLeftCorner(a + 1, b + 1).array() += w * s;
                }
            }
        }
    }
    return dM;
}

Mat coriolis_matrix(const Vec& q, const Vec& dq, const PlanarChainModel& model) {
    check_dim(dq, model, "coriolis_matrix dq");
    const Eigen::Index n = model.dof();
    const auto dM = mass_matrix_partials(q, model);
    Mat C = Mat::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double c = 0.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const double christoffel = 0.5 * (dM[i](k, j) + dM[j](k, i) - dM[k](i, j));
                c += christoffel * dq[i];
            }
            C(k, j) = c;
        }
    }
    return C;
}

Vec gravity_vector(const Vec& q, const PlanarChainModel& model) {
    check_dim(q, model, "gravity_vector q");
    const Eigen::Index n = model.dof();
    const Vec theta = absolute_angles(q);
    Vec G = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Matrix2Xd Jv = com_jacobian(theta, model, i);
        G.noalias() -= model.links()[i].mass * Jv.transpose() * model.gravity();
    }
    return G;
}

DynTerms dyn_terms(const Vec& q, const Vec& dq, const PlanarChainModel& model) {
    return {mass_matrix(q, model), coriolis_matrix(q, dq, model), gravity_vector(q, model)};
}

Vec forward_dynamics(const Vec& q, const Vec& dq, const Vec& tau, const PlanarChainModel& model) {
    check_dim(tau, model, "forward_dynamics tau");
    const DynTerms d = dyn_terms(q, dq, model);
    Eigen::LLT<Mat> llt(d.M);
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error("forward_dynamics: mass matrix is not positive definite");
    }
    return llt.solve(tau - d.C * dq - d.G);
}

std::vector<Eigen::Vector2d> com_positions(const Vec& q, const PlanarChainModel& model) {
    check_dim(q, model, "com_positions q");
    const Vec theta = absolute_angles(q);
    std::vector<Eigen::Vector2d> out;
    out.reserve(static_cast<std::size_t>(model.dof()));
    Eigen::Vector2d joint = Eigen::Vector2d::Zero();
    for (Eigen::Index i = 0; i < model.dof(); ++i) {
        const auto& link = model.links()[i];
        const Eigen::Vector2d dir(std::cos(theta[i]), std::sin(theta[i]));
        out.emplace_back(joint + link.com_offset * dir);
        joint += link.length * dir;
    }
    return out;
}

Energy energy(const Vec& q, const Vec& dq, const PlanarChainModel& model) {
    check_dim(dq, model, "energy dq");
    Energy e;
    e.kinetic = 0.5 * dq.dot(mass_matrix(q, model) * dq);
    const auto coms = com_positions(q, model);
    for (std::size_t i = 0; i < coms.size(); ++i) {
        e.potential -= model.links()[i].mass * model.gravity().dot(coms[i]);
    }
    return e;
}

}  // namespace jla
