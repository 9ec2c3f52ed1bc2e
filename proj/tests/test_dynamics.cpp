#include "fixtures.hpp"

#include "jla/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace jla;
using namespace jla::test;

namespace {

// Independent two-link closed form (relative angles, uniform rods).
Mat two_link_mass_closed_form(double q2) {
    const double m = 1, l = 1, lc = 0.5, I = 1.0 / 12.0;
    const double a = I + m * lc * lc + I + m * (l * l + lc * lc);
    const double b = m * l * lc;
    const double d = I + m * lc * lc;
    Mat M(2, 2);
    M << a + 2 * b * std::cos(q2), d + b * std::cos(q2), d + b * std::cos(q2), d;
    return M;
}

}  // namespace

TEST(PlanarChainModel, ValidatesParameters) {
    EXPECT_THROW(PlanarChainModel({}), std::invalid_argument);
    EXPECT_THROW(PlanarChainModel({LinkParams{0.0, 1.0, 0.5, 0.1}}), std::invalid_argument);
    EXPECT_THROW(PlanarChainModel({LinkParams{1.0, -1.0, 0.5, 0.1}}), std::invalid_argument);
    EXPECT_THROW(PlanarChainModel({LinkParams{1.0, 1.0, 1.5, 0.1}}), std::invalid_argument);
    EXPECT_THROW(PlanarChainModel({LinkParams{1.0, 1.0, 0.5, -0.1}}), std::invalid_argument);
    EXPECT_NO_THROW(PlanarChainModel({LinkParams{1.0, 1.0, 0.0, 0.0}}));
}

TEST(Dynamics, TwoLinkMassMatrixAtZero) {
    const Mat M = mass_matrix(Vec::Zero(2), unit_two_link());
    EXPECT_NEAR(M(0, 0), 2.6667, 1e-4);
    EXPECT_NEAR(M(0, 1), 0.8333, 1e-4);
    EXPECT_NEAR(M(1, 0), 0.8333, 1e-4);
    EXPECT_NEAR(M(1, 1), 0.3333, 1e-4);
}

TEST(Dynamics, MassMatrixMatchesClosedForm) {
    for (double q2 : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
        const Mat M = mass_matrix(v2(0.3, q2), unit_two_link());
        EXPECT_LT((M - two_link_mass_closed_form(q2)).cwiseAbs().maxCoeff(), 1e-13) << q2;
    }
}

TEST(Dynamics, GravityAtReferencePoses) {
    const PlanarChainModel m = unit_two_link();
    const Vec g0 = gravity_vector(Vec::Zero(2), m);
    EXPECT_NEAR(g0[0], 19.62, 1e-12);
    EXPECT_NEAR(g0[1], 4.905, 1e-12);
    const Vec g90 = gravity_vector(v2(90 * kDeg, 0), m);
    EXPECT_NEAR(g90[0], 0.0, 1e-12);
    EXPECT_NEAR(g90[1], 0.0, 1e-12);
}

TEST(Dynamics, GravityIsPotentialGradient) {
    const PlanarChainModel m = PlanarChainModel({{1.2, 0.9, 0.3, 0.05}, {0.7, 0.6, 0.4, 0.02}, {0.4, 0.5, 0.2, 0.01}});
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        const Vec q = uniform(rng, 3, -3.0, 3.0);
        const Vec G = gravity_vector(q, m);
        const double h = 1e-6;
        for (int i = 0; i < 3; ++i) {
            Vec qp = q, qm = q;
            qp[i] += h;
            qm[i] -= h;
            const double fd = (energy(qp, Vec::Zero(3), m).potential - energy(qm, Vec::Zero(3), m).potential) / (2 * h);
            EXPECT_NEAR(G[i], fd, 1e-6 * std::max(1.0, std::abs(G[i])));
        }
    }
}

TEST(Dynamics, PotentialZeroWithLinksHorizontal) {
    EXPECT_EQ(energy(Vec::Zero(2), Vec::Zero(2), unit_two_link()).potential, 0.0);
    EXPECT_EQ(energy(v2(0.4, 0.2), Vec::Zero(2), unit_two_link()).kinetic, 0.0);
}

TEST(Dynamics, KineticMatchesQuadraticForm) {
    const PlanarChainModel m = unit_two_link();
    std::mt19937_64 rng(5);
    for (int k = 0; k < 50; ++k) {
        const Vec q = uniform(rng, 2, -3, 3), dq = uniform(rng, 2, -5, 5);
        EXPECT_NEAR(energy(q, dq, m).kinetic, 0.5 * dq.dot(mass_matrix(q, m) * dq), 1e-12);
    }
}

TEST(Dynamics, MassPartialsMatchFiniteDifference) {
    const PlanarChainModel m = PlanarChainModel::uniform_rods(3);
    const Vec q = v3(0.2, -0.7, 1.1);
    const auto dM = mass_matrix_partials(q, m);
    const double h = 1e-6;
    for (int k = 0; k < 3; ++k) {
        Vec qp = q, qm = q;
        qp[k] += h;
        qm[k] -= h;
        const Mat fd = (mass_matrix(qp, m) - mass_matrix(qm, m)) / (2 * h);
        EXPECT_LT((dM[k] - fd).cwiseAbs().maxCoeff(), 1e-8) << k;
    }
}

TEST(Dynamics, CoriolisVanishesAtRest) {
    EXPECT_EQ(coriolis_matrix(v2(0.3, 0.4), Vec::Zero(2), unit_two_link()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dynamics, DimensionMismatchRejected) {
    EXPECT_THROW(dyn_terms(Vec::Zero(3), Vec::Zero(3), unit_two_link()), std::invalid_argument);
    EXPECT_THROW(forward_dynamics(Vec::Zero(2), Vec::Zero(2), Vec::Zero(3), unit_two_link()), std::invalid_argument);
}

TEST(ForwardDynamics, StaticEquilibriumUnderGravityTorque) {
    const PlanarChainModel m = unit_two_link();
    const Vec q = v2(0.4, -1.2);
    const Vec qdd = forward_dynamics(q, Vec::Zero(2), gravity_vector(q, m), m);
    EXPECT_LT(qdd.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ForwardDynamics, SingleLinkPendulum) {
    const PlanarChainModel m = PlanarChainModel::uniform_rods(1);
    const Vec qdd = forward_dynamics(Vec::Zero(1), Vec::Zero(1), Vec::Zero(1), m);
    EXPECT_NEAR(qdd[0], -9.81 * 0.5 / (1.0 / 12.0 + 0.25), 1e-12);
    EXPECT_NEAR(qdd[0], -14.715, 1e-9);
}

TEST(ForwardDynamics, FreeMotionConservesEnergyWithoutGravity) {
    const PlanarChainModel m = unit_two_link().with_gravity(Eigen::Vector2d::Zero());
    JointState s{v2(0.3, -0.5), v2(1.0, -2.0)};
    const double e0 = energy(s.q, s.dq, m).total();
    for (int k = 0; k < 50000; ++k) s = integrate_step(s, Vec::Zero(2), 1e-4, m, Integrator::rk4);
    EXPECT_LT(std::abs(energy(s.q, s.dq, m).total() - e0) / e0, 1e-6);
}

TEST(ForwardDynamics, SwingUnderGravityConservesTotalEnergy) {
    const PlanarChainModel m = unit_two_link();
    JointState s{v2(0.3, -0.5), v2(0.0, 0.0)};
    const double e0 = energy(s.q, s.dq, m).total();
    double scale = 0.0;
    for (int k = 0; k < 50000; ++k) {
        s = integrate_step(s, Vec::Zero(2), 1e-4, m, Integrator::rk4);
        scale = std::max(scale, energy(s.q, s.dq, m).kinetic);
    }
    EXPECT_LT(std::abs(energy(s.q, s.dq, m).total() - e0) / scale, 1e-6);
}
