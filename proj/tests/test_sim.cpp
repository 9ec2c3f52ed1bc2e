#include "fixtures.hpp"

#include "jla/analysis.hpp"
#include "jla/sim.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace jla;
using namespace jla::test;

namespace {

ControllerConfig preset_controller() {
    ControllerConfig c;
    c.gains = {v2(200, 200), v2(15, 15), v2(5, 5), 20.0, Variant::eq9};
    return c;
}

SimConfig base_sim(double dt = 1e-3, double duration = 10.0) {
    SimConfig s;
    s.dt_physics = dt;
    s.dt_control = dt;
    s.duration = duration;
    s.initial = {Vec::Zero(2), Vec::Zero(2)};
    return s;
}

const TrajectorySpec kTarget = TrajectorySpec::constant(v2(87.5, -87.5) * kDeg);

}  // namespace

TEST(SimConfig, ValidationNamesFields) {
    SimConfig s = base_sim();
    s.dt_control = 5e-4;
    try {
        validate(s, 2);
        FAIL();
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("sim.dt_control"), std::string::npos);
    }
    s = base_sim();
    s.dt_control = 1.5e-3;
    EXPECT_THROW(validate(s, 2), std::invalid_argument);
    s = base_sim();
    s.duration = 0.0;
    EXPECT_THROW(validate(s, 2), std::invalid_argument);
    s = base_sim();
    s.dt_physics = -1.0;
    EXPECT_THROW(validate(s, 2), std::invalid_argument);
    s = base_sim();
    s.disturbances.push_back({1.0, 2.0, Vec::Zero(3)});
    EXPECT_THROW(validate(s, 2), std::invalid_argument);
    EXPECT_NO_THROW(validate(base_sim(), 2));
}

TEST(Simulate, EquilibriumStaysPut) {
    const PlanarChainModel m = unit_two_link();
    const Vec q = v2(30, -40) * kDeg;
    SimConfig s = base_sim(1e-3, 2.0);
    s.initial = {q, Vec::Zero(2)};
    const SimTrace tr = simulate(m, two_link_limits(), preset_controller(), TrajectorySpec::constant(q), s);
    ASSERT_FALSE(tr.diverged);
    for (const auto& smp : tr.samples) {
        EXPECT_LT((smp.q - q).cwiseAbs().maxCoeff(), 1e-9);
        EXPECT_LT((smp.tau - gravity_vector(q, m)).cwiseAbs().maxCoeff(), 1e-6);
    }
}

TEST(Simulate, ConstantPresetConvergesInsideBox) {
    const LimitSet lim = two_link_limits();
    const SimTrace tr = simulate(unit_two_link(), lim, preset_controller(), kTarget, base_sim());
    ASSERT_FALSE(tr.diverged);
    EXPECT_EQ(tr.samples.size(), 10001u);
    for (const auto& smp : tr.samples) {
        ASSERT_TRUE(lim.position_inside(smp.q)) << smp.t;
        ASSERT_TRUE(lim.velocity_inside(smp.dq)) << smp.t;
    }
    const auto& last = tr.samples.back();
    EXPECT_LT((last.q - last.q_d).cwiseAbs().maxCoeff(), 0.5 * kDeg);
}

TEST(Simulate, ZeroOrderHoldKeepsTorqueBetweenUpdates) {
    SimConfig s = base_sim(1e-3, 0.2);
    s.dt_control = 1e-2;
    const SimTrace tr = simulate(unit_two_link(), two_link_limits(), preset_controller(), kTarget, s);
    for (std::size_t k = 0; k < tr.samples.size(); ++k) {
        if (k % 10 != 0) EXPECT_EQ(tr.samples[k].tau, tr.samples[k - 1].tau) << k;
    }
    EXPECT_NE(tr.samples[10].tau, tr.samples[9].tau);
}

TEST(Simulate, DisturbanceAddedOnHalfOpenWindow) {
    const Vec q = v2(30, -40) * kDeg;
    SimConfig s = base_sim(1e-3, 1.0);
    s.initial = {q, Vec::Zero(2)};
    s.disturbances.push_back({0.5, 0.6, v2(1.0, -2.0)});
    ControllerConfig c = preset_controller();
    const SimTrace tr = simulate(unit_two_link(), two_link_limits(), c, TrajectorySpec::constant(q), s);
    const Vec G = gravity_vector(q, unit_two_link());
    EXPECT_LT((tr.samples[499].tau - G).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_NEAR(tr.samples[500].tau[1] - G[1], -2.0, 1e-6);
    EXPECT_GT((tr.samples[600].tau - tr.samples[599].tau).cwiseAbs().maxCoeff(), 0.5);
}

TEST(Simulate, DivergenceFlaggedNotThrown) {
    ControllerConfig c = preset_controller();
    c.kind = ControllerKind::computed_torque;
    c.pd = {v2(1e9, 1e9), v2(1e5, 1e5)};
    SimConfig s = base_sim(1e-2, 5.0);
    const SimTrace tr = simulate(unit_two_link(), two_link_limits(), c, kTarget, s);
    EXPECT_TRUE(tr.diverged);
    EXPECT_LT(tr.samples.size(), 501u);
    EXPECT_FALSE(tr.divergence_reason.empty());
}

TEST(Simulate, Deterministic) {
    const SimTrace a = simulate(unit_two_link(), two_link_limits(), preset_controller(), kTarget, base_sim(1e-3, 2.0));
    const SimTrace b = simulate(unit_two_link(), two_link_limits(), preset_controller(), kTarget, base_sim(1e-3, 2.0));
    ASSERT_EQ(a.samples.size(), b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) {
        ASSERT_EQ(a.samples[k].q, b.samples[k].q);
        ASSERT_EQ(a.samples[k].tau, b.samples[k].tau);
    }
}

TEST(Integrator, Rk4PendulumAgainstFineReference) {
    const PlanarChainModel m = PlanarChainModel::uniform_rods(1);
    const JointState s0{Vec::Constant(1, 0.3), Vec::Zero(1)};
    auto run = [&](double dt, Integrator method) {
        JointState s = s0;
        const long steps = std::lround(5.0 / dt);
        for (long k = 0; k < steps; ++k) s = integrate_step(s, Vec::Zero(1), dt, m, method);
        return s.q[0];
    };
    const double ref = run(1e-6, Integrator::rk4);
    EXPECT_LT(std::abs(run(1e-3, Integrator::rk4) - ref), 1e-6);
    // Heun is second order: visibly worse at the same step, still close.
    const double heun = std::abs(run(1e-3, Integrator::heun) - ref);
    EXPECT_LT(heun, 1e-3);
}

TEST(Sweep, IdenticalEntriesGiveIdenticalRows) {
    SimConfig s = base_sim(1e-3, 2.0);
    const auto rows = sweep_timestep(unit_two_link(), two_link_limits(), preset_controller(), kTarget, s,
                                     {2e-3, 2e-3, 2e-3});
    ASSERT_EQ(rows.size(), 3u);
    for (const auto& r : rows) {
        EXPECT_EQ(r.max_velocity_overshoot, rows[0].max_velocity_overshoot);
        EXPECT_EQ(r.torque_oscillation, rows[0].torque_oscillation);
        EXPECT_EQ(r.final_error, rows[0].final_error);
    }
    EXPECT_THROW(sweep_timestep(unit_two_link(), two_link_limits(), preset_controller(), kTarget, s, {}),
                 std::invalid_argument);
}

TEST(Sweep, SingletonMatchesStandaloneRun) {
    SimConfig s = base_sim(1e-3, 3.0);
    const auto rows = sweep_timestep(unit_two_link(), two_link_limits(), preset_controller(), kTarget, s, {1e-3});
    const SimTrace tr = simulate(unit_two_link(), two_link_limits(), preset_controller(), kTarget, s);
    const SweepRow direct = summarize_sweep_run(1e-3, tr, two_link_limits(), kDeg);
    EXPECT_EQ(rows[0].final_error, direct.final_error);
    EXPECT_EQ(rows[0].min_velocity_margin, direct.min_velocity_margin);
    EXPECT_EQ(rows[0].torque_oscillation, direct.torque_oscillation);
}

TEST(Sweep, CoarseStepsReportedNotThrown) {
    SimConfig s = base_sim(1e-3, 10.0);
    for (Variant v : {Variant::eq9, Variant::eq10}) {
        ControllerConfig c = preset_controller();
        c.gains.variant = v;
        const auto rows = sweep_timestep(unit_two_link(), two_link_limits(), c, kTarget, s, {1e-2, 1e-3});
        ASSERT_EQ(rows.size(), 2u);
        EXPECT_EQ(rows[0].dt_control, 1e-2);
        EXPECT_TRUE(rows[1].converged);
        EXPECT_EQ(rows[1].max_velocity_overshoot, 0.0);
    }
}
