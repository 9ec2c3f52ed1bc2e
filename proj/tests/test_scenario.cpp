#include "fixtures.hpp"

#include "jla/scenario.hpp"
#include "jla/trace_io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace jla;
using namespace jla::test;

namespace {

std::string path_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<accepted>";
}

std::string resolve_path_of(const ScenarioConfig& c) {
    try {
        resolve(c);
    } catch (const ConfigError& e) {
        return e.path();
    }
    return "<accepted>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
    const auto pos = s.find(from);
    EXPECT_NE(pos, std::string::npos) << from;
    if (pos != std::string::npos) s.replace(pos, from.size(), to);
    return s;
}

}  // namespace

TEST(Preset, AllNamesResolve) {
    for (const auto& name : preset_names()) {
        const Scenario s = resolve(preset(name));
        EXPECT_EQ(s.name, name);
        EXPECT_EQ(s.limits.size(), s.model.dof());
    }
}

TEST(Preset, UnknownNameListsOptions) {
    try {
        preset("three-link");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("two-link-constant"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("icub-leg-disturbance"), std::string::npos);
    }
}

TEST(Preset, TwoLinkConstantValues) {
    const Scenario s = resolve(preset("two-link-constant"));
    EXPECT_NEAR(s.limits.q_min()[0] / kDeg, -45, 1e-12);
    EXPECT_NEAR(s.limits.q_max()[1] / kDeg, 90, 1e-12);
    EXPECT_NEAR(s.limits.dq_max()[1] / kDeg, 180, 1e-12);
    EXPECT_NEAR(s.limits.dq_min()[0] / kDeg, -90, 1e-12);
    EXPECT_NEAR(eval(s.trajectory, 3.0).q[0] / kDeg, 87.5, 1e-12);
    EXPECT_NEAR(eval(s.trajectory, 3.0).q[1] / kDeg, -87.5, 1e-12);
    EXPECT_EQ(s.sim.initial.q.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_TRUE(validate_gains(s.controller.gains).pass);
}

TEST(Preset, IcubValues) {
    const Scenario c = resolve(preset("icub-leg-constant"));
    EXPECT_NEAR(c.limits.q_min()[2] / kDeg, -120, 1e-12);
    EXPECT_NEAR(c.limits.dq_max()[0] / kDeg, 45, 1e-12);
    EXPECT_NEAR(eval(c.trajectory, 0.0).q[2] / kDeg, -90, 1e-12);
    const Scenario s = resolve(preset("icub-leg-sine"));
    EXPECT_NEAR(s.trajectory.amplitude[0] / kDeg, 33.5, 1e-12);
    EXPECT_NEAR(s.trajectory.omega[1], 1.6, 1e-15);
    EXPECT_NEAR(s.trajectory.phase[2], 2 * std::numbers::pi / 3, 1e-15);
    EXPECT_NEAR(s.trajectory.offset[2] / kDeg, -60, 1e-12);
    EXPECT_EQ(resolve(preset("icub-leg-disturbance")).sim.disturbances.size(), 1u);
}

TEST(Config, EmitThenParseRoundTrips) {
    for (const auto& name : preset_names()) {
        const ScenarioConfig c = preset(name);
        const std::string text = to_json(c);
        EXPECT_EQ(to_json(parse_config(text)), text) << name;
    }
}

TEST(Config, RoundTripReproducesRun) {
    ScenarioConfig c = preset("two-link-sine");
    c.sim.duration = 1.0;
    const Scenario a = resolve(c);
    const Scenario b = resolve(parse_config(to_json(c)));
    std::ostringstream ta, tb;
    write_trace_csv(ta, simulate(a.model, a.limits, a.controller, a.trajectory, a.sim));
    write_trace_csv(tb, simulate(b.model, b.limits, b.controller, b.trajectory, b.sim));
    EXPECT_EQ(ta.str(), tb.str());
}

TEST(Config, UnknownKeysRejectedWithPath) {
    const std::string base = to_json(preset("two-link-constant"));
    EXPECT_EQ(path_of(replace(base, "\"name\":", "\"nmae\": 1, \"name\":")), "nmae");
    EXPECT_EQ(path_of(replace(base, "\"dt_physics\":", "\"dt_phisics\": 1, \"dt_physics\":")), "sim.dt_phisics");
    EXPECT_EQ(path_of(replace(base, "\"mass\":", "\"colour\": 1, \"mass\":")), "robot.links[0].colour");
}

TEST(Config, TypeAndValueErrorsCarryPath) {
    const std::string base = to_json(preset("two-link-constant"));
    EXPECT_EQ(path_of(replace(base, "\"variant\": \"eq9\"", "\"variant\": \"eq11\"")), "controller.variant");
    EXPECT_EQ(path_of(replace(base, "\"duration\": 10.0", "\"duration\": \"long\"")), "sim.duration");
    EXPECT_EQ(path_of(replace(base, "\"target_deg\": [", "\"target_deg\": [\"x\", ")), "trajectory.target_deg[0]");
    EXPECT_EQ(path_of("{not json"), "");
}

TEST(Config, MissingFieldReported) {
    const std::string base = to_json(preset("two-link-constant"));
    EXPECT_EQ(path_of(replace(base, "\"q_min_deg\"", "\"q_min_deg_typo\"")), "limits.q_min_deg");
}

TEST(Config, ResolveChecksCrossFieldRules) {
    ScenarioConfig c = preset("two-link-constant");
    c.sim.dt_control = 5e-4;
    EXPECT_EQ(resolve_path_of(c), "sim.dt_control");

    c = preset("two-link-constant");
    c.trajectory.target_deg = {1.0};
    EXPECT_EQ(resolve_path_of(c), "trajectory.target_deg");

    c = preset("two-link-constant");
    c.limits.q_max_deg[0] = -50.0;
    EXPECT_EQ(resolve_path_of(c), "limits");

    c = preset("two-link-constant");
    c.controller.k1 = {22, 505};
    c.controller.k2 = {20, 50};
    c.controller.k3 = {10, 5};
    EXPECT_EQ(resolve_path_of(c), "controller");
    c.controller.allow_invalid_gains = true;
    EXPECT_EQ(resolve_path_of(c), "<accepted>");
}

TEST(Config, DegreesConvertedOnce) {
    ScenarioConfig c = preset("two-link-constant");
    c.sim.initial_dq_deg_s = {10.0, -20.0};
    const Scenario s = resolve(c);
    EXPECT_NEAR(s.sim.initial.dq[0], 10.0 * kDeg, 1e-15);
    EXPECT_NEAR(s.sim.initial.dq[1], -20.0 * kDeg, 1e-15);
    const ScenarioConfig back = parse_config(to_json(c));
    EXPECT_EQ(back.sim.initial_dq_deg_s, c.sim.initial_dq_deg_s);
}
