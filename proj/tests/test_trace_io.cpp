#include "fixtures.hpp"

#include "jla/scenario.hpp"
#include "jla/trace_io.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace jla;
using namespace jla::test;

TEST(TraceCsv, HeaderOrder) {
    const auto cols = trace_columns(2);
    const std::vector<std::string> expect = {"t",    "q1",   "q2",   "qd1",   "qd2",   "dq1",   "dq2",
                                             "dqd1", "dqd2", "tau1", "tau2",  "V",     "margq1", "margq2",
                                             "margdq1", "margdq2"};
    EXPECT_EQ(cols, expect);
    EXPECT_EQ(trace_columns(3).size(), 1u + 5u * 3u + 1u + 2u * 3u);
}

TEST(TraceCsv, SeventeenDigitsRoundTrip) {
    for (double x : {0.1, 1.0 / 3.0, -2.718281828459045, 1e-300, 123456789.123456789}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
    EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(TraceCsv, RowsMatchSamples) {
    ScenarioConfig c = preset("two-link-sine");
    c.sim.duration = 0.01;
    const Scenario s = resolve(c);
    const SimTrace tr = simulate(s.model, s.limits, s.controller, s.trajectory, s.sim);
    std::ostringstream out;
    write_trace_csv(out, tr);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line.rfind("t,q1,q2,qd1,qd2,", 0), 0u);
    std::getline(in, line);
    std::vector<double> vals;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    ASSERT_EQ(vals.size(), 16u);
    EXPECT_NEAR(vals[3] / kDeg, 45.0, 1e-12);
    EXPECT_NEAR(vals[4] / kDeg, -85.0, 1e-12);
    long rows = 1;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, static_cast<long>(tr.samples.size()));
}

TEST(MetricsJson, ValidDocumentWithNullForNan) {
    MetricsReport m;
    m.rms_error = v2(0.1, 0.2);
    m.max_residual = std::nan("");
    RunSummary s;
    s.scenario = "x";
    s.controller = "computed-torque baseline (not JLATC)";
    s.metrics = m;
    const auto j = nlohmann::json::parse(metrics_json(s));
    EXPECT_TRUE(j["max_residual"].is_null());
    EXPECT_EQ(j["rms_error_rad"].size(), 2u);
    EXPECT_EQ(j["controller"], "computed-torque baseline (not JLATC)");
}

TEST(MetricsJson, InvalidGainsLabelled) {
    RunSummary s;
    s.controller = "limit-avoiding (eq9)";
    s.gains.pass = false;
    s.metrics.rms_error = Vec::Zero(2);
    const auto j = nlohmann::json::parse(metrics_json(s));
    EXPECT_EQ(j["gains"]["note"], "theorem preconditions unmet");
}
