#pragma once

#include "jla/analysis.hpp"
#include "jla/sim.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace jla {

/// Column names in output order.
std::vector<std::string> trace_columns(Eigen::Index n);

/// One row per sample, 17 significant digits. Angles stay in radians.
void write_trace_csv(std::ostream& out, const SimTrace& trace);
void write_trace_csv(const std::string& path, const SimTrace& trace);

struct RunSummary {
    std::string scenario;
    std::string controller;  // human label
    GainReport gains;
    FeasibilityReport feasibility;
    MetricsReport metrics;
    const SimTrace* trace = nullptr;
};

std::string metrics_json(const RunSummary& s);

/// Sweep table: one row per dt_control, fixed column order.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// %.17g formatting shared by the writers.
std::string format_double(double x);

}  // namespace jla
