#include "jla/trace_io.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace jla {

using nlohmann::json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::string> trace_columns(Eigen::Index n) {
    std::vector<std::string> cols{"t"};
    for (const char* prefix : {"q", "qd", "dq", "dqd", "tau"}) {
        for (Eigen::Index i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
    }
    cols.push_back("V");
    for (const char* prefix : {"margq", "margdq"}) {
        for (Eigen::Index i = 1; i <= n; ++i) cols.push_back(prefix + std::to_string(i));
    }
    return cols;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
    const Eigen::Index n = trace.dof();
    const auto cols = trace_columns(n);
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    std::string line;
    auto put = [&line](double x) {
        line += ',';
        line += format_double(x);
    };
    auto put_vec = [&](const Vec& v) {
        for (Eigen::Index i = 0; i < v.size(); ++i) put(v[i]);
    };
    for (const auto& s : trace.samples) {
        line = format_double(s.t);
        put_vec(s.q);
        put_vec(s.q_d);
        put_vec(s.dq);
        put_vec(s.dq_d);
        put_vec(s.tau);
        put(s.V);
        put_vec(s.margin_q);
        put_vec(s.margin_dq);
        line += '\n';
        out << line;
    }
}

void write_trace_csv(const std::string& path, const SimTrace& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    write_trace_csv(out, trace);
}

namespace {

// NaN and infinities become null so the document stays valid JSON.
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vec(const Vec& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(num(v[i]));
    return a;
}

}  // namespace

std::string metrics_json(const RunSummary& s) {
    const MetricsReport& m = s.metrics;
    json j;
    j["scenario"] = s.scenario;
    j["controller"] = s.controller;
    j["gains"] = {{"pass", s.gains.pass}, {"schur_margin", vec(s.gains.schur_margin)},
                  {"message", s.gains.message}};
    if (!s.gains.pass && s.controller.rfind("limit", 0) == 0) {
        j["gains"]["note"] = "theorem preconditions unmet";
    }
    j["trajectory"] = {{"feasible", s.feasibility.feasible},
                       {"min_position_margin_rad", num(s.feasibility.min_position_margin)},
                       {"min_velocity_margin_rad_s", num(s.feasibility.min_velocity_margin)}};
    j["rms_error_rad"] = vec(m.rms_error);
    j["settling_time_s"] = num(m.settling_time);
    j["settled"] = m.settled;
    j["min_position_margin"] = num(m.min_position_margin);
    j["min_velocity_margin"] = num(m.min_velocity_margin);
    j["position_violations"] = m.position_violations;
    j["velocity_violations"] = m.velocity_violations;
    j["lyapunov_increases"] = m.lyapunov_increases;
    j["max_lyapunov"] = num(m.max_lyapunov);
    j["max_residual"] = num(m.max_residual);
    j["residual_reliable"] = m.residual_reliable;
    j["diverged"] = m.diverged;
    if (s.trace) {
        j["samples"] = s.trace->samples.size();
        j["dt"] = s.trace->dt;
        if (s.trace->diverged) {
            j["divergence_time_s"] = s.trace->divergence_time;
            j["divergence_reason"] = s.trace->divergence_reason;
        }
    }
    return j.dump(2) + "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "dt_control,max_velocity_overshoot,max_position_overshoot,torque_oscillation,"
           "min_velocity_margin,final_error,converged,diverged\n";
    for (const auto& r : rows) {
        out << format_double(r.dt_control) << ',' << format_double(r.max_velocity_overshoot) << ','
            << format_double(r.max_position_overshoot) << ',' << format_double(r.torque_oscillation) << ','
            << format_double(r.min_velocity_margin) << ',' << format_double(r.final_error) << ','
            << (r.converged ? 1 : 0) << ',' << (r.diverged ? 1 : 0) << '\n';
    }
}

}  // namespace jla
