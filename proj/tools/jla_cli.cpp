#include "jla/analysis.hpp"
#include "jla/parallel.hpp"
#include "jla/scenario.hpp"
#include "jla/trace_io.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace jla;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitConfig = 3;

std::string output_dir(const OutputSection& out) {
    if (const char* env = std::getenv("LIMIT_TORQUE_OUT"); env && *env) return env;
    return out.directory;
}

std::string controller_label(const Scenario& s) {
    if (s.controller.kind == ControllerKind::computed_torque) return "computed-torque baseline (not JLATC)";
    return s.controller.gains.variant == Variant::eq10 ? "limit-avoiding (eq10)" : "limit-avoiding (eq9)";
}

int run_scenario(const ScenarioConfig& cfg) {
    const Scenario s = resolve(cfg);
    const SimTrace trace = simulate(s.model, s.limits, s.controller, s.trajectory, s.sim);

    MetricsOptions opt;
    opt.compute_residual = s.controller.kind == ControllerKind::limit_avoiding;
    opt.window_start = 0.5 * s.sim.duration;
    RunSummary summary;
    summary.scenario = s.name;
    summary.controller = controller_label(s);
    summary.gains = s.controller.gains.k1.size() ? validate_gains(s.controller.gains) : GainReport{};
    summary.feasibility = audit_feasibility(s.trajectory, s.limits, s.sim.duration);
    summary.metrics = trace_metrics(trace, s.limits, s.controller.gains, s.model, opt);
    summary.trace = &trace;

    const fs::path dir = output_dir(s.output);
    fs::create_directories(dir);
    write_trace_csv((dir / s.output.trace).string(), trace);
    {
        std::ofstream out(dir / s.output.metrics);
        if (!out) throw std::runtime_error("cannot write metrics file in " + dir.string());
        out << metrics_json(summary);
    }

    const MetricsReport& m = summary.metrics;
    std::printf("%s: %s, %zu samples\n", s.name.c_str(), summary.controller.c_str(), trace.samples.size());
    std::printf("  violations: position %ld, velocity %ld\n", m.position_violations, m.velocity_violations);
    std::printf("  settling %.3f s%s, lyapunov increases %ld\n", m.settling_time, m.settled ? "" : " (not settled)",
                m.lyapunov_increases);
    std::printf("  wrote %s and %s\n", (dir / s.output.trace).string().c_str(),
                (dir / s.output.metrics).string().c_str());
    if (trace.diverged) {
        std::fprintf(stderr, "diverged at t=%.6g s: %s\n", trace.divergence_time, trace.divergence_reason.c_str());
        return kExitDiverged;
    }
    return kExitOk;
}

std::vector<double> parse_dts(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !(v > 0.0)) {
            throw ConfigError("--dts", "'" + item + "' is not a positive number");
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("--dts", "list must not be empty");
    return out;
}

int sweep_scenario(const ScenarioConfig& cfg, const std::string& dts_text, const std::string& variants,
                   bool serial) {
    const std::vector<double> dts = parse_dts(dts_text);
    std::vector<std::string> which;
    if (variants == "both") {
        which = {"eq9", "eq10"};
    } else {
        which = {variants};
    }
    bool any_diverged = false;
    for (const auto& v : which) {
        ScenarioConfig c = cfg;
        c.controller.variant = v;
        const Scenario s = resolve(c);
        const auto rows = serial ? sweep_timestep(s.model, s.limits, s.controller, s.trajectory, s.sim, dts)
                                 : sweep_timestep_omp(s.model, s.limits, s.controller, s.trajectory, s.sim, dts);
        const fs::path dir = output_dir(s.output);
        fs::create_directories(dir);
        const std::string name = which.size() > 1 ? "sweep_" + v + ".csv" : "sweep.csv";
        std::ofstream out(dir / name);
        if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
        write_sweep_csv(out, rows);
        std::printf("# %s %s\n", s.name.c_str(), controller_label(s).c_str());
        write_sweep_csv(std::cout, rows);
        for (const auto& r : rows) any_diverged = any_diverged || r.diverged;
    }
    return any_diverged ? kExitDiverged : kExitOk;
}

int validate_gains_cmd(const ScenarioConfig& cfg) {
    const auto& c = cfg.controller;
    if (c.k1.empty()) throw ConfigError("controller.k1", "no limit-avoiding gains in this config");
    if (c.k1.size() != c.k2.size() || c.k1.size() != c.k3.size()) {
        throw ConfigError("controller", "k1, k2, k3 must have the same length");
    }
    GainSet g;
    g.k1 = Eigen::Map<const Vec>(c.k1.data(), static_cast<Eigen::Index>(c.k1.size()));
    g.k2 = Eigen::Map<const Vec>(c.k2.data(), static_cast<Eigen::Index>(c.k2.size()));
    g.k3 = Eigen::Map<const Vec>(c.k3.data(), static_cast<Eigen::Index>(c.k3.size()));
    const GainReport rep = validate_gains(g);
    std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
    for (Eigen::Index i = 0; i < rep.schur_margin.size(); ++i) {
        std::printf("  joint %ld: k3 - k2^2/k1 = %.6g\n", static_cast<long>(i + 1), rep.schur_margin[i]);
    }
    if (!rep.message.empty()) std::printf("  %s\n", rep.message.c_str());
    return rep.pass ? kExitOk : kExitCheckFailed;
}

int audit_cmd(const ScenarioConfig& cfg) {
    ScenarioConfig c = cfg;
    c.controller.allow_invalid_gains = true;
    const Scenario s = resolve(c);
    const FeasibilityReport r = audit_feasibility(s.trajectory, s.limits, s.sim.duration);
    constexpr double kToDeg = 180.0 / std::numbers::pi;
    std::printf("%s\n", r.feasible ? "FEASIBLE" : "INFEASIBLE");
    std::printf("  min position margin %.6g deg (joint %ld, t=%.4g s)\n", r.min_position_margin * kToDeg,
                static_cast<long>(r.worst_position_joint + 1), r.worst_position_time);
    std::printf("  min velocity margin %.6g deg/s (joint %ld, t=%.4g s)\n", r.min_velocity_margin * kToDeg,
                static_cast<long>(r.worst_velocity_joint + 1), r.worst_velocity_time);
    return r.feasible ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint-limit-avoiding torque control simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset_name;
    bool emit_config = false;
    std::string dts;
    std::string variants = "eq9";
    bool serial = false;

    auto* run = app.add_subcommand("run", "Simulate a scenario file, write trace CSV and metrics JSON");
    run->add_option("config", config_path, "Scenario JSON")->required();

    auto* pre = app.add_subcommand("preset", "Run a built-in scenario or print its config");
    pre->add_option("name", preset_name, "Preset name")->required();
    pre->add_flag("--emit-config", emit_config, "Print the scenario JSON instead of running it");

    auto* sweep = app.add_subcommand("sweep", "Re-run a scenario for several control periods");
    sweep->add_option("config", config_path, "Scenario JSON")->required();
    sweep->add_option("--dts", dts, "Comma-separated control periods in seconds")->required();
    sweep->add_option("--variant", variants, "eq9, eq10 or both")
        ->check(CLI::IsMember({"eq9", "eq10", "both"}));
    sweep->add_flag("--serial", serial, "Use the single-threaded reference loop");

    auto* vg = app.add_subcommand("validate-gains", "Check positivity and the Schur condition of k1, k2, k3");
    vg->add_option("config", config_path, "Scenario JSON")->required();

    auto* audit = app.add_subcommand("audit", "Check the desired trajectory against the limits");
    audit->add_option("config", config_path, "Scenario JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*pre) {
            const ScenarioConfig cfg = preset(preset_name);
            if (emit_config) {
                std::cout << to_json(cfg);
                return kExitOk;
            }
            return run_scenario(cfg);
        }
        const ScenarioConfig cfg = load_config(config_path);
        if (*run) return run_scenario(cfg);
        if (*sweep) return sweep_scenario(cfg, dts, variants, serial);
        if (*vg) return validate_gains_cmd(cfg);
        if (*audit) return audit_cmd(cfg);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitCheckFailed;
    }
    return kExitOk;
}
