#pragma once

#include "jla/controller.hpp"
#include "jla/dynamics.hpp"
#include "jla/sim.hpp"
#include "jla/trajectory.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace jla {

/// Config problem; the message starts with the dotted field path.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Boundary representation. Angles in degrees, rates in deg/s, exactly as
// written in the file; to_json(from_json(x)) reproduces x.

struct RobotSection {
    std::vector<LinkParams> links;
    double gravity_x = 0.0;
    double gravity_y = -9.81;
};

struct LimitsSection {
    std::vector<double> q_min_deg, q_max_deg;
    std::vector<double> dq_min_deg_s, dq_max_deg_s;
};

struct ControllerSection {
    std::string type = "limit_avoiding";  // or "computed_torque"
    std::string variant = "eq9";
    std::vector<double> k1, k2, k3;
    double p = kDefaultRegularizationP;
    double epsilon_sat = kDefaultEpsilonSat;
    bool allow_invalid_gains = false;
    std::vector<double> kp, kd;
};

struct TrajectorySection {
    std::string kind = "constant";  // or "sinusoid"
    std::vector<double> target_deg;
    std::vector<double> amplitude_deg, omega_rad_s, phase_rad, offset_deg;
};

struct DisturbanceSection {
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<double> torque;  // N m
};

struct SimSection {
    double dt_physics = 1e-3;
    double dt_control = 1e-3;
    double duration = 10.0;
    std::string integrator = "rk4";
    std::vector<double> initial_q_deg, initial_dq_deg_s;
};

struct OutputSection {
    std::string directory = "out";
    std::string trace = "trace.csv";
    std::string metrics = "metrics.json";
};

struct ScenarioConfig {
    std::string name;
    RobotSection robot;
    LimitsSection limits;
    ControllerSection controller;
    TrajectorySection trajectory;
    SimSection sim;
    std::vector<DisturbanceSection> disturbances;
    OutputSection output;
};

/// Everything in radians, ready for the library.
struct Scenario {
    std::string name;
    PlanarChainModel model;
    LimitSet limits;
    ControllerConfig controller;
    TrajectorySpec trajectory;
    SimConfig sim;
    OutputSection output;
};

/// Strict parse: unknown keys, wrong types and missing fields raise ConfigError.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);
std::string to_json(const ScenarioConfig& cfg);

/// Unit conversion and cross-field checks. Throws ConfigError.
Scenario resolve(const ScenarioConfig& cfg);

const std::vector<std::string>& preset_names();
/// Throws ConfigError listing the available names.
ScenarioConfig preset(const std::string& name);

/// Peak |tau| per joint of the undisturbed run at the preset's settings.
Vec peak_nominal_torque(const Scenario& s);

}  // namespace jla
