#include "jla/scenario.hpp"

#include "json.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>

namespace jla {

using nlohmann::json;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

// Walks one JSON object, remembering which keys were read so leftovers can
// be reported as unknown.
class ObjectReader {
public:
    ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_, "expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& at(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        if (it == j_.end()) throw ConfigError(join(path_, key), "missing required field");
        return *it;
    }

    std::string path(const std::string& key) const { return join(path_, key); }

    double number(const std::string& key) {
        const json& v = at(key);
        if (!v.is_number()) throw ConfigError(path(key), "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(path(key), "must be finite");
        return x;
    }
    void number(const std::string& key, double& out) {
        if (has(key)) out = number(key);
    }

    bool boolean(const std::string& key) {
        const json& v = at(key);
        if (!v.is_boolean()) throw ConfigError(path(key), "expected true or false");
        return v.get<bool>();
    }
    void boolean(const std::string& key, bool& out) {
        if (has(key)) out = boolean(key);
    }

    std::string text(const std::string& key) {
        const json& v = at(key);
        if (!v.is_string()) throw ConfigError(path(key), "expected a string");
        return v.get<std::string>();
    }
    void text(const std::string& key, std::string& out) {
        if (has(key)) out = text(key);
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = at(key);
        if (!v.is_array()) throw ConfigError(path(key), "expected an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            const std::string p = path(key) + "[" + std::to_string(i) + "]";
            if (!v[i].is_number()) throw ConfigError(p, "expected a number");
            const double x = v[i].get<double>();
            if (!std::isfinite(x)) throw ConfigError(p, "must be finite");
            out.push_back(x);
        }
        return out;
    }
    void numbers(const std::string& key, std::vector<double>& out) {
        if (has(key)) out = numbers(key);
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw ConfigError(join(path_, it.key()), "unknown key");
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

std::string one_of(const std::string& path, const std::string& value,
                   std::initializer_list<const char*> allowed) {
    std::string list;
    for (const char* a : allowed) {
        if (value == a) return value;
        list += list.empty() ? a : std::string(", ") + a;
    }
    throw ConfigError(path, "'" + value + "' is not one of: " + list);
}

RobotSection parse_robot(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    RobotSection out;
    const json& links = r.at("links");
    if (!links.is_array() || links.empty()) throw ConfigError(r.path("links"), "expected a non-empty array");
    for (std::size_t i = 0; i < links.size(); ++i) {
        ObjectReader l(links[i], r.path("links") + "[" + std::to_string(i) + "]");
        LinkParams p;
        p.mass = l.number("mass");
        p.length = l.number("length");
        p.com_offset = l.number("com_offset");
        p.inertia_com = l.number("inertia_com");
        l.finish();
        out.links.push_back(p);
    }
    if (r.has("gravity")) {
        const auto g = r.numbers("gravity");
        if (g.size() != 2) throw ConfigError(r.path("gravity"), "expected [gx, gy]");
        out.gravity_x = g[0];
        out.gravity_y = g[1];
    }
    r.finish();
    return out;
}

LimitsSection parse_limits(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    LimitsSection out;
    out.q_min_deg = r.numbers("q_min_deg");
    out.q_max_deg = r.numbers("q_max_deg");
    out.dq_min_deg_s = r.numbers("dq_min_deg_s");
    out.dq_max_deg_s = r.numbers("dq_max_deg_s");
    r.finish();
    return out;
}

ControllerSection parse_controller(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    ControllerSection out;
    r.text("type", out.type);
    one_of(r.path("type"), out.type, {"limit_avoiding", "computed_torque"});
    r.text("variant", out.variant);
    one_of(r.path("variant"), out.variant, {"eq9", "eq10"});
    if (out.type == "limit_avoiding") {
        out.k1 = r.numbers("k1");
        out.k2 = r.numbers("k2");
        out.k3 = r.numbers("k3");
    } else {
        r.numbers("k1", out.k1);
        r.numbers("k2", out.k2);
        r.numbers("k3", out.k3);
    }
    r.number("p", out.p);
    r.number("epsilon_sat", out.epsilon_sat);
    r.boolean("allow_invalid_gains", out.allow_invalid_gains);
    if (out.type == "computed_torque") {
        out.kp = r.numbers("kp");
        out.kd = r.numbers("kd");
    } else {
        r.numbers("kp", out.kp);
        r.numbers("kd", out.kd);
    }
    r.finish();
    return out;
}

TrajectorySection parse_trajectory(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    TrajectorySection out;
    out.kind = one_of(r.path("kind"), r.text("kind"), {"constant", "sinusoid"});
    if (out.kind == "constant") {
        out.target_deg = r.numbers("target_deg");
    } else {
        out.amplitude_deg = r.numbers("amplitude_deg");
        out.omega_rad_s = r.numbers("omega_rad_s");
        out.phase_rad = r.numbers("phase_rad");
        out.offset_deg = r.numbers("offset_deg");
    }
    r.finish();
    return out;
}

SimSection parse_sim(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    SimSection out;
    out.dt_physics = r.number("dt_physics");
    out.dt_control = r.number("dt_control");
    out.duration = r.number("duration");
    r.text("integrator", out.integrator);
    one_of(r.path("integrator"), out.integrator, {"rk4", "heun"});
    out.initial_q_deg = r.numbers("initial_q_deg");
    r.numbers("initial_dq_deg_s", out.initial_dq_deg_s);
    r.finish();
    return out;
}

std::vector<DisturbanceSection> parse_disturbances(const json& j, const std::string& path) {
    if (!j.is_array()) throw ConfigError(path, "expected an array");
    std::vector<DisturbanceSection> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        ObjectReader r(j[i], path + "[" + std::to_string(i) + "]");
        DisturbanceSection d;
        d.t_start = r.number("t_start");
        d.t_end = r.number("t_end");
        d.torque = r.numbers("torque");
        r.finish();
        out.push_back(d);
    }
    return out;
}

OutputSection parse_output(const json& j, const std::string& path) {
    ObjectReader r(j, path);
    OutputSection out;
    r.text("directory", out.directory);
    r.text("trace", out.trace);
    r.text("metrics", out.metrics);
    r.finish();
    return out;
}

Vec to_vec(const std::vector<double>& v, double scale = 1.0) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[i] * scale;
    return out;
}

void expect_size(const std::vector<double>& v, std::size_t n, const std::string& path) {
    if (v.size() != n) {
        throw ConfigError(path, "expected " + std::to_string(n) + " entries (one per joint), got " +
                                    std::to_string(v.size()));
    }
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    ObjectReader r(j, "");
    ScenarioConfig cfg;
    r.text("name", cfg.name);
    cfg.robot = parse_robot(r.at("robot"), "robot");
    cfg.limits = parse_limits(r.at("limits"), "limits");
    cfg.controller = parse_controller(r.at("controller"), "controller");
    cfg.trajectory = parse_trajectory(r.at("trajectory"), "trajectory");
    cfg.sim = parse_sim(r.at("sim"), "sim");
    if (r.has("disturbances")) cfg.disturbances = parse_disturbances(r.at("disturbances"), "disturbances");
    if (r.has("output")) cfg.output = parse_output(r.at("output"), "output");
    r.finish();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string to_json(const ScenarioConfig& cfg) {
    json links = json::array();
    for (const auto& l : cfg.robot.links) {
        links.push_back({{"mass", l.mass}, {"length", l.length}, {"com_offset", l.com_offset},
                         {"inertia_com", l.inertia_com}});
    }
    json controller = {{"type", cfg.controller.type},
                       {"variant", cfg.controller.variant},
                       {"p", cfg.controller.p},
                       {"epsilon_sat", cfg.controller.epsilon_sat},
                       {"allow_invalid_gains", cfg.controller.allow_invalid_gains}};
    if (!cfg.controller.k1.empty()) controller["k1"] = cfg.controller.k1;
    if (!cfg.controller.k2.empty()) controller["k2"] = cfg.controller.k2;
    if (!cfg.controller.k3.empty()) controller["k3"] = cfg.controller.k3;
    if (!cfg.controller.kp.empty()) controller["kp"] = cfg.controller.kp;
    if (!cfg.controller.kd.empty()) controller["kd"] = cfg.controller.kd;

    json trajectory = {{"kind", cfg.trajectory.kind}};
    if (cfg.trajectory.kind == "constant") {
        trajectory["target_deg"] = cfg.trajectory.target_deg;
    } else {
        trajectory["amplitude_deg"] = cfg.trajectory.amplitude_deg;
        trajectory["omega_rad_s"] = cfg.trajectory.omega_rad_s;
        trajectory["phase_rad"] = cfg.trajectory.phase_rad;
        trajectory["offset_deg"] = cfg.trajectory.offset_deg;
    }

    json disturbances = json::array();
    for (const auto& d : cfg.disturbances) {
        disturbances.push_back({{"t_start", d.t_start}, {"t_end", d.t_end}, {"torque", d.torque}});
    }

    json j = {
        {"name", cfg.name},
        {"robot", {{"links", links}, {"gravity", {cfg.robot.gravity_x, cfg.robot.gravity_y}}}},
        {"limits",
         {{"q_min_deg", cfg.limits.q_min_deg},
          {"q_max_deg", cfg.limits.q_max_deg},
          {"dq_min_deg_s", cfg.limits.dq_min_deg_s},
          {"dq_max_deg_s", cfg.limits.dq_max_deg_s}}},
        {"controller", controller},
        {"trajectory", trajectory},
        {"sim",
         {{"dt_physics", cfg.sim.dt_physics},
          {"dt_control", cfg.sim.dt_control},
          {"duration", cfg.sim.duration},
          {"integrator", cfg.sim.integrator},
          {"initial_q_deg", cfg.sim.initial_q_deg},
          {"initial_dq_deg_s", cfg.sim.initial_dq_deg_s}}},
        {"disturbances", disturbances},
        {"output",
         {{"directory", cfg.output.directory}, {"trace", cfg.output.trace}, {"metrics", cfg.output.metrics}}},
    };
    return j.dump(2) + "\n";
}

Scenario resolve(const ScenarioConfig& cfg) {
    const std::size_t n = cfg.robot.links.size();
    if (n == 0) throw ConfigError("robot.links", "at least one link is required");

    std::optional<PlanarChainModel> model;
    try {
        model.emplace(cfg.robot.links, Eigen::Vector2d(cfg.robot.gravity_x, cfg.robot.gravity_y));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("robot", e.what());
    }

    expect_size(cfg.limits.q_min_deg, n, "limits.q_min_deg");
    expect_size(cfg.limits.q_max_deg, n, "limits.q_max_deg");
    expect_size(cfg.limits.dq_min_deg_s, n, "limits.dq_min_deg_s");
    expect_size(cfg.limits.dq_max_deg_s, n, "limits.dq_max_deg_s");
    std::optional<LimitSet> limits;
    try {
        limits.emplace(to_vec(cfg.limits.q_min_deg, kDeg), to_vec(cfg.limits.q_max_deg, kDeg),
                       to_vec(cfg.limits.dq_min_deg_s, kDeg), to_vec(cfg.limits.dq_max_deg_s, kDeg));
    } catch (const std::invalid_argument& e) {
        throw ConfigError("limits", e.what());
    }

    ControllerConfig ctrl;
    const auto& c = cfg.controller;
    ctrl.kind = c.type == "computed_torque" ? ControllerKind::computed_torque : ControllerKind::limit_avoiding;
    ctrl.gains.variant = c.variant == "eq10" ? Variant::eq10 : Variant::eq9;
    ctrl.gains.p = c.p;
    ctrl.eps_sat = c.epsilon_sat;
    ctrl.allow_invalid_gains = c.allow_invalid_gains;
    if (!(c.p > 0.0)) throw ConfigError("controller.p", "must be positive");
    if (!(c.epsilon_sat > 0.0 && c.epsilon_sat < 1.0)) {
        throw ConfigError("controller.epsilon_sat", "must lie in (0, 1)");
    }
    const bool any_k = !c.k1.empty() || !c.k2.empty() || !c.k3.empty();
    if (ctrl.kind == ControllerKind::limit_avoiding || any_k) {
        expect_size(c.k1, n, "controller.k1");
        expect_size(c.k2, n, "controller.k2");
        expect_size(c.k3, n, "controller.k3");
        ctrl.gains.k1 = to_vec(c.k1);
        ctrl.gains.k2 = to_vec(c.k2);
        ctrl.gains.k3 = to_vec(c.k3);
        const GainReport rep = validate_gains(ctrl.gains);
        if (!rep.positive) throw ConfigError("controller", rep.message);
        if (ctrl.kind == ControllerKind::limit_avoiding && !rep.pass && !c.allow_invalid_gains) {
            throw ConfigError("controller", rep.message + " (set controller.allow_invalid_gains to run anyway)");
        }
    }
    if (ctrl.kind == ControllerKind::computed_torque) {
        expect_size(c.kp, n, "controller.kp");
        expect_size(c.kd, n, "controller.kd");
        ctrl.pd.kp = to_vec(c.kp);
        ctrl.pd.kd = to_vec(c.kd);
    }

    TrajectorySpec spec;
    const auto& t = cfg.trajectory;
    if (t.kind == "constant") {
        expect_size(t.target_deg, n, "trajectory.target_deg");
        spec = TrajectorySpec::constant(to_vec(t.target_deg, kDeg));
    } else {
        expect_size(t.amplitude_deg, n, "trajectory.amplitude_deg");
        expect_size(t.omega_rad_s, n, "trajectory.omega_rad_s");
        expect_size(t.phase_rad, n, "trajectory.phase_rad");
        expect_size(t.offset_deg, n, "trajectory.offset_deg");
        spec = TrajectorySpec::sinusoid(to_vec(t.amplitude_deg, kDeg), to_vec(t.omega_rad_s),
                                        to_vec(t.phase_rad), to_vec(t.offset_deg, kDeg));
    }

    SimConfig sim;
    sim.dt_physics = cfg.sim.dt_physics;
    sim.dt_control = cfg.sim.dt_control;
    sim.duration = cfg.sim.duration;
    sim.integrator = cfg.sim.integrator == "heun" ? Integrator::heun : Integrator::rk4;
    expect_size(cfg.sim.initial_q_deg, n, "sim.initial_q_deg");
    sim.initial.q = to_vec(cfg.sim.initial_q_deg, kDeg);
    if (cfg.sim.initial_dq_deg_s.empty()) {
        sim.initial.dq = Vec::Zero(static_cast<Eigen::Index>(n));
    } else {
        expect_size(cfg.sim.initial_dq_deg_s, n, "sim.initial_dq_deg_s");
        sim.initial.dq = to_vec(cfg.sim.initial_dq_deg_s, kDeg);
    }
    for (std::size_t i = 0; i < cfg.disturbances.size(); ++i) {
        const auto& d = cfg.disturbances[i];
        expect_size(d.torque, n, "disturbances[" + std::to_string(i) + "].torque");
        sim.disturbances.push_back({d.t_start, d.t_end, to_vec(d.torque)});
    }
    try {
        validate(sim, static_cast<Eigen::Index>(n));
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        const auto cut = msg.find(' ');
        if (cut == std::string::npos) throw ConfigError("sim", msg);
        throw ConfigError(msg.substr(0, cut), msg.substr(cut + 1));
    }
    if (cfg.output.trace.empty() || cfg.output.metrics.empty()) {
        throw ConfigError("output", "file names must not be empty");
    }

    return Scenario{cfg.name, *model, *limits, ctrl, spec, sim, cfg.output};
}

namespace {

ScenarioConfig two_link_base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    c.robot.links = {LinkParams{}, LinkParams{}};
    c.limits.q_min_deg = {-45.0, -90.0};
    c.limits.q_max_deg = {90.0, 90.0};
    c.limits.dq_min_deg_s = {-90.0, -90.0};
    c.limits.dq_max_deg_s = {90.0, 180.0};
    c.controller.k1 = {200.0, 200.0};
    c.controller.k2 = {15.0, 15.0};
    c.controller.k3 = {5.0, 5.0};
    c.trajectory.kind = "constant";
    c.trajectory.target_deg = {87.5, -87.5};
    c.sim.dt_physics = 1e-3;
    c.sim.dt_control = 1e-3;
    c.sim.duration = 10.0;
    c.sim.initial_q_deg = {0.0, 0.0};
    c.sim.initial_dq_deg_s = {0.0, 0.0};
    c.output.directory = "out/" + name;
    return c;
}

// Planar stand-in for the leg: hip pitch, hip roll, knee. Rough segment
// masses and lengths; the real inertial data is not available.
ScenarioConfig icub_base(const std::string& name) {
    ScenarioConfig c;
    c.name = name;
    auto rod = [](double m, double l) { return LinkParams{m, l, 0.5 * l, m * l * l / 12.0}; };
    c.robot.links = {rod(1.0, 0.08), rod(3.0, 0.22), rod(1.5, 0.21)};
    c.limits.q_min_deg = {-45.0, -20.0, -120.0};
    c.limits.q_max_deg = {120.0, 90.0, 0.0};
    c.limits.dq_min_deg_s = {-45.0, -90.0, -90.0};
    c.limits.dq_max_deg_s = {45.0, 90.0, 90.0};
    c.controller.k1 = {2000.0, 2000.0, 2000.0};
    c.controller.k2 = {310.0, 310.0, 310.0};
    c.controller.k3 = {50.0, 50.0, 50.0};
    // eq9 loses the velocity box at these gains for any practical step
    c.controller.variant = "eq10";
    c.trajectory.kind = "constant";
    c.trajectory.target_deg = {60.0, 60.0, -90.0};
    c.sim.dt_physics = 1e-3;
    c.sim.dt_control = 1e-3;
    c.sim.duration = 10.0;
    c.sim.initial_q_deg = {0.0, 0.0, 0.0};
    c.sim.initial_dq_deg_s = {0.0, 0.0, 0.0};
    c.output.directory = "out/" + name;
    return c;
}

}  // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"two-link-constant", "two-link-sine",
                                                   "two-link-baseline", "icub-leg-constant",
                                                   "icub-leg-sine",     "icub-leg-disturbance"};
    return names;
}

ScenarioConfig preset(const std::string& name) {
    if (name == "two-link-constant") return two_link_base(name);
    if (name == "two-link-sine") {
        ScenarioConfig c = two_link_base(name);
        c.controller.k1 = {5.0, 5.0};
        c.controller.k2 = {3.0, 3.0};
        c.controller.k3 = {5.0, 5.0};
        c.controller.p = 10.0;
        c.trajectory.kind = "sinusoid";
        c.trajectory.target_deg.clear();
        c.trajectory.amplitude_deg = {40.0, -85.0};
        c.trajectory.omega_rad_s = {1.9, 0.9};
        c.trajectory.phase_rad = {0.0, std::numbers::pi / 2.0};
        c.trajectory.offset_deg = {45.0, 0.0};
        c.sim.duration = 20.0;
        return c;
    }
    if (name == "two-link-baseline") {
        ScenarioConfig c = two_link_base(name);
        c.controller.type = "computed_torque";
        c.controller.k1.clear();
        c.controller.k2.clear();
        c.controller.k3.clear();
        c.controller.kp = {9.0, 9.0};
        c.controller.kd = {6.0, 6.0};
        return c;
    }
    if (name == "icub-leg-constant") return icub_base(name);
    if (name == "icub-leg-sine") {
        ScenarioConfig c = icub_base(name);
        c.trajectory.kind = "sinusoid";
        c.trajectory.target_deg.clear();
        c.trajectory.amplitude_deg = {33.5, 50.0, -36.0};
        c.trajectory.omega_rad_s = {1.2, 1.6, 1.0};
        c.trajectory.phase_rad = {0.0, std::numbers::pi / 3.0, 2.0 * std::numbers::pi / 3.0};
        c.trajectory.offset_deg = {45.0, 36.0, -60.0};
        c.sim.duration = 20.0;
        return c;
    }
    if (name == "icub-leg-disturbance") {
        ScenarioConfig c = icub_base(name);
        // 10 N downward on the foot tip, mapped through J^T at the target pose.
        c.disturbances.push_back({4.0, 6.0, {-1.11866, -0.71866, -1.81866}});
        return c;
    }
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("", "unknown preset '" + name + "'; available: " + list);
}

Vec peak_nominal_torque(const Scenario& s) {
    SimConfig cfg = s.sim;
    cfg.disturbances.clear();
    const SimTrace trace = simulate(s.model, s.limits, s.controller, s.trajectory, cfg);
    Vec peak = Vec::Zero(s.model.dof());
    for (const auto& smp : trace.samples) peak = peak.cwiseMax(smp.tau.cwiseAbs());
    return peak;
}

}  // namespace jla
