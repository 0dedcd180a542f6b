#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rotchain/planner.hpp"
#include "rotchain/shape.hpp"
#include "rotchain/shoot.hpp"
#include "rotchain/simulator.hpp"
#include "rotchain/stability.hpp"
#include "rotchain/trajectory.hpp"

namespace rotchain {

/// 12 significant digits, the precision used by every CSV export.
inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Shape CSV and configuration summary
// ---------------------------------------------------------------------------

inline void write_shape_csv(std::ostream& os, const ShapeSamples& shape) {
    os << "s,u,u_prime,rho,z,F\n";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        os << fmt12(shape.s[i]) << ',' << fmt12(shape.u[i]) << ',' << fmt12(shape.u_prime[i])
           << ',' << fmt12(shape.rho[i]) << ',' << fmt12(shape.z[i]) << ','
           << fmt12(shape.tension_F[i]) << '\n';
    }
}

/// Columns of a shape CSV; only the fields the file format carries.
struct ShapeCsv {
    std::vector<double> s, u, u_prime, rho, z, F;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, sep)) out.push_back(field);
    return out;
}

inline double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v  = std::stod(s, &pos);
        if (pos != s.size()) throw InvalidArgument("trailing characters in number: " + s);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + s + "'");
    }
}

}  // namespace detail

inline ShapeCsv read_shape_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("empty shape CSV");
    if (line != "s,u,u_prime,rho,z,F")
        throw InvalidArgument("unexpected shape CSV header: " + line);
    ShapeCsv out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto fields = detail::split(line, ',');
        if (fields.size() != 6) throw InvalidArgument("malformed shape CSV row: " + line);
        out.s.push_back(detail::parse_double(fields[0]));
        out.u.push_back(detail::parse_double(fields[1]));
        out.u_prime.push_back(detail::parse_double(fields[2]));
        out.rho.push_back(detail::parse_double(fields[3]));
        out.z.push_back(detail::parse_double(fields[4]));
        out.F.push_back(detail::parse_double(fields[5]));
    }
    return out;
}

inline nlohmann::json configuration_summary(const Configuration& config,
                                            const ParamPoint& point) {
    return nlohmann::json{{"omega", config.omega}, {"T", config.tension_T},
                          {"mode", config.mode},   {"r", config.control.r},
                          {"h", config.control.h}, {"L_bar", point.L_bar},
                          {"T_bar", point.T_bar},  {"c", point.c}};
}

// ---------------------------------------------------------------------------
// Stability map CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kMapHeader = "L_bar,T_bar,c,lambda_max,mode,r,omega,h,equilibrium_ok";

inline void write_map_csv(std::ostream& os, const std::vector<StabilityRecord>& records) {
    os << kMapHeader << '\n';
    for (const StabilityRecord& r : records) {
        os << fmt12(r.point.L_bar) << ',' << fmt12(r.point.T_bar) << ',' << fmt12(r.point.c)
           << ',' << fmt12(r.lambda_max) << ',' << r.mode << ',' << fmt12(r.control.r) << ','
           << fmt12(r.control.omega) << ',' << fmt12(r.control.h) << ','
           << (r.equilibrium_ok ? 1 : 0) << '\n';
    }
}

inline std::vector<StabilityRecord> read_map_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("empty map CSV");
    if (line != kMapHeader) throw InvalidArgument("unexpected map CSV header: " + line);
    std::vector<StabilityRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::split(line, ',');
        if (f.size() != 9) throw InvalidArgument("malformed map CSV row: " + line);
        StabilityRecord r;
        r.point          = {detail::parse_double(f[0]), detail::parse_double(f[1]),
                            detail::parse_double(f[2])};
        r.lambda_max     = detail::parse_double(f[3]);
        r.mode           = static_cast<int>(detail::parse_double(f[4]));
        r.control        = {detail::parse_double(f[5]), detail::parse_double(f[6]),
                            detail::parse_double(f[7])};
        r.equilibrium_ok = detail::parse_double(f[8]) != 0.0;
        out.push_back(r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Plan JSON and trajectory CSV
// ---------------------------------------------------------------------------

inline nlohmann::json plan_to_json(const Plan& plan) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const PlanNode& n : plan.nodes) {
        nodes.push_back({{"L_bar", n.point.L_bar},
                         {"T_bar", n.point.T_bar},
                         {"c", n.point.c},
                         {"r", n.control.r},
                         {"omega", n.control.omega},
                         {"h", n.control.h},
                         {"dwell", n.dwell}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const EdgeRecord& e : plan.edges) {
        edges.push_back({{"K", e.K}, {"max_lambda", e.max_lambda}, {"feasible", e.feasible}});
    }
    return nlohmann::json{{"nodes", nodes}, {"edges", edges}};
}

inline void write_trajectory_csv(std::ostream& os, const ControlTrajectory& traj) {
    os << "t,r,omega,h\n";
    for (const TrajectorySample& s : traj.samples)
        os << fmt12(s.t) << ',' << fmt12(s.r) << ',' << fmt12(s.omega) << ',' << fmt12(s.h)
           << '\n';
}

inline ControlTrajectory read_trajectory_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw InvalidArgument("empty trajectory CSV");
    if (line != "t,r,omega,h") throw InvalidArgument("unexpected trajectory CSV header: " + line);
    ControlTrajectory out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = detail::split(line, ',');
        if (f.size() != 4) throw InvalidArgument("malformed trajectory CSV row: " + line);
        out.samples.push_back({detail::parse_double(f[0]), detail::parse_double(f[1]),
                               detail::parse_double(f[2]), detail::parse_double(f[3])});
    }
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Trace CSV and mode report
// ---------------------------------------------------------------------------

inline void write_trace_csv(std::ostream& os, const SimTrace& trace) {
    os << "t,node_index,x,y,z,vx,vy,vz\n";
    for (const TraceSample& s : trace.samples) {
        for (int i = 0; i <= trace.links; ++i) {
            os << fmt12(s.t) << ',' << i << ',' << fmt12(s.pos[i].x()) << ','
               << fmt12(s.pos[i].y()) << ',' << fmt12(s.pos[i].z()) << ','
               << fmt12(s.vel[i].x()) << ',' << fmt12(s.vel[i].y()) << ','
               << fmt12(s.vel[i].z()) << '\n';
        }
    }
}

inline nlohmann::json mode_report(const ModeMeasurement& mm) {
    return nlohmann::json{{"mode", mm.mode}, {"confidence", mm.confidence},
                          {"steady", mm.steady}};
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

/// Everything a reproducible run needs, loadable from a dotted key-value
/// file. Flags override file values; save() writes every key so a round
/// trip reproduces the configuration exactly.
struct RunConfig {
    ChainParams chain{0.5, 0.02, 9.81};
    LumpedModelParams model{};
    RobotLimits limits{};
    CubeBounds cube{};
    int grid_L_bar = 30, grid_T_bar = 20, grid_c = 5;
    int solver_steps    = kDefaultIntegrationSteps;
    int scan_resolution = kDefaultScanResolution;
    EdgeParams edge{};
    SimParams sim{};
    std::string out_dir = ".";

    bool yarn() const { return chain.gravity < 0.0; }
    void set_orientation(const std::string& name) {
        if (name == "yarn")
            chain.gravity = -std::abs(chain.gravity);
        else if (name == "general")
            chain.gravity = std::abs(chain.gravity);
        else
            throw InvalidArgument("gravity orientation must be 'general' or 'yarn'");
    }

    GridSpec grid() const {
        GridSpec g;
        g.bounds    = cube;
        g.res_L_bar = grid_L_bar;
        g.res_T_bar = grid_T_bar;
        g.res_c     = grid_c;
        return g;
    }

    void validate() const {
        chain.validate();
        model.validate();
        limits.validate();
        cube.validate();
        if (solver_steps < kMinIntegrationSteps)
            throw InvalidArgument("solver.steps must be at least 10");
        if (scan_resolution < 2) throw InvalidArgument("solver.scan_resolution must be >= 2");
    }
};

namespace detail {

using KeyValues = std::map<std::string, std::string>;

inline KeyValues parse_key_values(std::istream& is) {
    KeyValues out;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const auto trim = [](std::string s) {
            const auto from = s.find_first_not_of(" \t\r");
            const auto to   = s.find_last_not_of(" \t\r");
            return from == std::string::npos ? std::string{} : s.substr(from, to - from + 1);
        };
        const std::string key   = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) out[key] = value;
    }
    return out;
}

}  // namespace detail

/// Apply one dotted key to a configuration; unknown keys are an error so
/// that typos surface instead of silently using defaults.
inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    const auto num  = [&] { return detail::parse_double(value); };
    const auto numi = [&] { return static_cast<int>(detail::parse_double(value)); };

    if (key == "chain.length") cfg.chain.length = num();
    else if (key == "chain.linear_density") cfg.chain.linear_density = num();
    else if (key == "chain.gravity") {
        const bool was_yarn = cfg.chain.gravity < 0.0;
        cfg.chain.gravity   = std::abs(num()) * (was_yarn ? -1.0 : 1.0);
    } else if (key == "gravity.orientation") cfg.set_orientation(value);
    else if (key == "model.links") cfg.model.links = numi();
    else if (key == "model.stiffness") cfg.model.stiffness = num();
    else if (key == "model.damping") cfg.model.damping = num();
    else if (key == "model.drag_linear") cfg.model.drag_linear = num();
    else if (key == "model.drag_quadratic") cfg.model.drag_quadratic = num();
    else if (key == "model.drag_frame") {
        if (value == "rotating") cfg.model.drag_frame = DragFrame::rotating;
        else if (value == "inertial") cfg.model.drag_frame = DragFrame::inertial;
        else throw InvalidArgument("model.drag_frame must be 'rotating' or 'inertial'");
    } else if (key == "limits.r_min") cfg.limits.r_min = num();
    else if (key == "limits.r_max") cfg.limits.r_max = num();
    else if (key == "limits.omega_min") cfg.limits.omega_min = num();
    else if (key == "limits.omega_max") cfg.limits.omega_max = num();
    else if (key == "limits.h_min") cfg.limits.h_min = num();
    else if (key == "limits.h_max") cfg.limits.h_max = num();
    else if (key == "limits.r_rate") cfg.limits.r_rate = num();
    else if (key == "limits.omega_rate") cfg.limits.omega_rate = num();
    else if (key == "limits.h_rate") cfg.limits.h_rate = num();
    else if (key == "cube.L_bar_max") cfg.cube.L_bar_max = num();
    else if (key == "cube.T_bar_max") cfg.cube.T_bar_max = num();
    else if (key == "cube.c_max") cfg.cube.c_max = num();
    else if (key == "grid.L_bar") cfg.grid_L_bar = numi();
    else if (key == "grid.T_bar") cfg.grid_T_bar = numi();
    else if (key == "grid.c") cfg.grid_c = numi();
    else if (key == "solver.steps") cfg.solver_steps = numi();
    else if (key == "solver.scan_resolution") cfg.scan_resolution = numi();
    else if (key == "planner.K_min") cfg.edge.K_min = num();
    else if (key == "planner.K_max") cfg.edge.K_max = num();
    else if (key == "planner.lambda_node") cfg.edge.lambda_node = num();
    else if (key == "planner.lambda_path") cfg.edge.lambda_path = num();
    else if (key == "planner.samples_per_edge") cfg.edge.samples_per_edge = numi();
    else if (key == "planner.max_edge_length") cfg.edge.max_edge_length = num();
    else if (key == "planner.condition1_scope") {
        if (value == "all") cfg.edge.condition1_scope = Condition1Scope::all;
        else if (value == "c_changing_only")
            cfg.edge.condition1_scope = Condition1Scope::c_changing_only;
        else throw InvalidArgument("planner.condition1_scope must be 'all' or 'c_changing_only'");
    } else if (key == "planner.rest_T_bar") cfg.edge.rest_T_bar = num();
    else if (key == "planner.dwell") cfg.edge.goal_dwell = num();
    else if (key == "sim.dt_factor") cfg.sim.dt_factor = num();
    else if (key == "sim.settle") cfg.sim.settle = num();
    else if (key == "sim.output_rate") cfg.sim.output_rate = num();
    else if (key == "sim.blowup_speed") cfg.sim.blowup_speed = num();
    else if (key == "sim.use_rk4") cfg.sim.use_rk4 = numi() != 0;
    else if (key == "sim.measure_dead_band") cfg.sim.measure_dead_band = num();
    else if (key == "sim.min_revolutions") cfg.sim.min_revolutions = num();
    else if (key == "output.dir") cfg.out_dir = value;
    else throw InvalidArgument("unknown configuration key: " + key);
}

inline RunConfig load_config(std::istream& is) {
    RunConfig cfg;
    // orientation first so a magnitude-only gravity keeps its sign
    const auto kv = detail::parse_key_values(is);
    if (const auto it = kv.find("gravity.orientation"); it != kv.end())
        cfg.set_orientation(it->second);
    for (const auto& [key, value] : kv) {
        if (key == "gravity.orientation") continue;
        apply_config_key(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

inline void save_config(std::ostream& os, const RunConfig& cfg) {
    os << "chain.length = " << fmt12(cfg.chain.length) << '\n';
    os << "chain.linear_density = " << fmt12(cfg.chain.linear_density) << '\n';
    os << "chain.gravity = " << fmt12(std::abs(cfg.chain.gravity)) << '\n';
    os << "gravity.orientation = " << (cfg.yarn() ? "yarn" : "general") << '\n';
    os << "model.links = " << cfg.model.links << '\n';
    os << "model.stiffness = " << fmt12(cfg.model.stiffness) << '\n';
    os << "model.damping = " << fmt12(cfg.model.damping) << '\n';
    os << "model.drag_linear = " << fmt12(cfg.model.drag_linear) << '\n';
    os << "model.drag_quadratic = " << fmt12(cfg.model.drag_quadratic) << '\n';
    os << "model.drag_frame = "
       << (cfg.model.drag_frame == DragFrame::rotating ? "rotating" : "inertial") << '\n';
    os << "limits.r_min = " << fmt12(cfg.limits.r_min) << '\n';
    os << "limits.r_max = " << fmt12(cfg.limits.r_max) << '\n';
    os << "limits.omega_min = " << fmt12(cfg.limits.omega_min) << '\n';
    os << "limits.omega_max = " << fmt12(cfg.limits.omega_max) << '\n';
    os << "limits.h_min = " << fmt12(cfg.limits.h_min) << '\n';
    os << "limits.h_max = " << fmt12(cfg.limits.h_max) << '\n';
    os << "limits.r_rate = " << fmt12(cfg.limits.r_rate) << '\n';
    os << "limits.omega_rate = " << fmt12(cfg.limits.omega_rate) << '\n';
    os << "limits.h_rate = " << fmt12(cfg.limits.h_rate) << '\n';
    os << "cube.L_bar_max = " << fmt12(cfg.cube.L_bar_max) << '\n';
    os << "cube.T_bar_max = " << fmt12(cfg.cube.T_bar_max) << '\n';
    os << "cube.c_max = " << fmt12(cfg.cube.c_max) << '\n';
    os << "grid.L_bar = " << cfg.grid_L_bar << '\n';
    os << "grid.T_bar = " << cfg.grid_T_bar << '\n';
    os << "grid.c = " << cfg.grid_c << '\n';
    os << "solver.steps = " << cfg.solver_steps << '\n';
    os << "solver.scan_resolution = " << cfg.scan_resolution << '\n';
    os << "planner.K_min = " << fmt12(cfg.edge.K_min) << '\n';
    os << "planner.K_max = " << fmt12(cfg.edge.K_max) << '\n';
    os << "planner.lambda_node = " << fmt12(cfg.edge.lambda_node) << '\n';
    os << "planner.lambda_path = " << fmt12(cfg.edge.lambda_path) << '\n';
    os << "planner.samples_per_edge = " << cfg.edge.samples_per_edge << '\n';
    os << "planner.max_edge_length = " << fmt12(cfg.edge.max_edge_length) << '\n';
    os << "planner.condition1_scope = "
       << (cfg.edge.condition1_scope == Condition1Scope::all ? "all" : "c_changing_only") << '\n';
    os << "planner.rest_T_bar = " << fmt12(cfg.edge.rest_T_bar) << '\n';
    os << "planner.dwell = " << fmt12(cfg.edge.goal_dwell) << '\n';
    os << "sim.dt_factor = " << fmt12(cfg.sim.dt_factor) << '\n';
    os << "sim.settle = " << fmt12(cfg.sim.settle) << '\n';
    os << "sim.output_rate = " << fmt12(cfg.sim.output_rate) << '\n';
    os << "sim.blowup_speed = " << fmt12(cfg.sim.blowup_speed) << '\n';
    os << "sim.use_rk4 = " << (cfg.sim.use_rk4 ? 1 : 0) << '\n';
    os << "sim.measure_dead_band = " << fmt12(cfg.sim.measure_dead_band) << '\n';
    os << "sim.min_revolutions = " << fmt12(cfg.sim.min_revolutions) << '\n';
    os << "output.dir = " << cfg.out_dir << '\n';
}

}  // namespace rotchain
