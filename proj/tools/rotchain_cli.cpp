// Command-line front end: solve shapes, sweep stability maps, plan mode
// transitions, simulate trajectories, classify shape files.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "rotchain/rotchain.hpp"

namespace fs = std::filesystem;
using namespace rotchain;

namespace {

constexpr int kExitOk    = 0;
constexpr int kExitError = 1;  // usage or model error
constexpr int kExitEmpty = 2;  // valid but empty outcome (no solution, no path, not steady)

constexpr const char* kModeConventionNote =
    "mode convention: interior axis crossings + 1 (the straight shape is mode 1)";

std::vector<double> parse_list(const std::string& text, std::size_t count,
                               const std::string& what) {
    const auto parts = detail::split(text, ',');
    if (parts.size() != count)
        throw InvalidArgument(what + " needs " + std::to_string(count) +
                              " comma-separated values");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(detail::parse_double(p));
    return out;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream os(path);
    if (!os) throw InvalidArgument("cannot write " + path.string());
    return os;
}

struct GlobalOptions {
    std::string config_path;
    std::string out_dir;
    std::string gravity;
    std::vector<std::string> sets;
    unsigned seed = 0;
};

RunConfig make_config(const GlobalOptions& opt) {
    RunConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream is(opt.config_path);
        if (!is) throw InvalidArgument("cannot read config file " + opt.config_path);
        cfg = load_config(is);
    }
    for (const std::string& kv : opt.sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("--set expects key=value, got '" + kv + "'");
        apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!opt.gravity.empty()) cfg.set_orientation(opt.gravity);
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    cfg.validate();
    fs::create_directories(cfg.out_dir);
    return cfg;
}

// --- solve ------------------------------------------------------------

int cmd_solve(const RunConfig& cfg, const std::string& param, const std::string& control,
              double c_value) {
    const fs::path out(cfg.out_dir);
    if (!param.empty()) {
        const auto v = parse_list(param, 3, "--param");
        const ParamPoint point{v[0], v[1], v[2]};
        const Configuration config = forward_map(point, cfg.chain, cfg.solver_steps, cfg.cube);
        auto csv = open_out(out / "shape.csv");
        write_shape_csv(csv, config.shape);
        auto js = open_out(out / "summary.json");
        js << configuration_summary(config, point).dump(2) << '\n';
        std::cout << configuration_summary(config, point).dump() << '\n'
                  << kModeConventionNote << '\n';
        return kExitOk;
    }

    const auto v = parse_list(control, 2, "--control");
    ShootOptions options;
    options.T_bar_max = cfg.cube.T_bar_max;
    options.steps     = cfg.solver_steps;
    const auto solutions = shoot(v[0], v[1], c_value, cfg.chain, cfg.scan_resolution, options);
    if (solutions.empty()) {
        std::cout << "no solution in T_bar range (0, " << cfg.cube.T_bar_max << "]\n";
        return kExitEmpty;
    }
    for (std::size_t i = 0; i < solutions.size(); ++i) {
        const Configuration& config = solutions[i];
        const ParamPoint point      = to_dimensionless(config, cfg.chain);
        const std::string tag       = "_" + std::to_string(i + 1);
        auto csv = open_out(out / ("shape" + tag + ".csv"));
        write_shape_csv(csv, config.shape);
        auto js = open_out(out / ("summary" + tag + ".json"));
        js << configuration_summary(config, point).dump(2) << '\n';
        std::cout << "solution " << i + 1 << ": " << configuration_summary(config, point).dump()
                  << '\n';
    }
    std::cout << solutions.size() << " solution(s)\n" << kModeConventionNote << '\n';
    return kExitOk;
}

// --- map --------------------------------------------------------------

int cmd_map(const RunConfig& cfg, int jobs, const std::string& slice) {
    std::vector<StabilityRecord> records;
    const GridSpec grid = cfg.grid();
    if (slice.empty()) {
        records = stability_grid(grid, cfg.model, cfg.chain, jobs, cfg.solver_steps);
    } else {
        const std::string prefix = "T_bar=";
        if (slice.rfind(prefix, 0) != 0)
            throw InvalidArgument("--slice expects T_bar=<value>");
        const double T_bar = detail::parse_double(slice.substr(prefix.size()));
        records = stability_slice(grid, T_bar, cfg.model, cfg.chain, jobs, cfg.solver_steps);
    }
    const fs::path out(cfg.out_dir);
    auto csv = open_out(out / "map.csv");
    write_map_csv(csv, records);

    int stable = 0, failed = 0;
    for (const auto& r : records) {
        stable += r.equilibrium_ok && r.lambda_max <= 0.0;
        failed += !r.equilibrium_ok;
    }
    nlohmann::json meta{{"links", cfg.model.links},
                        {"points", records.size()},
                        {"stable", stable},
                        {"equilibrium_failures", failed},
                        {"cube", {{"L_bar_max", grid.bounds.L_bar_max},
                                  {"T_bar_max", grid.bounds.T_bar_max},
                                  {"c_max", grid.bounds.c_max}}},
                        {"resolution", {{"L_bar", grid.res_L_bar},
                                        {"T_bar", slice.empty() ? grid.res_T_bar : 1},
                                        {"c", grid.res_c}}}};
    auto js = open_out(out / "map_meta.json");
    js << meta.dump(2) << '\n';
    std::cout << "map.csv: " << records.size() << " points, " << stable << " stable, " << failed
              << " equilibrium failures\n";
    return kExitOk;
}

// --- plan -------------------------------------------------------------

int cmd_plan(const RunConfig& cfg, const std::string& map_path, int goal_mode,
             const std::string& goal_point, const std::string& start_point, int jobs) {
    std::ifstream ms(map_path);
    if (!ms) throw InvalidArgument("cannot read map file " + map_path);
    const auto records = read_map_csv(ms);

    PlanGraph graph;
    try {
        graph = build_graph(records, cfg.limits, cfg.edge, cfg.model, cfg.chain, jobs, cfg.cube);
    } catch (const EmptyGraph& e) {
        std::cout << e.what() << '\n';
        return kExitEmpty;
    }

    int start = 0;  // REST
    if (!start_point.empty()) {
        const auto v = parse_list(start_point, 3, "--start");
        double best  = 1e300;
        for (std::size_t i = 1; i < graph.vertices.size(); ++i) {
            const ParamPoint& p = graph.vertices[i].point;
            const double d = std::hypot(p.L_bar - v[0], p.T_bar - v[1], p.c - v[2]);
            if (d < best) {
                best  = d;
                start = static_cast<int>(i);
            }
        }
    }
    PlanGoal goal;
    if (!goal_point.empty()) {
        const auto v = parse_list(goal_point, 3, "--goal");
        goal         = ParamPoint{v[0], v[1], v[2]};
    } else {
        goal = goal_mode;
    }

    Plan result;
    try {
        result = plan(graph, start, goal);
    } catch (const NoPath& e) {
        std::cout << e.what() << '\n';
        return kExitEmpty;
    }
    const ControlTrajectory traj = synthesize_trajectory(result, cfg.limits);

    const fs::path out(cfg.out_dir);
    auto js = open_out(out / "plan.json");
    js << plan_to_json(result).dump(2) << '\n';
    auto csv = open_out(out / "trajectory.csv");
    write_trajectory_csv(csv, traj);
    std::cout << "plan: " << result.nodes.size() << " nodes, trajectory " << traj.duration()
              << " s\n";
    return kExitOk;
}

// --- simulate -----------------------------------------------------------

int cmd_simulate(const RunConfig& cfg, const std::string& traj_path, double perturb,
                 unsigned seed) {
    std::ifstream ts(traj_path);
    if (!ts) throw InvalidArgument("cannot read trajectory file " + traj_path);
    const ControlTrajectory traj = read_trajectory_csv(ts);

    const ControlInput u0{traj.samples.front().r, traj.samples.front().omega,
                          traj.samples.front().h};
    SimState initial = straight_line_state(u0, cfg.model, cfg.chain);
    if (perturb > 0.0) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 1; i < initial.links; ++i) {
            Eigen::Vector3d d(u(rng), u(rng), u(rng));
            initial.pos[i] += perturb * d.normalized();
        }
    }

    const fs::path out(cfg.out_dir);
    SimTrace trace;
    try {
        trace = run(traj, cfg.model, cfg.chain, initial, cfg.sim);
    } catch (const BlowUp& e) {
        std::cout << e.what() << '\n';
        return kExitError;
    }
    auto csv = open_out(out / "trace.csv");
    write_trace_csv(csv, trace);

    const auto mm = measure_terminal_mode(trace, traj.samples.back().omega, cfg.sim);
    auto js       = open_out(out / "mode.json");
    js << mode_report(mm).dump(2) << '\n';
    std::cout << mode_report(mm).dump() << '\n';
    return mm.steady ? kExitOk : kExitEmpty;
}

// --- modes --------------------------------------------------------------

int cmd_modes(const std::string& shape_path) {
    std::ifstream is(shape_path);
    if (!is) throw InvalidArgument("cannot read shape file " + shape_path);
    const ShapeCsv shape = read_shape_csv(is);
    const int mode       = classify_mode(shape.u_prime);
    std::cout << "mode " << mode << '\n' << kModeConventionNote << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rotating-chain shapes, stability maps, transition planning and simulation"};
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "configuration file (dotted key = value lines)");
    app.add_option("--out", opt.out_dir, "output directory (default from config, '.')");
    app.add_option("--gravity", opt.gravity, "orientation: general | yarn")
        ->check(CLI::IsMember({"general", "yarn"}));
    app.add_option("--set", opt.sets, "override a config key, e.g. --set model.links=20")
        ->take_all();
    app.add_option("--seed", opt.seed, "random seed for perturbations");

    auto* solve = app.add_subcommand("solve", "solve one shape or a tension family");
    std::string param, control;
    double c_value = 0.0;
    solve->add_option("--param", param, "parameter point L_bar,T_bar,c (dimensionless)");
    solve->add_option("--control", control,
                      "attachment radius r [m] and rotation speed omega [rad/s]");
    solve->add_option("--c", c_value, "bottom slope rho'(0) for --control mode");

    auto* map = app.add_subcommand("map", "sweep the stability map over the parameter cube");
    int jobs = 1;
    std::string slice;
    map->add_option("--jobs", jobs, "parallel workers for grid points");
    map->add_option("--slice", slice, "single slice, e.g. T_bar=0.5");

    auto* planc = app.add_subcommand("plan", "plan a transition over a computed map");
    std::string map_path, goal_point, start_point;
    int goal_mode = 0, plan_jobs = 1;
    planc->add_option("--map", map_path, "stability map CSV")->required();
    planc->add_option("--goal-mode", goal_mode, "target rotation mode");
    planc->add_option("--goal", goal_point, "target point L_bar,T_bar,c (nearest vertex)");
    planc->add_option("--start", start_point, "start point (default: the REST vertex)");
    planc->add_option("--jobs", plan_jobs, "parallel workers for edge validation");

    auto* sim = app.add_subcommand("simulate", "integrate a control trajectory");
    std::string traj_path;
    double perturb = 0.0;
    sim->add_option("--traj", traj_path, "trajectory CSV")->required();
    sim->add_option("--perturb", perturb, "random initial node displacement [m]");

    auto* modes = app.add_subcommand("modes", "classify an existing shape CSV");
    std::string shape_path;
    modes->add_option("--shape", shape_path, "shape CSV file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (modes->parsed()) return cmd_modes(shape_path);

        const RunConfig cfg = make_config(opt);
        if (solve->parsed()) {
            if (param.empty() == control.empty())
                throw InvalidArgument("solve needs exactly one of --param or --control");
            return cmd_solve(cfg, param, control, c_value);
        }
        if (map->parsed()) return cmd_map(cfg, jobs, slice);
        if (planc->parsed()) {
            if (goal_point.empty() && goal_mode <= 0)
                throw InvalidArgument("plan needs --goal-mode or --goal");
            return cmd_plan(cfg, map_path, goal_mode, goal_point, start_point, plan_jobs);
        }
        if (sim->parsed()) return cmd_simulate(cfg, traj_path, perturb, opt.seed);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
