#include <catch2/catch.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rotchain/io.hpp"

// Smoke tests of the command-line tool; ROTCHAIN_CLI is injected by CMake.

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("rotchain_cli_test_" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ROTCHAIN_CLI) + " " + args + " > /dev/null 2>&1";
    const int status      = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("help is available for every command") {
    CHECK(run_cli("--help") == 0);
    for (const char* sub : {"solve", "map", "plan", "simulate", "modes"})
        CHECK(run_cli(std::string(sub) + " --help") == 0);
}

TEST_CASE("solve writes a shape and summary for a parameter point") {
    TempDir tmp;
    const int rc = run_cli("--out " + tmp.path.string() + " solve --param 1,1,0");
    CHECK(rc == 0);
    REQUIRE(fs::exists(tmp.path / "shape.csv"));
    REQUIRE(fs::exists(tmp.path / "summary.json"));

    std::ifstream csv(tmp.path / "shape.csv");
    const auto shape = rotchain::read_shape_csv(csv);
    CHECK(shape.s.size() >= 11);
    for (double rho : shape.rho) CHECK(rho == 0.0);  // straight chain

    const auto js = nlohmann::json::parse(slurp(tmp.path / "summary.json"));
    CHECK(js["mode"] == 1);
    CHECK(js["L_bar"] == Approx(1.0));
}

TEST_CASE("solve reports the violated invariant on bad input") {
    TempDir tmp;
    CHECK(run_cli("--out " + tmp.path.string() + " solve --param 0,1,0.5") == 1);
    CHECK(run_cli("--out " + tmp.path.string() + " solve") == 1);
}

TEST_CASE("solve over a control returns one file per root or exit 2") {
    TempDir tmp;
    // L_bar = 20 witness: two roots
    const int rc =
        run_cli("--out " + tmp.path.string() + " solve --control 0.00125,19.809 --c 0.5");
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "shape_1.csv"));
    CHECK(fs::exists(tmp.path / "shape_2.csv"));

    // short chain on the axis: legal but empty
    const int rc2 = run_cli("--out " + tmp.path.string() + " solve --control 0,4.4294 --c 0.1");
    CHECK(rc2 == 2);
}

TEST_CASE("map and modes commands cooperate") {
    TempDir tmp;
    const std::string base = "--out " + tmp.path.string() +
                             " --set grid.L_bar=2 --set grid.T_bar=2 --set grid.c=2"
                             " --set cube.L_bar_max=4 --set cube.T_bar_max=1";
    CHECK(run_cli(base + " map --jobs 2") == 0);
    REQUIRE(fs::exists(tmp.path / "map.csv"));
    REQUIRE(fs::exists(tmp.path / "map_meta.json"));

    std::ifstream ms(tmp.path / "map.csv");
    const auto records = rotchain::read_map_csv(ms);
    CHECK(records.size() == 8);

    const auto meta = nlohmann::json::parse(slurp(tmp.path / "map_meta.json"));
    CHECK(meta["links"] == 10);

    // classify the straight shape produced by solve
    CHECK(run_cli("--out " + tmp.path.string() + " solve --param 1,1,0") == 0);
    CHECK(run_cli("modes --shape " + (tmp.path / "shape.csv").string()) == 0);
}

TEST_CASE("map slice emits one T_bar plane deterministically") {
    TempDir tmp1, tmp2;
    const std::string grid = " --set grid.L_bar=3 --set grid.c=3 --set cube.L_bar_max=3";
    CHECK(run_cli("--out " + tmp1.path.string() + grid + " map --slice T_bar=0.5") == 0);
    CHECK(run_cli("--out " + tmp2.path.string() + grid + " map --slice T_bar=0.5") == 0);
    CHECK(slurp(tmp1.path / "map.csv") == slurp(tmp2.path / "map.csv"));
    std::ifstream ms(tmp1.path / "map.csv");
    for (const auto& r : rotchain::read_map_csv(ms)) CHECK(r.point.T_bar == Approx(0.5));
}

TEST_CASE("plan and simulate run end to end on a trivial goal") {
    TempDir tmp;
    const std::string base = "--out " + tmp.path.string() +
                             " --set grid.L_bar=6 --set grid.T_bar=2 --set grid.c=4"
                             " --set cube.L_bar_max=3 --set cube.T_bar_max=0.8";
    REQUIRE(run_cli(base + " map") == 0);

    // goal mode 1: reachable from REST on this map
    const int rc = run_cli(base + " plan --map " + (tmp.path / "map.csv").string() +
                           " --goal-mode 1");
    CHECK(rc == 0);
    REQUIRE(fs::exists(tmp.path / "plan.json"));
    REQUIRE(fs::exists(tmp.path / "trajectory.csv"));

    const auto plan_js = nlohmann::json::parse(slurp(tmp.path / "plan.json"));
    CHECK(plan_js["nodes"].size() >= 1);

    const int rc2 = run_cli(base + " simulate --traj " +
                            (tmp.path / "trajectory.csv").string());
    CHECK(rc2 == 0);
    REQUIRE(fs::exists(tmp.path / "mode.json"));
    REQUIRE(fs::exists(tmp.path / "trace.csv"));
    const auto mode_js = nlohmann::json::parse(slurp(tmp.path / "mode.json"));
    CHECK(mode_js["mode"] == 1);
    CHECK(mode_js["steady"] == true);
}

TEST_CASE("plan exits 2 when the limits leave no path") {
    TempDir tmp;
    const std::string base = "--out " + tmp.path.string() +
                             " --set grid.L_bar=4 --set grid.T_bar=2 --set grid.c=2"
                             " --set cube.L_bar_max=2 --set cube.T_bar_max=0.5";
    REQUIRE(run_cli(base + " map") == 0);
    const int rc = run_cli(base + " --set limits.omega_max=0.6 plan --map " +
                           (tmp.path / "map.csv").string() + " --goal-mode 1");
    CHECK(rc == 2);
}

TEST_CASE("simulate trips the blow-up guard on an oversized step") {
    TempDir tmp;
    std::ofstream traj(tmp.path / "traj.csv");
    traj << "t,r,omega,h\n0,0,8,0.45\n4,0.02,8,0.45\n";
    traj.close();
    const int rc = run_cli("--out " + tmp.path.string() +
                           " --set sim.dt_factor=2.5 simulate --traj " +
                           (tmp.path / "traj.csv").string());
    CHECK(rc == 1);
}

TEST_CASE("config files round trip through the CLI layer") {
    TempDir tmp;
    rotchain::RunConfig cfg;
    cfg.model.links = 6;
    cfg.grid_L_bar  = 2;
    cfg.grid_T_bar  = 2;
    cfg.grid_c      = 2;
    cfg.cube        = {2.0, 0.5, 1.0};
    {
        std::ofstream os(tmp.path / "run.cfg");
        rotchain::save_config(os, cfg);
    }
    const int rc = run_cli("--config " + (tmp.path / "run.cfg").string() + " --out " +
                           tmp.path.string() + " map");
    CHECK(rc == 0);
    const auto meta = nlohmann::json::parse(slurp(tmp.path / "map_meta.json"));
    CHECK(meta["links"] == 6);
}

TEST_CASE("yarn orientation flag flips the spatial shape only") {
    TempDir tmp1, tmp2;
    CHECK(run_cli("--out " + tmp1.path.string() + " solve --param 2,1,0.3") == 0);
    CHECK(run_cli("--out " + tmp2.path.string() + " --gravity yarn solve --param 2,1,0.3") == 0);
    std::ifstream a(tmp1.path / "shape.csv"), b(tmp2.path / "shape.csv");
    const auto sa = rotchain::read_shape_csv(a);
    const auto sb = rotchain::read_shape_csv(b);
    REQUIRE(sa.s.size() == sb.s.size());
    for (std::size_t i = 0; i < sa.s.size(); ++i) {
        CHECK(sa.rho[i] == sb.rho[i]);
        CHECK(sa.z[i] == -sb.z[i]);
    }
}
