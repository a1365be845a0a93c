#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dsm/csv.hpp"
#include "dsm/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path dir;
    explicit TempDir(const std::string& tag) {
        dir = fs::temp_directory_path() /
              ("dsm-test-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~TempDir() { fs::remove_all(dir); }
    std::string path(const std::string& name) const {
        return (dir / name).string();
    }
};

std::string write_config(const TempDir& tmp, const json& cfg) {
    const std::string path = tmp.path("config.json");
    std::ofstream out(path);
    out << cfg.dump(2);
    return path;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json diagonal_solve_config() {
    return json{
        {"schema_version", 1},
        {"experiment", "solve"},
        {"seed", 42},
        {"problem",
         {{"name", "diagonal"},
          {"singular_values", {1.0, 0.1, 0.01}},
          {"y", {1.0, 1.0, 1.0}}}},
        {"schedule", {{"type", "explicit"}, {"c1", 1.0}, {"c0", 2.0}, {"b", 0.5}}},
        {"flow",
         {{"t_end", 40.0}, {"record_stride", 5}, {"path_diagnostics", true}}}};
}

// splits a CSV line on commas, empty cells preserved
std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

TEST_CASE("solve experiment writes a trajectory with g under the envelope") {
    TempDir tmp("solve");
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, diagonal_solve_config());
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);

    const std::string csv = slurp(tmp.path("out") + "/trajectory.csv");
    std::istringstream lines(csv);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,eps,residual,g,v,envelope,dist_from_u0");
    std::string line;
    int rows = 0;
    while (std::getline(lines, line)) {
        const auto cells = split_csv(line);
        REQUIRE(cells.size() == 7);
        const double g = std::stod(cells[3]);
        const double envelope = std::stod(cells[5]);
        CHECK(g <= envelope * 1.05 + 1e-12);
        ++rows;
    }
    CHECK(rows >= 3);

    const json manifest = json::parse(slurp(tmp.path("out") + "/manifest.json"));
    CHECK(manifest["experiment"] == "solve");
    CHECK(manifest["conditions"]["vacuous"] == true);
    CHECK(manifest["conditions"]["pass"] == true);
    CHECK(manifest.contains("generated_at"));
    CHECK(manifest["outputs"][0] == "trajectory.csv");
}

TEST_CASE("invalid b is a config error") {
    TempDir tmp("badb");
    json cfg = diagonal_solve_config();
    cfg["schedule"]["b"] = 1.5;
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConfigError);
}

TEST_CASE("strict mode refuses failing conditions; override runs") {
    TempDir tmp("strict");
    json cfg = diagonal_solve_config();
    // decay ratio b/c0 = 0.5 > 1/4 violates the standing assumption
    cfg["schedule"] = {{"type", "explicit"}, {"c1", 1.0}, {"c0", 1.0}, {"b", 0.5}};
    cfg["problem"] = {{"name", "cubic"},
                      {"n", 4},
                      {"alpha", 1.0},
                      {"profile", "bump"}};
    cfg["flow"] = {{"t_end", 5.0}, {"record_stride", 5}};
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConditionViolation);
    opt.strict = false;
    CHECK(dsm::harness::run(opt) == 0);
}

TEST_CASE("reproducibility: identical seeds give identical CSV bytes") {
    TempDir tmp("repro");
    json cfg = json{
        {"experiment", "delta-sweep"},
        {"seed", 99},
        {"problem",
         {{"name", "diagonal"},
          {"singular_values", {1.0, 0.5, 0.25}},
          {"y", {1.0, 1.0, 1.0}}}},
        {"schedule", {{"type", "explicit"}, {"c1", 1.0}, {"c0", 2.0}, {"b", 0.5}}},
        {"flow", {{"record_stride", 1000}, {"path_diagnostics", false}}},
        {"sweep", {{"deltas", {1e-2, 1e-3}}, {"m_floor", 1.0}}}};
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.quiet = true;
    opt.output_dir = tmp.path("out1");
    CHECK(dsm::harness::run(opt) == 0);
    opt.output_dir = tmp.path("out2");
    CHECK(dsm::harness::run(opt) == 0);
    CHECK(slurp(tmp.path("out1") + "/sweep.csv") ==
          slurp(tmp.path("out2") + "/sweep.csv"));

    const json manifest = json::parse(slurp(tmp.path("out1") + "/manifest.json"));
    CHECK(manifest["summary"]["monotone_within_slack"] == true);
}

TEST_CASE("path experiment reports the norm bound") {
    TempDir tmp("path");
    json cfg = json{
        {"experiment", "path"},
        {"problem",
         {{"name", "diagonal"},
          {"singular_values", {1.0, 0.1, 0.01}},
          {"y", {1.0, 1.0, 1.0}}}},
        {"schedule", {{"type", "explicit"}, {"c1", 1.0}, {"c0", 2.0}, {"b", 0.5}}},
        {"path", {{"num_points", 12}, {"eps_min_factor", 1e-4}}}};
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);
    const json manifest = json::parse(slurp(tmp.path("out") + "/manifest.json"));
    CHECK(manifest["summary"]["points"] == 12);
    CHECK(manifest["summary"]["norm_bound_ok"] == true);
    CHECK(manifest["summary"]["derivative_bound_ok"] == true);
}

TEST_CASE("riccati-verify experiment passes and writes its table") {
    TempDir tmp("riccati");
    json cfg = json{{"experiment", "riccati-verify"},
                    {"seed", 7},
                    {"riccati",
                     {{"count", 5}, {"samples", 20}, {"horizon", 6.0},
                      {"tol", 1e-9}}}};
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);
    const json manifest = json::parse(slurp(tmp.path("out") + "/manifest.json"));
    CHECK(manifest["summary"]["pass"] == true);
    CHECK(manifest["summary"]["worst_rel_err"].get<double>() <= 1e-8);
    const std::string csv = slurp(tmp.path("out") + "/riccati.csv");
    CHECK(csv.find("g_numeric") != std::string::npos);
}

TEST_CASE("solve-noisy tags the trajectory and stays finite") {
    TempDir tmp("noisy");
    json cfg = diagonal_solve_config();
    cfg["experiment"] = "solve-noisy";
    cfg["noise"] = {{"delta", 1e-3}};
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);
    CHECK(fs::exists(tmp.path("out") + "/trajectory.csv"));
}

TEST_CASE("list_problems names every built-in") {
    std::ostringstream text;
    dsm::harness::list_problems(text, false);
    CHECK(text.str().find("diagonal") != std::string::npos);
    CHECK(text.str().find("integral") != std::string::npos);
    CHECK(text.str().find("cubic") != std::string::npos);

    std::ostringstream machine;
    dsm::harness::list_problems(machine, true);
    const json listing = json::parse(machine.str());
    REQUIRE(listing.is_array());
    CHECK(listing.size() == 3);
    CHECK(listing[0].contains("params"));
}

TEST_CASE("cli: no arguments prints usage and fails") {
    const int status = std::system(DSM_CLI_PATH " >/dev/null 2>&1");
    CHECK(WEXITSTATUS(status) != 0);
}

TEST_CASE("cli: run end to end with env fallback output dir") {
    TempDir tmp("cli");
    const std::string config_path = write_config(tmp, diagonal_solve_config());
    const std::string out_dir = tmp.path("envout");
    const std::string cmd = "DSM_OUTPUT_DIR=" + out_dir + " " + DSM_CLI_PATH +
                            " run --config " + config_path +
                            " --quiet >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(out_dir + "/trajectory.csv"));
    CHECK(fs::exists(out_dir + "/manifest.json"));
}

TEST_CASE("cli: config errors map to exit code 2") {
    TempDir tmp("clierr");
    json cfg = diagonal_solve_config();
    cfg["schedule"]["b"] = 1.5;
    const std::string config_path = write_config(tmp, cfg);
    const std::string cmd = std::string(DSM_CLI_PATH) + " run --config " +
                            config_path + " --output " + tmp.path("out") +
                            " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    CHECK(WEXITSTATUS(status) == 2);
}

TEST_CASE("format_full round-trips doubles exactly") {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const double x = unif(rng) * std::pow(10.0, rep % 37 - 18);
        CHECK(std::stod(dsm::format_full(x)) == x);
    }
}

TEST_CASE("write_states appends state columns") {
    TempDir tmp("states");
    json cfg = diagonal_solve_config();
    cfg["flow"]["write_states"] = true;
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);
    std::istringstream lines(slurp(tmp.path("out") + "/trajectory.csv"));
    std::string header;
    std::getline(lines, header);
    CHECK(header == "t,eps,residual,g,v,envelope,dist_from_u0,u0,u1,u2");
    std::string first_row;
    std::getline(lines, first_row);
    CHECK(split_csv(first_row).size() == 10);
}

TEST_CASE("unknown experiment and unknown problem are config errors") {
    TempDir tmp("unknown");
    json cfg = diagonal_solve_config();
    cfg["experiment"] = "frobnicate";
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConfigError);

    json cfg2 = diagonal_solve_config();
    cfg2["problem"]["name"] = "mystery";
    opt.config_path = write_config(tmp, cfg2);
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConfigError);

    opt.config_path = tmp.path("missing.json");
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConfigError);
}

TEST_CASE("explicit u0 flows through to the trajectory") {
    TempDir tmp("u0");
    json cfg = diagonal_solve_config();
    cfg["u0"] = {0.5, 0.5, 0.5};
    cfg["flow"]["write_states"] = true;
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);
    std::istringstream lines(slurp(tmp.path("out") + "/trajectory.csv"));
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    const auto cells = split_csv(first);
    REQUIRE(cells.size() == 10);
    CHECK(std::stod(cells[7]) == 0.5);  // u0 column at t = 0
    CHECK(std::stod(cells[8]) == 0.5);

    json bad = diagonal_solve_config();
    bad["u0"] = {1.0};  // wrong dimension
    opt.config_path = write_config(tmp, bad);
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConfigError);
}

TEST_CASE("problems without a known solution still solve") {
    TempDir tmp("nosol");
    json cfg = json{
        {"experiment", "solve"},
        {"seed", 1},
        {"problem", {{"name", "cubic"}, {"n", 4}, {"alpha", 1.0},
                     {"f", {0.1, 0.0, -0.1, 0.2}}}},
        {"schedule", {{"type", "derived"}, {"b", 0.5}, {"y_norm_bound", 1.0}}},
        {"flow", {{"target_eps_factor", 0.1}, {"record_stride", 10}}}};
    dsm::harness::RunOptions opt;
    opt.config_path = write_config(tmp, cfg);
    opt.output_dir = tmp.path("out");
    opt.quiet = true;
    CHECK(dsm::harness::run(opt) == 0);
    // v column stays empty without a known solution
    std::istringstream lines(slurp(tmp.path("out") + "/trajectory.csv"));
    std::string header, first;
    std::getline(lines, header);
    std::getline(lines, first);
    CHECK(split_csv(first)[4].empty());

    // derived schedules need a norm bound when y is unknown
    json bad = cfg;
    bad["schedule"] = {{"type", "derived"}, {"b", 0.5}};
    opt.config_path = write_config(tmp, bad);
    CHECK_THROWS_AS(dsm::harness::run(opt), dsm::ConfigError);
}
