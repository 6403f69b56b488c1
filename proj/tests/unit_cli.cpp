#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "fixtures.hpp"
#include "netcox/io.hpp"

using namespace netcox;
namespace fs = std::filesystem;

namespace {

std::string cli() {
    const char* p = std::getenv("NETCOX_CLI");
    REQUIRE_MESSAGE(p != nullptr, "NETCOX_CLI must point at the command line binary");
    return p;
}

int run(const std::string& args) {
    std::string cmd = cli() + " " + args + " >/dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("netcox_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("validate accepts a tree and reports its class") {
    TempDir tmp;
    save_network(fixtures::y_tree(), tmp.file("net.json"));
    CHECK(run("validate --net " + tmp.file("net.json") + " --out " + tmp.file("rep.json")) == 0);
    std::string rep = read_file(tmp.file("rep.json"));
    CHECK(rep.find("\"tree\"") != std::string::npos);
    CHECK(rep.find("\"geodesic_equals_resistance\": true") != std::string::npos);
}

TEST_CASE("validate rejects the theta graph for geodesic covariances") {
    TempDir tmp;
    save_network(fixtures::theta_graph(), tmp.file("net.json"));
    CHECK(run("validate --net " + tmp.file("net.json") + " --out " + tmp.file("rep.json")) == 0);
    std::string rep = read_file(tmp.file("rep.json"));
    CHECK(rep.find("\"one_sum_of_trees_and_loops\": false") != std::string::npos);
    CHECK(rep.find("\"geodesic_covariances_valid\": false") != std::string::npos);
}

TEST_CASE("exit codes distinguish validation, numerical and file problems") {
    TempDir tmp;
    // disconnected network: validation failure
    write_file(tmp.file("disc.json"),
               R"({"vertices":[[0,0],[1,0],[9,9],[10,9]],"segments":[[0,1],[2,3]]})");
    CHECK(run("validate --net " + tmp.file("disc.json")) == 2);
    // missing file
    CHECK(run("validate --net " + tmp.file("nope.json")) == 4);
    // malformed JSON
    write_file(tmp.file("bad.json"), "{");
    CHECK(run("validate --net " + tmp.file("bad.json")) == 4);
}

TEST_CASE("metric subcommand prints point pair distances") {
    TempDir tmp;
    save_network(fixtures::polygon_loop(4, 8.0), tmp.file("net.json"));
    std::string cmd = cli() + " metric --net " + tmp.file("net.json") +
                      " --metric geodesic --from 0 0.0 --to 1 1.0 > " + tmp.file("d.txt");
    REQUIRE(std::system(cmd.c_str()) == 0);
    double d = std::stod(read_file(tmp.file("d.txt")));
    CHECK(d == doctest::Approx(3.0));
}

TEST_CASE("simulation outputs are reproducible for a fixed seed") {
    TempDir tmp;
    save_network(fixtures::y_tree(2.0, 2.0, 2.0), tmp.file("net.json"));
    write_file(tmp.file("model.json"), R"({
      "kind": "lgcp", "h": 1,
      "intensity": {"rate": 3.0},
      "cov": {"sigma2": 0.5, "family": "exponential", "params": {"s": 1.0},
              "metric": "resistance"}
    })");
    std::string base = " sim-cox --net " + tmp.file("net.json") + " --model " +
                       tmp.file("model.json") + " --seed 42 --reps 2 --spacing 0.2";
    CHECK(run(base + " --out-prefix " + tmp.file("a")) == 0);
    CHECK(run(base + " --out-prefix " + tmp.file("b")) == 0);
    CHECK(read_file(tmp.file("a_0.csv")) == read_file(tmp.file("b_0.csv")));
    CHECK(read_file(tmp.file("a_1.csv")) == read_file(tmp.file("b_1.csv")));
    CHECK(read_file(tmp.file("a_0.csv")) != read_file(tmp.file("a_1.csv")));
    CHECK(fs::exists(tmp.file("a_manifest.json")));
}

TEST_CASE("gp simulation writes one grid value per point") {
    TempDir tmp;
    save_network(fixtures::y_tree(2.0, 2.0, 2.0), tmp.file("net.json"));
    write_file(tmp.file("cov.json"), R"({
      "sigma2": 1.0, "family": "exponential", "params": {"s": 0.5},
      "metric": "resistance"
    })");
    CHECK(run("sim-gp --net " + tmp.file("net.json") + " --cov " + tmp.file("cov.json") +
              " --seed 1 --spacing 0.5 --out-prefix " + tmp.file("gp")) == 0);
    std::string csv = read_file(tmp.file("gp_0.csv"));
    // 4 vertices + 3 interior points per segment + header
    size_t lines = std::count(csv.begin(), csv.end(), '\n');
    CHECK(lines == 1 + 4 + 9);
}

TEST_CASE("summaries and fit run end to end on simulated data") {
    TempDir tmp;
    save_network(fixtures::y_tree(6.0, 6.0, 6.0), tmp.file("net.json"));
    write_file(tmp.file("model.json"), R"({
      "kind": "lgcp", "h": 1,
      "intensity": {"rate": 6.0},
      "cov": {"sigma2": 1.0, "family": "exponential", "params": {"s": 0.5},
              "metric": "resistance"}
    })");
    REQUIRE(run("sim-cox --net " + tmp.file("net.json") + " --model " + tmp.file("model.json") +
                " --seed 9 --spacing 0.1 --out-prefix " + tmp.file("pat")) == 0);
    CHECK(run("summaries --net " + tmp.file("net.json") + " --pattern " + tmp.file("pat_0.csv") +
              " --metric resistance --kind pcf --rmax 4 --out " + tmp.file("pcf.csv")) == 0);
    SummaryCurve g = load_curve_csv(tmp.file("pcf.csv"));
    CHECK(g.size() == 128);
    CHECK(run("fit --net " + tmp.file("net.json") + " --pattern " + tmp.file("pat_0.csv") +
              " --kind lgcp --family exponential --a2 4 --out " + tmp.file("fit.json")) == 0);
    std::string fit = read_file(tmp.file("fit.json"));
    CHECK(fit.find("sigma2") != std::string::npos);
    CHECK(fit.find("exp_rate") != std::string::npos);
}
