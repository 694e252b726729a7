// End-to-end checks of the darboux-lab binary: exit codes, file
// production, determinism. The binary path arrives via DLAB_BIN.

#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string bin() {
    const char* p = std::getenv("DLAB_BIN");
    REQUIRE_MESSAGE(p != nullptr, "DLAB_BIN must point at the darboux-lab binary");
    return std::string(p);
}

int run(const std::string& args) {
    const std::string cmd = bin() + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("dlab_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

const char* kSmallRun = R"({
  "name": "cli",
  "ermakov": {"a": 1.0, "c": 4.0},
  "darboux": {"epsilon": -0.5, "k_a": 0.89, "k_b": 1.0},
  "grid": {"x_min": -8.0, "x_max": 8.0, "n_points": 161},
  "times": [0.2, 1.4]
})";

}  // namespace

TEST_CASE("cli: help and argument errors") {
    CHECK(run("--help") == 0);
    CHECK(run("potential --help") == 0);
    CHECK(run("potential") == 2);           // neither config nor preset
    CHECK(run("frobnicate --preset fig1") != 0);
    CHECK(run("potential --preset fig99") == 2);
    CHECK(run("verify --preset fig1 --suite classical --threads -3") == 2);
}

TEST_CASE("cli: config rejection paths") {
    const auto dir = temp_dir("reject");
    const auto bad = write_config(dir, "{ this is not json");
    CHECK(run("potential --config " + bad.string()) == 2);

    const auto unsat = write_config(dir, R"({
      "name": "unsat",
      "ermakov": {"a": 1.0, "c": 3.0},
      "grid": {"x_min": -8.0, "x_max": 8.0, "n_points": 161},
      "times": [0.2]
    })");
    // a c < q^2: no real Ermakov width exists
    CHECK(run("potential --config " + unsat.string()) == 2);
    CHECK(run("potential --config " + (dir / "missing.json").string()) == 2);
}

TEST_CASE("cli: certification failure aborts before any output") {
    const auto dir = temp_dir("cert");
    const auto out = dir / "out";
    const auto cfg = write_config(dir, R"({
      "name": "nodal",
      "ermakov": {"a": 1.0, "c": 4.0},
      "darboux": {"epsilon": -0.5, "k_a": 0.5, "k_b": 1.0},
      "grid": {"x_min": -8.0, "x_max": 8.0, "n_points": 161},
      "times": [0.2]
    })");
    CHECK(run("potential --config " + cfg.string() + " --out " + out.string()) == 3);
    // atomic writes: a rejected factorization leaves no partial CSVs
    bool any = fs::exists(out) && !fs::is_empty(out);
    CHECK(!any);
}

TEST_CASE("cli: potential run produces files and is byte-deterministic") {
    const auto dir = temp_dir("run");
    const auto cfg = write_config(dir, kSmallRun);
    const auto out1 = dir / "a";
    const auto out2 = dir / "b";
    CHECK(run("potential --config " + cfg.string() + " --out " + out1.string()) == 0);
    CHECK(run("potential --config " + cfg.string() + " --out " + out2.string() +
              " --threads 2") == 0);
    REQUIRE(fs::exists(out1 / "cli_potential_t0.csv"));
    REQUIRE(fs::exists(out1 / "cli_potential_map.csv"));
    CHECK(slurp(out1 / "cli_potential_map.csv") ==
          slurp(out2 / "cli_potential_map.csv"));
    CHECK(slurp(out1 / "cli_potential_t1.csv") ==
          slurp(out2 / "cli_potential_t1.csv"));
}

TEST_CASE("cli: states and verify round trip") {
    const auto dir = temp_dir("sv");
    const auto out = dir / "out";
    const auto cfg = write_config(dir, R"({
      "name": "sv",
      "ermakov": {"a": 1.0, "c": 4.0},
      "darboux": {"epsilon": -0.5, "k_a": 0.89, "k_b": 1.0},
      "grid": {"x_min": -8.0, "x_max": 8.0, "n_points": 161},
      "times": [0.0, 1.0],
      "n_list": [1]
    })");
    CHECK(run("states --config " + cfg.string() + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "sv_psi1_map.csv"));

    CHECK(run("verify --config " + cfg.string() + " --suite classical --out " +
              out.string()) == 0);
    CHECK(fs::exists(out / "sv_verify.json"));
    const auto rep = slurp(out / "sv_verify.json");
    CHECK(rep.find("\"pass\": true") != std::string::npos);
}
