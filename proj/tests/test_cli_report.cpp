#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "shlab/config.hpp"
#include "shlab/errors.hpp"
#include "shlab/report.hpp"

using namespace shlab;
namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = SHLAB_SCENARIO_DIR;
const fs::path kData = fs::path(SHLAB_SCENARIO_DIR).parent_path() / "tests" / "data";

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("shlab_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SHLAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string config_error(const nlohmann::json& doc) {
    try {
        parse_config(doc);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

nlohmann::json minimal() {
    return nlohmann::json::parse(R"({
        "schema_version": 1,
        "pipeline": "solve",
        "model": {"kind": "Kottler"},
        "grid": {"backend": "Radial1D", "r_min": 1.0, "r_max": 10.0, "n_r": 200}
    })");
}

}  // namespace

TEST_CASE("config parsing accepts a minimal document") {
    auto c = parse_config(minimal());
    CHECK(c.pipeline == Pipeline::Solve);
    CHECK(c.grid.n_r == 200);
    CHECK(c.levels == 32);
    CHECK(c.tolerance == 1e-5);
    // The caller's pipeline wins over the document.
    CHECK(parse_config(minimal(), Pipeline::Rigidity).pipeline == Pipeline::Rigidity);
    for (auto p : {Pipeline::Solve, Pipeline::Tune, Pipeline::VerifyIdentity, Pipeline::Energy, Pipeline::Penrose,
                   Pipeline::Barriers, Pipeline::Rigidity, Pipeline::PpWaveAudit, Pipeline::Refine})
        CHECK(pipeline_from_name(pipeline_name(p)) == p);
    CHECK_FALSE(pipeline_from_name("bogus").has_value());
}

TEST_CASE("config errors name the offending field") {
    auto doc = minimal();
    doc["grid"].erase("r_min");
    CHECK(config_error(doc).find("grid.r_min") != std::string::npos);

    doc = minimal();
    doc["model"]["mass"] = 2.0;
    CHECK(config_error(doc).find("model.mass") != std::string::npos);

    doc = minimal();
    doc["grid"]["n_r"] = "many";
    CHECK(config_error(doc).find("grid.n_r") != std::string::npos);

    doc = minimal();
    doc["schema_version"] = 7;
    CHECK(config_error(doc).find("schema_version") != std::string::npos);

    doc = minimal();
    doc["model"]["kind"] = "Schwarzschild";
    CHECK(config_error(doc).find("model.kind") != std::string::npos);

    doc = minimal();
    doc["levels"] = 4;
    CHECK(config_error(doc).find("levels") != std::string::npos);

    doc = minimal();
    doc.erase("pipeline");
    CHECK(config_error(doc).find("pipeline") != std::string::npos);

    CHECK_THROWS_AS(load_config(kData / "does_not_exist.json"), ConfigError);
    CHECK_THROWS_AS(load_config(kData / "unknown_key.json", Pipeline::Solve), ConfigError);
}

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, 1.0 / 3, -2.5e-17, 6.02214076e23, 1e-300, 0.0}) {
        const std::string s = format_number(x);
        double y = 0;
        std::from_chars(s.data(), s.data() + s.size(), y);
        CHECK(y == x);
    }
}

TEST_CASE("checks record margins") {
    auto u = upper_check("err", 0.5, 1.0);
    CHECK(u.pass);
    CHECK(u.margin == doctest::Approx(0.5));
    auto l = lower_check("order", 1.5, 1.8);
    CHECK_FALSE(l.pass);
    CHECK(l.margin == doctest::Approx(-0.3));
    auto j = to_json(l);
    CHECK(j["name"] == "order");
    CHECK(j["pass"] == false);
}

TEST_CASE("mesh export uses 1-based faces") {
    TriMesh m;
    m.pos = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.tri = {{0, 1, 2}};
    auto dir = scratch("mesh");
    write_mesh(dir / "m.obj", m);
    std::istringstream in(slurp(dir / "m.obj"));
    std::string line, face;
    int verts = 0;
    while (std::getline(in, line)) {
        if (line.rfind("v ", 0) == 0) ++verts;
        if (line.rfind("f ", 0) == 0) face = line;
    }
    CHECK(verts == 3);
    CHECK(face == "f 1 2 3");
}

TEST_CASE("CLI exit codes") {
    auto out = scratch("codes");
    CHECK(run_cli("solve --config " + (kScenarios / "kottler_solve.json").string() + " --out " +
                  (out / "ok").string()) == 0);
    CHECK(fs::exists(out / "ok" / "report.json"));
    CHECK(fs::exists(out / "ok" / "timing.json"));
    CHECK(fs::exists(out / "ok" / "plot.py"));

    CHECK(run_cli("solve --config " + (kData / "missing_r_min.json").string()) == 3);
    CHECK(run_cli("solve --config " + (kData / "unknown_key.json").string()) == 3);
    CHECK(run_cli("solve") == 3);
    CHECK(run_cli("frobnicate --config x.json") == 3);

    CHECK(run_cli("solve --config " + (kData / "solver_failure.json").string() + " --out " +
                  (out / "fail").string()) == 2);

    // The coarse identity run passes at its own tolerance and fails once it is
    // tightened a hundredfold.
    const std::string identity = "verify-identity --config " + (kScenarios / "kottler_identity.json").string();
    CHECK(run_cli(identity + " --out " + (out / "id").string()) == 0);
    CHECK(run_cli(identity + " --tolerance-scale 0.01 --out " + (out / "tight").string()) == 1);
}

TEST_CASE("reports are reproducible with one thread") {
    auto out = scratch("repro");
    const std::string base = "verify-identity --config " + (kScenarios / "kottler_identity.json").string() +
                             " --threads 1 --out ";
    REQUIRE(run_cli(base + (out / "a").string()) == 0);
    REQUIRE(run_cli(base + (out / "b").string()) == 0);
    const auto a = slurp(out / "a" / "report.json");
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(out / "b" / "report.json"));

    auto report = nlohmann::json::parse(a);
    CHECK(report["schema_version"] == kSchemaVersion);
    CHECK(report["pipeline"] == "verify-identity");
    CHECK(report.contains("checks"));
}
