#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "faircomp/config.hpp"
#include "faircomp/report.hpp"
#include "faircomp/runner.hpp"

using namespace faircomp;
namespace fs = std::filesystem;

TEST_SUITE_BEGIN("cli");

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("faircomp_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("config parsing: values, defaults and diagnostics") {
    const std::string text = R"(
[params]
N = 1
k = -0.5
chi = 0.9
frame = original

[run]
mode = jko

[numerics]
M = 64
dt = 1e-4

[output]
dir = somewhere
formats = csv,json
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.params.N == 1);
    CHECK(cfg.params.k == -0.5);
    CHECK(cfg.params.chi == 0.9);
    CHECK(cfg.params.frame == Frame::Original);
    CHECK(cfg.mode == RunMode::Jko);
    CHECK(cfg.M == 64);
    CHECK(cfg.dt == 1e-4);
    CHECK(cfg.out_dir == "somewhere");
    CHECK(cfg.csv);
    CHECK(cfg.json);
    CHECK_FALSE(cfg.svg);

    // line-numbered diagnostics
    try {
        parse_config_text("[params]\nN = 1\nbogus = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config_text("[params]\nk = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[nope]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[params]\nN = 1\nk = 3.0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[numerics]\nM = 4\n"), ConfigError);
}

TEST_CASE("presets parse and cover the documented set") {
    for (const std::string name : {"figure1", "figure2", "psi-table", "chic-1d"}) {
        const RunConfig cfg = preset_config(name);
        CHECK(cfg.label == name);
    }
    CHECK(preset_config("figure1").params.chi == 1.2);
    CHECK(preset_config("figure1").params.k == 0.2);
    CHECK(preset_config("figure2").params.chi == 0.8);
    CHECK(preset_config("figure2").params.k == 0.95);
    CHECK_THROWS_AS(preset_config("figure9"), ConfigError);
}

TEST_CASE("envelope mode emits the documented files deterministically") {
    const fs::path dir = fresh_dir("envelope");
    RunConfig cfg = parse_config_text(R"(
[params]
N = 1
k = 0.2
chi = 1.2

[run]
mode = envelope

[numerics]
M = 48
)");
    cfg.out_dir = (dir / "a").string();
    REQUIRE(run_config(cfg) == 0);
    cfg.out_dir = (dir / "b").string();
    REQUIRE(run_config(cfg) == 0);

    const std::string csv_a = slurp(dir / "a" / "envelope.csv");
    CHECK(csv_a.rfind("r,rho,m_envelope,M_envelope\n", 0) == 0);
    CHECK(csv_a == slurp(dir / "b" / "envelope.csv"));
    const std::string json_a = slurp(dir / "a" / "report.json");
    CHECK(json_a == slurp(dir / "b" / "report.json"));
    const Json j = Json::parse(json_a);
    CHECK(j["delta_lower"].get<double>() > 0.0);
    CHECK(j["delta_upper"].get<double>() > j["delta_lower"].get<double>());
    fs::remove_all(dir);
}

TEST_CASE("psi table mode emits the documented columns") {
    const fs::path dir = fresh_dir("psi");
    RunConfig cfg = parse_config_text(R"(
[params]
N = 6
k = -1.0
chi = 1.0

[run]
mode = psi_table

[psi]
N = 6
k_min = -1.4
k_max = -0.6
k_step = 0.4
s_min = 0.2
s_max = 3.0
s_count = 12
)");
    cfg.out_dir = dir.string();
    REQUIRE(run_config(cfg) == 0);
    const std::string csv = slurp(dir / "psi_table.csv");
    CHECK(csv.rfind("k,s,psi,backend\n", 0) == 0);
    CHECK(csv.find("hypergeometric") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("fixed-point mode produces the figure artifact set") {
    const fs::path dir = fresh_dir("fp");
    RunConfig cfg = preset_config("figure1");
    cfg.M = 96; // keep the unit test quick
    cfg.fp_tol = 1e-7;
    cfg.out_dir = dir.string();
    REQUIRE(run_config(cfg) == 0);
    for (const std::string f :
         {"profile.csv", "envelope.csv", "report.json", "density.svg", "logdensity.svg"})
        CHECK(fs::exists(dir / f));
    const Json j = Json::parse(slurp(dir / "report.json"));
    CHECK(j["converged"].get<bool>());
    CHECK(j["envelope_ok"].get<bool>());
    CHECK(j["energy"]["frame"].get<std::string>() == "rescaled");
    const std::string svg = slurp(dir / "density.svg");
    CHECK(svg.rfind("<svg", 0) == 0);
    fs::remove_all(dir);
}

TEST_CASE("json report numbers round-trip at full precision") {
    CHECK(format_g17(0.1) == "0.10000000000000001");
    CHECK(format_g17(1.0) == "1");
    const double v = 1.2180873452254;
    CHECK(std::stod(format_g17(v)) == v);
}

TEST_SUITE_END();
