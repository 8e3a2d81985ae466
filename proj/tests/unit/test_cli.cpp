#include "commands.hpp"
#include "config.hpp"

#include "aafix/families.hpp"
#include "aafix/path_csv.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace aafix;
using namespace aafix::cli;
using namespace aafix::testing;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("aafix_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run(std::vector<std::string> args, std::string* log_text = nullptr) {
    args.insert(args.begin(), "aafix");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream log, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), log, err);
    if (log_text) *log_text = log.str() + err.str();
    return code;
}

const char* kOracle = R"([problem]
name = oracle
variant = delayed_only
t_min = -20
t_max = 20
quad_tol = 1e-10

[f]
forcing = sin

[c1]
coeff = 0.25
rate = 2

[solve]
tol = 1e-9
)";

const char* kHeavy = R"([problem]
variant = delayed_only
t_min = -10
t_max = 10

[f]
forcing = sin
a = 0.95

[c1]
coeff = 0.25
rate = 2
)";

}  // namespace

TEST_CASE("config parsing", "[cli]") {
    const RunConfig cfg = parse_config(kOracle);
    REQUIRE(cfg.spec);
    CHECK(cfg.spec->variant == Variant::delayed_only);
    CHECK(cfg.spec->c1.has_value());
    CHECK(cfg.solve.tol == 1e-9);

    CHECK(parse_number("pi") == std::numbers::pi);
    CHECK(parse_number("2pi") == 2 * std::numbers::pi);
    CHECK(parse_number("-pi") == -std::numbers::pi);
    CHECK(parse_number(" 0.5 ") == 0.5);
    CHECK(parse_list("1, 2,3") == std::vector<double>{1, 2, 3});

    CHECK_THROWS_AS(parse_config("[nonsense]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nvariantt = delayed_only\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("stray = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nvariant = sideways\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\nstep = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[problem]\ndim = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[diagnose]\ntest = everything\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[solve]\nallow_uncertified = maybe\n"), ConfigError);

    const RunConfig empty = parse_config("");
    CHECK_FALSE(empty.spec);
}

TEST_CASE("exit codes", "[cli]") {
    const fs::path dir = scratch("codes");
    const auto ok = write_file(dir / "ok.ini", kOracle);
    const auto heavy = write_file(dir / "heavy.ini", kHeavy);
    const auto broken = write_file(dir / "broken.ini", "[problem]\nbogus = 1\n");

    std::string log;
    CHECK(run({"certify", "--config", ok.string(), "--out", (dir / "a").string()}, &log) == 0);
    CHECK(fs::exists(dir / "a" / "certificate.txt"));
    CHECK(run({"certify", "--config", heavy.string(), "--out", (dir / "b").string()}) == 2);
    CHECK(run({"solve", "--config", heavy.string(), "--out", (dir / "c").string()}) == 2);
    CHECK_FALSE(fs::exists(dir / "c" / "solution.csv"));
    CHECK(run({"solve", "--config", heavy.string(), "--out", (dir / "d").string(), "--allow-uncertified"}) == 2);
    CHECK(run({"certify", "--config", broken.string()}, &log) == 1);
    CHECK(log.find("bogus") != std::string::npos);
    CHECK(run({"certify", "--config", (dir / "missing.ini").string()}) == 1);
    CHECK(run({"frobnicate"}) == 1);
    CHECK(run({}) == 1);
    CHECK(run({"diagnose"}) == 1);
    CHECK(run({"demo", "nope"}) == 1);
    CHECK(run({"solve", "--config", ok.string(), "--tol", "-1"}) == 1);
}

TEST_CASE("solve output round-trips through diagnose", "[cli]") {
    const fs::path dir = scratch("roundtrip");
    const auto cfg_file = write_file(dir / "oracle.ini", std::string(kOracle) + "\n[diagnose]\ntest = all\n");
    REQUIRE(run({"solve", "--config", cfg_file.string(), "--out", dir.string()}) == 0);
    for (const char* f : {"solution.csv", "certificate.txt", "solver_report.txt"}) CHECK(fs::exists(dir / f));

    const SampledPath y = read_path_csv((dir / "solution.csv").string());
    const auto [A, B] = delayed_sinusoid_coefficients(0.25, 2.0);
    CHECK(max_error(y, [&](double t) { return A * std::sin(t) + B * std::cos(t); }, -10, 20) <= 1e-6);
    CHECK(read_file(dir / "solver_report.txt").find("certificate: ball-zero") != std::string::npos);

    const RunConfig cfg = load_config(cfg_file.string());
    const std::string direct = diagnose_text(cfg, y);
    const fs::path out = dir / "diag";
    REQUIRE(run({"diagnose", "--config", cfg_file.string(), "--path", (dir / "solution.csv").string(), "--out",
                 out.string()}) == 0);
    CHECK(read_file(out / "diagnostics.txt") == direct);

    std::ostringstream again;
    write_path_csv(again, y);
    CHECK(again.str() == read_file(dir / "solution.csv"));
}

TEST_CASE("diagnose on sampled paths", "[cli]") {
    const fs::path dir = scratch("diagnose");
    auto csv = [&](const std::string& name, double lo, double hi, double (*fn)(double)) {
        const auto p = scalar_path(uniform_grid(lo, hi, 0.01), fn);
        write_path_csv((dir / name).string(), p);
        return (dir / name).string();
    };
    const auto cfg = write_file(dir / "d.ini", "[diagnose]\ntest = all\nshift_count = 200\ntol = 0.05\neps = 0.01\n"
                                               "probe_min = -1\nprobe_max = 1\nprobe_count = 5\n"
                                               "windows = 200, 400\n");

    std::string log;
    CHECK(run({"diagnose", "--config", cfg.string(), "--path", csv("c.csv", -800, 800, [](double) { return 2.0; }),
               "--out", (dir / "c").string()},
              &log) == 0);
    CHECK(log.find("verdict: consistent") != std::string::npos);
    CHECK(log.find("verdict: inconsistent") == std::string::npos);

    CHECK(run({"diagnose", "--config", cfg.string(), "--path", csv("psi.csv", -1300, 1300, psi), "--out",
               (dir / "psi").string()},
              &log) == 0);
    CHECK(log.find("test: bochner\nverdict: consistent") != std::string::npos);

    CHECK(run({"diagnose", "--config", cfg.string(), "--path",
               csv("grow.csv", -800, 800, [](double t) { return 0.01 * t; }), "--out", (dir / "g").string()},
              &log) == 0);
    CHECK(log.find("test: bochner\nverdict: inconsistent") != std::string::npos);
    CHECK(log.find("test: range_compactness\nverdict: inconsistent") != std::string::npos);

    write_file(dir / "bad.csv", "t,v1\n0,1\n0,2\n");
    CHECK(run({"diagnose", "--path", (dir / "bad.csv").string(), "--out", (dir / "b").string()}) == 1);
}

TEST_CASE("demos write their artifacts", "[cli]") {
    const fs::path dir = scratch("demos");
    const auto cfg = write_file(dir / "demo.ini", "[heat]\nt_max = 4\n\n[delay]\nt_min = -40\nt_max = 10\n");
    std::string log;
    CHECK(run({"demo", "heat", "--config", cfg.string(), "--out", (dir / "heat").string()}, &log) == 0);
    for (const char* f : {"heat_report.txt", "resolvent_decay.csv", "heat_probes.csv", "solution.csv", "certificate.txt"})
        CHECK(fs::exists(dir / "heat" / f));
    CHECK(read_file(dir / "heat" / "heat_report.txt").find("flagged: no") != std::string::npos);

    CHECK(run({"demo", "delay", "--config", cfg.string(), "--out", (dir / "delay").string()}, &log) == 0);
    const std::string report = read_file(dir / "delay" / "delay_report.txt");
    CHECK(report.find("closed_form:") != std::string::npos);
    CHECK(report.find("max deviation from closed form") != std::string::npos);
}

TEST_CASE("exit codes stay in range", "[cli][property]") {
    const fs::path dir = scratch("range");
    const auto ok = write_file(dir / "ok.ini", kOracle);
    const std::vector<std::vector<std::string>> battery{
        {"--help"},
        {"certify"},
        {"certify", "--config", ok.string(), "--out", (dir / "x").string()},
        {"certify", "--config", ok.string(), "--tol", "abc"},
        {"solve", "--config", (dir / "none").string()},
        {"diagnose", "--path", (dir / "none.csv").string()},
        {"demo"},
        {"demo", "heat", "--config", (dir / "none").string()},
        {"certify", "--config", ok.string(), "--unknown-flag"},
    };
    for (const auto& args : battery) {
        const int code = run(args);
        CHECK((code == 0 || code == 1 || code == 2));
    }
}
