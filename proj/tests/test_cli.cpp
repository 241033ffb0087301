#include "nodalheat/cli.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace nodalheat;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("nodalheat-test-" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    }
    return files;
}

int shell(const std::string& args) {
    const int status = std::system((std::string(NODALHEAT_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

RunConfig quick(const std::string& experiment, const fs::path& out) {
    RunConfig c;
    c.experiment = experiment;
    c.quick = true;
    c.out = out.string();
    return c;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("times and models parse") {
    const auto t = parse_times("1e-5:1e-4:8");
    REQUIRE(t.size() == 8);
    CHECK(t.front() == doctest::Approx(1e-5));
    CHECK(t.back() == doctest::Approx(1e-4));
    CHECK(t[1] / t[0] == doctest::Approx(t[7] / t[6]));
    CHECK_THROWS_AS(parse_times("1e-4:1e-5:3"), ConfigError);
    CHECK_THROWS_AS(parse_times("1e-4:1e-3"), ConfigError);
    CHECK(parse_model("torus:2,3").eigenvalue() == doctest::Approx(52.0 * pi * pi));
    CHECK(parse_model("rect:1,1,1,2").kind() == ModelKind::RectangleDirichlet);
    CHECK(parse_model("disk:0,1,1").kind() == ModelKind::DiskBessel);
    CHECK(parse_model("cone:3").vanishing_order() == 3);
    CHECK_THROWS_AS(parse_model("torus:1"), ConfigError);
    CHECK_THROWS_AS(parse_model("sphere:1,1"), ConfigError);
    CHECK_THROWS_AS(parse_model("torus:0,1"), ConfigError);
}

TEST_CASE("config text mirrors the flags") {
    const auto kv = parse_config_text("# comment\nexperiment = cone\nalpha=1.5707963267948966 # inline\n\npaths = 5000\n");
    RunConfig c;
    for (const auto& [k, v] : kv) apply_setting(c, k, v);
    CHECK(c.experiment == "cone");
    CHECK(c.paths == 5000);
    CHECK(c.alpha == doctest::Approx(pi / 2));
    CHECK(c.seed == 12345);
    CHECK_THROWS_AS(parse_config_text("novalue\n"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "colour", "red"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "paths", "many"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "bridge", "maybe"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "dt", "-1"), ConfigError);
}

TEST_CASE("unknown experiments exit 2 and list the valid names") {
    RunConfig c = quick("nonsense", scratch("unknown"));
    std::ostringstream out, err;
    CHECK(run(c, out, err) == 2);
    CHECK(err.str().find("heat-content") != std::string::npos);
    CHECK(err.str().find("ball-search") != std::string::npos);
}

TEST_CASE("same config gives byte-identical artifacts, with fields on demand") {
    const fs::path a = scratch("det-a");
    const fs::path b = scratch("det-b");
    RunConfig c = quick("max-point", a);
    c.emit_fields = true;
    c.threads = 1;
    std::ostringstream out, err;
    REQUIRE(run(c, out, err) == 0);
    c.out = b.string();
    c.threads = 2;
    REQUIRE(run(c, out, err) == 0);
    const auto ta = tree(a);
    CHECK(ta == tree(b));
    CHECK(ta.count("max-point-1.report.txt") == 1);
    CHECK(ta.count("max-point-1.p_t.csv") == 1);
    CHECK(ta.count("max-point-1.u.csv") == 1);
    CHECK(ta.at("max-point-1.report.txt").find("verdict = PASS") != std::string::npos);
}

TEST_CASE("failed checks exit 1 with a FAIL verdict line") {
    // Large times on a coarse square leave the √t regime, so the slope check fails.
    const fs::path dir = scratch("fail");
    RunConfig c = quick("heat-content", dir);
    c.grid = 64;
    c.times = "2e-2:2e-1:4";
    std::ostringstream out, err;
    CHECK(run(c, out, err) == 1);
    CHECK(slurp(dir / "heat-content.report.txt").find("verdict = FAIL") != std::string::npos);
    CHECK(fs::exists(dir / "heat-content.curve.csv"));
}

TEST_CASE("unwritable output directories exit 2") {
    const fs::path file = scratch("blocker");
    std::ofstream(file) << "x";
    RunConfig c = quick("theorem1", file / "sub");
    std::ostringstream out, err;
    CHECK(run(c, out, err) == 2);
    fs::remove(file);
}

TEST_CASE("binary: usage errors, help and config files") {
    CHECK(shell("--help") == 0);
    CHECK(shell("--no-such-flag") == 2);
    CHECK(shell("bogus") == 2);
    CHECK(shell("cone --paths abc") == 2);
    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    std::ofstream(dir / "run.cfg") << "experiment = cone\nalpha = 1.5707963267948966\nr = 2\npaths = 2000\nout = "
                                   << (dir / "out").string() << "\n";
    CHECK(shell("--config " + (dir / "run.cfg").string()) == 0);
    CHECK(fs::exists(dir / "out" / "cone.report.txt"));
    // Flags override the file.
    CHECK(shell("--config " + (dir / "run.cfg").string() + " --r 4") == 0);
    CHECK(slurp(dir / "out" / "cone.report.txt").find("input.r = 4") != std::string::npos);
}

} // TEST_SUITE
