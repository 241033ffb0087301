// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include "nodalheat/bounds.hpp"
#include "nodalheat/cli.hpp"
#include "nodalheat/nodal.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace nodalheat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

bool check_passed(const ExperimentReport& r, const std::string& name) {
    const Check* c = r.find_check(name);
    return c != nullptr && c->passed;
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
    return buf;
}

PathEnsembleConfig paths(std::size_t n) {
    PathEnsembleConfig c;
    c.n_paths = n;
    return c;
}

struct TorusDomain {
    EigenfunctionModel model = make_torus_eigenfunction(1, 1);
    ScalarField field;
    DomainMask mask;
    int label = 1;
    Point centre;
};

// The (1,1) nodal domain around (1/4, 1/4).
TorusDomain torus_domain(int cells) {
    TorusDomain d;
    d.field = sample_field(d.model, natural_grid(d.model, cells));
    d.mask = label_nodal_domains(d.field);
    d.label = d.mask.label_at(cells / 4, cells / 4);
    d.centre = d.mask.grid.cell_center(cells / 4, cells / 4);
    return d;
}

Outcome heat_content_law() {
    HeatContentOptions opt;
    opt.times = parse_times("1e-5:1e-4:8");
    const ExperimentReport r = heat_content_experiment(rectangle_domain(1.0, 1.0, 1024), 1, 4.0, opt);
    return {r.verdict() == Verdict::Pass, fmt("c = %.5f vs %.5f, r2 = %.6f", r.measured_value("slope_c"),
                                              8.0 / std::sqrt(pi), r.measured_value("r2"))};
}

Outcome explicit_solution() {
    const TorusDomain d = torus_domain(256);
    const ExperimentReport r = explicit_solution_check(d.model, d.mask, d.label, d.centre, 1.0 / d.model.eigenvalue(),
                                                       paths(100000), {});
    return {check_passed(r, "fd_relative_error") && check_passed(r, "feynman_kac"),
            fmt("FD max rel err %.2e; FK %.5f +- %.5f", r.measured_value("fd_max_relative_error"),
                r.measured_value("fk_mean"), r.measured_value("fk_std_error"))};
}

Outcome xi_identity() {
    const TorusDomain d = torus_domain(256);
    const auto pts = random_interior_points(d.mask, d.label, 10, 2.0 * d.mask.grid.h, 12345);
    ComparisonOptions opt;
    opt.conservation_paths = 100000;
    const ExperimentReport r =
        check_comparison_lemma(d.model, d.mask, d.label, pts, 1.0 / d.model.eigenvalue(), paths(10000), opt);
    return {check_passed(r, "identity_residual") && check_passed(r, "conservation"),
            fmt("max residual %.1e; conservation ", r.measured_value("max_identity_residual")) +
                (check_passed(r, "conservation") ? "within 3 std_error" : "outside 3 std_error")};
}

Outcome max_point() {
    bool ok = true;
    std::string detail;
    for (const std::string spec : {"torus:1,1", "rect:1,1,1,1"}) {
        const EigenfunctionModel m = parse_model(spec);
        const ScalarField f = sample_field(m, natural_grid(m, 256));
        const DomainMask mask = label_nodal_domains(f);
        const ExperimentReport r = max_point_survival(m, mask, 1, 1.0 / m.eigenvalue(), paths(100000));
        ok = ok && check_passed(r, "fd_bound") && check_passed(r, "mc_bound");
        detail += spec + fmt(" fd %.4f mc %.4f; ", r.measured_value("p_fd"), r.measured_value("p_mc"));
    }
    return {ok, detail + fmt("bound %.4f", 1.0 - std::exp(-1.0))};
}

Outcome thin_domain() {
    const ExperimentReport r =
        thin_domain_check(make_torus_eigenfunction(1, 1), {0.0, 0.0}, {1.0, 0.0}, 0.4, 256, paths(100000));
    const bool ok = check_passed(r, "threshold_kappa1") && check_passed(r, "escape_exceeds_max_point_bound");
    return {ok, fmt("c* = %.7f (closed form %.7f; quoted 0.46105 is off by %.2e); escape %.4f",
                    r.measured_value("threshold_kappa1"), std::sqrt(pi) / (std::sqrt(2.0) * std::exp(1.0)),
                    std::abs(r.measured_value("threshold_kappa1") - 0.46105), r.measured_value("escape_mc")) +
                    fmt(" +- %.4f vs %.4f", r.measured_value("escape_std_error"), 1.0 - std::exp(-1.0))};
}

Outcome cone_formula() {
    bool ok = true;
    std::string detail;
    for (const ConeSpec spec : {ConeSpec{pi / 2, 2.0}, ConeSpec{pi, 2.0}, ConeSpec{pi / 3, 4.0}}) {
        const ExperimentReport r = cone_experiment(spec, paths(200000), 5e-4);
        ok = ok && r.verdict() == Verdict::Pass;
        detail += fmt("(%.4f,%g) %.4f vs %.4f; ", spec.alpha, spec.r, r.measured_value("mc"), cone_exit_exact(spec));
    }
    ok = ok && std::abs(cone_exit_exact({pi / 2, 2.0}) - 0.3119) < 5e-5 &&
         std::abs(cone_exit_exact({pi, 2.0}) - 0.5903) < 5e-5;
    return {ok, detail};
}

Outcome theorem1() {
    const ExperimentReport r = theorem1_sweep({});
    return {r.verdict() == Verdict::Pass,
            fmt("ratio max/min %.4f, chain exponent %.3f", r.measured_value("ratio_spread"),
                r.measured_value("chain_exponent"))};
}

Outcome avoided_crossing() {
    const AvoidedCrossingOptions opt;
    const ExperimentReport r = avoided_crossing_scan(opt, paths(opt.paths_per_square));
    return {r.verdict() == Verdict::Pass,
            fmt("gaussian r2 %.4f, gamma %.4f", r.measured_value("gaussian_r2"), r.measured_value("gaussian_gamma"))};
}

Outcome conjectures() {
    const ExperimentReport iso = isoperimetry_sweep(isoperimetry_family(512), {});
    GlobalSurvivalOptions gopt;
    gopt.modes = {1};
    const ExperimentReport glob = global_survival_field(gopt);
    const ExperimentReport ball = ball_intersection_search(standard_ball_cases(512, 0.125), 0.5, 20);
    bool balls = true;
    for (const auto& c : ball.checks) {
        if (c.name.find("oracle_match") != std::string::npos) balls = balls && c.passed;
    }
    const bool ok = check_passed(iso, "ratio_bound") && check_passed(glob, "m1.inf_positive_strict") &&
                    check_passed(glob, "m1.symmetric_minima") && balls;
    return {ok, fmt("max R %.4f (bound %.4f); inf p %.4f; ball oracles ", iso.measured_value("max_ratio"),
                    1.2 * 2.0 / std::sqrt(pi), glob.measured_value("inf_min")) +
                    (balls ? "matched" : "missed")};
}

int run_cli(const std::string& args) {
    const int status = std::system((std::string(NODALHEAT_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
}

Outcome determinism() {
    const fs::path base = fs::temp_directory_path() / "nodalheat-acceptance";
    fs::remove_all(base);
    const std::string common = "suite --quick --seed 12345 --out ";
    const int a = run_cli(common + (base / "a").string() + " --threads 1");
    const int b = run_cli(common + (base / "b").string() + " --threads 1");
    const int c = run_cli(common + (base / "c").string() + " --threads 4");
    const auto ta = tree(base / "a");
    const bool same = !ta.empty() && ta == tree(base / "b") && ta == tree(base / "c");
    const bool exits = a == b && b == c && (a == 0 || a == 1);
    fs::remove_all(base);
    return {same && exits, fmt("%g files; exit codes %g %g %g", static_cast<double>(ta.size()), a, b, c) +
                               (same ? "; identical" : "; outputs differ")};
}

} // namespace

int main() {
    struct Criterion {
        int number;
        const char* title;
        double budget;
        std::function<Outcome()> run;
    };
    const Criterion criteria[] = {
        {1, "heat-content sqrt(t) law", 60, heat_content_law},
        {2, "explicit-solution oracle", 30, explicit_solution},
        {3, "Xi identity and conservation", 60, xi_identity},
        {4, "max-point survival bound", 30, max_point},
        {5, "thin-domain constants", 30, thin_domain},
        {6, "cone formula", 60, cone_formula},
        {7, "theorem-1 pipeline", 120, theorem1},
        {8, "avoided-crossing bookkeeping", 120, avoided_crossing},
        {9, "conjecture sweeps", 180, conjectures},
        {10, "determinism", 300, determinism},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= c.budget;
        const bool pass = o.passed && in_time;
        failures += !pass;
        std::printf("criterion %2d %-30s %s  %s [%.1f s of %.0f s%s]\n", c.number, c.title, pass ? "PASS" : "FAIL",
                    o.detail.c_str(), secs, c.budget, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
