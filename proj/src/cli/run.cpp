#include "nodalheat/cli.hpp"

#include "nodalheat/bounds.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace nodalheat {

namespace {

// Cone exit bias allowance: about twice the largest gap (2.4e-4) between the
// bridge-corrected walk and the closed form at 2e6 paths over the acceptance cases.
constexpr double cone_bias_allowance = 5e-4;

struct Setup {
    EigenfunctionModel model;
    ScalarField field;
    DomainMask mask;
    int label = 1;
};

EigenfunctionModel model_or(const RunConfig& cfg, const std::string& fallback) {
    return parse_model(cfg.model.empty() ? fallback : cfg.model);
}

Setup setup(const EigenfunctionModel& model, int cells, int domain) {
    if (model.kind() == ModelKind::ConeHarmonic) throw ConfigError("this experiment needs an eigenfunction model");
    Setup s{model, sample_field(model, natural_grid(model, cells)), {}, 1};
    s.mask = label_nodal_domains(s.field);
    if (domain >= s.mask.count())
        throw ConfigError("domain " + std::to_string(domain) + " out of range (" + std::to_string(s.mask.count()) +
                          " nodal domains)");
    s.label = domain + 1;
    return s;
}

int pick(int value, int full, int quick, bool is_quick) { return value > 0 ? value : (is_quick ? quick : full); }

std::size_t pick_paths(const RunConfig& cfg, std::size_t full, std::size_t quick) {
    return cfg.paths > 0 ? cfg.paths : (cfg.quick ? quick : full);
}

PathEnsembleConfig ensemble(const RunConfig& cfg, std::size_t full, std::size_t quick) {
    PathEnsembleConfig e;
    e.n_paths = pick_paths(cfg, full, quick);
    e.dt = cfg.dt;
    e.seed = cfg.seed;
    e.bridge_correction = cfg.bridge;
    return e;
}

// Cell centre of the largest |u| on one domain.
Point max_point(const Setup& s) {
    const GridSpec& g = s.mask.grid;
    std::size_t best = g.size();
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (s.mask.labels[k] != s.label) continue;
        if (best == g.size() || std::abs(s.field.values[k]) > std::abs(s.field.values[best])) best = k;
    }
    if (best == g.size()) throw EmptyDomain("domain has no cells");
    return g.cell_center(static_cast<int>(best % g.nx), static_cast<int>(best / g.nx));
}

void attach_fields(const RunConfig& cfg, ExperimentReport& r, const Setup& s, double t, int n_steps) {
    if (!cfg.emit_fields) return;
    const GridSpec& g = s.mask.grid;
    const SurvivalField p = solve_hitting_field_all(s.mask, t, n_steps);
    r.matrices.push_back({"p_t", g.nx, g.ny, p.values});
    r.matrices.push_back({"u", g.nx, g.ny, s.field.values});
}

using Reports = std::vector<ExperimentReport>;

Reports heat_content_run(const RunConfig& cfg) {
    HeatContentOptions opt;
    if (cfg.model.empty()) {
        const int cpu = pick(cfg.grid, 1024, 256, cfg.quick);
        opt.times = parse_times(!cfg.times.empty() ? cfg.times : (cfg.quick ? "1e-4:1e-3:5" : "1e-5:1e-4:8"));
        const DomainMask mask = rectangle_domain(1.0, 1.0, cpu);
        ExperimentReport r = heat_content_experiment(mask, 1, 4.0, opt);
        r.input("domain", "unit-square");
        if (cfg.emit_fields) {
            const SurvivalField p = solve_hitting_field_all(mask, opt.times.back(), opt.n_steps);
            r.matrices.push_back({"p_t", mask.grid.nx, mask.grid.ny, p.values});
        }
        return {r};
    }
    const Setup s = setup(parse_model(cfg.model), pick(cfg.grid, 512, 128, cfg.quick), cfg.domain);
    const double lambda = s.model.eigenvalue();
    if (!cfg.times.empty()) {
        opt.times = parse_times(cfg.times);
    } else {
        const int n = cfg.quick ? 5 : 8;
        for (int k = 0; k < n; ++k) opt.times.push_back(1e-2 / lambda * std::pow(10.0, double(k) / (n - 1)));
    }
    ExperimentReport r = heat_content_experiment(s.mask, s.label, boundary_length(s.mask, s.label, s.field), opt);
    r.input("model", s.model.describe());
    attach_fields(cfg, r, s, opt.times.back(), opt.n_steps);
    return {r};
}

Reports explicit_run(const RunConfig& cfg) {
    const Setup s = setup(model_or(cfg, "torus:1,1"), pick(cfg.grid, 256, 128, cfg.quick), cfg.domain);
    const double t = 1.0 / s.model.eigenvalue();
    ExplicitSolutionOptions opt;
    ExperimentReport r =
        explicit_solution_check(s.model, s.mask, s.label, max_point(s), t, ensemble(cfg, 100000, 5000), opt);
    attach_fields(cfg, r, s, t, opt.n_steps);
    return {r};
}

Reports comparison_run(const RunConfig& cfg) {
    const Setup s = setup(model_or(cfg, "torus:1,1"), pick(cfg.grid, 256, 128, cfg.quick), cfg.domain);
    const double t = 1.0 / s.model.eigenvalue();
    const auto points = random_interior_points(s.mask, s.label, 10, 2.0 * s.mask.grid.h, cfg.seed);
    ComparisonOptions opt;
    opt.conservation_paths = cfg.quick ? 10000 : 100000;
    ExperimentReport r = check_comparison_lemma(s.model, s.mask, s.label, points, t, ensemble(cfg, 10000, 2000), opt);
    attach_fields(cfg, r, s, t, 20);
    return {r};
}

Reports theorem1_run(const RunConfig& cfg) {
    if (!cfg.model.empty()) {
        Theorem1Options opt;
        const EigenfunctionModel model = parse_model(cfg.model);
        opt.cells = pick(cfg.grid, 256, 128, cfg.quick);
        ExperimentReport r = theorem1_certificate(model, opt);
        if (cfg.emit_fields) attach_fields(cfg, r, setup(model, opt.cells, 0), 1.0 / model.eigenvalue(), opt.n_steps);
        return {r};
    }
    Theorem1SweepOptions opt;
    if (cfg.quick) opt.modes = {1, 2};
    opt.cells_per_mode = pick(cfg.grid, 128, 64, cfg.quick);
    return {theorem1_sweep(opt)};
}

Reports max_point_run(const RunConfig& cfg) {
    const std::vector<std::string> models =
        cfg.model.empty() ? std::vector<std::string>{"torus:1,1", "rect:1,1,1,1"} : std::vector<std::string>{cfg.model};
    Reports out;
    for (const auto& m : models) {
        const Setup s = setup(parse_model(m), pick(cfg.grid, 256, 128, cfg.quick), cfg.domain);
        const double t = 1.0 / s.model.eigenvalue();
        MaxPointOptions opt;
        out.push_back(max_point_survival(s.model, s.mask, s.label, t, ensemble(cfg, 100000, 5000), opt));
        attach_fields(cfg, out.back(), s, t, opt.n_steps);
    }
    return out;
}

Reports thin_domain_run(const RunConfig& cfg) {
    const EigenfunctionModel model = model_or(cfg, "torus:1,1");
    if (model.kind() != ModelKind::TorusProduct) throw ConfigError("thin-domain runs on torus models");
    ThinDomainOptions opt;
    if (cfg.quick) opt.sweep_paths = 2000;
    // The segment runs along the nodal line y = 0.
    const int cells = pick(cfg.grid, 256, 128, cfg.quick);
    ExperimentReport r = thin_domain_check(model, {0.0, 0.0}, {1.0, 0.0}, cfg.c > 0.0 ? cfg.c : 0.4, cells,
                                           ensemble(cfg, 100000, 5000), opt);
    if (cfg.emit_fields) attach_fields(cfg, r, setup(model, cells, 0), 1.0 / model.eigenvalue(), 20);
    return {r};
}

Reports avoided_crossing_run(const RunConfig& cfg) {
    AvoidedCrossingOptions opt;
    opt.paths_per_square = pick_paths(cfg, opt.paths_per_square, 200000);
    PathEnsembleConfig e = ensemble(cfg, opt.paths_per_square, opt.paths_per_square);
    return {avoided_crossing_scan(opt, e)};
}

Reports cone_run(const RunConfig& cfg) {
    const double bias = cfg.bias > 0.0 ? cfg.bias : cone_bias_allowance;
    const PathEnsembleConfig e = ensemble(cfg, 200000, 10000);
    if (cfg.alpha > 0.0 || cfg.r > 0.0) {
        ConeSpec spec;
        if (cfg.alpha > 0.0) spec.alpha = cfg.alpha;
        if (cfg.r > 0.0) spec.r = cfg.r;
        return {cone_experiment(spec, e, bias)};
    }
    Reports out;
    for (const ConeSpec spec : {ConeSpec{pi / 2, 2.0}, ConeSpec{pi, 2.0}, ConeSpec{pi / 3, 4.0}})
        out.push_back(cone_experiment(spec, e, bias));
    return out;
}

Reports cone_condition_run(const RunConfig& cfg) {
    ConeConditionOptions opt;
    if (cfg.quick) opt.orders = {1, 2};
    return {cone_condition_decay(opt, ensemble(cfg, 100000, 5000))};
}

Reports isoperimetry_run(const RunConfig& cfg) {
    IsoperimetryOptions opt;
    if (!cfg.times.empty()) opt.times = parse_times(cfg.times);
    else if (cfg.quick) opt.times = {4e-4, 8e-4, 1.6e-3, 3.2e-3};
    return {isoperimetry_sweep(isoperimetry_family(pick(cfg.grid, 512, 128, cfg.quick)), opt)};
}

Reports global_survival_run(const RunConfig& cfg) {
    GlobalSurvivalOptions opt;
    if (cfg.quick) opt.modes = {1, 2};
    opt.cells_per_mode = pick(cfg.grid, 128, 64, cfg.quick);
    opt.emit_field = cfg.emit_fields;
    return {global_survival_field(opt)};
}

Reports ball_search_run(const RunConfig& cfg) {
    const int cpu = pick(cfg.grid, 512, 128, cfg.quick);
    return {ball_intersection_search(standard_ball_cases(cpu, 0.125), cfg.c1, 20)};
}

Reports dispatch(const RunConfig& cfg) {
    const std::string& e = cfg.experiment;
    if (e == "heat-content") return heat_content_run(cfg);
    if (e == "explicit-solution") return explicit_run(cfg);
    if (e == "comparison") return comparison_run(cfg);
    if (e == "theorem1") return theorem1_run(cfg);
    if (e == "max-point") return max_point_run(cfg);
    if (e == "thin-domain") return thin_domain_run(cfg);
    if (e == "avoided-crossing") return avoided_crossing_run(cfg);
    if (e == "cone") return cone_run(cfg);
    if (e == "cone-condition") return cone_condition_run(cfg);
    if (e == "isoperimetry") return isoperimetry_run(cfg);
    if (e == "global-survival") return global_survival_run(cfg);
    if (e == "ball-search") return ball_search_run(cfg);
    std::string names;
    for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigError("unknown experiment '" + e + "'; valid names: " + names);
}

// Suffixes repeated report names so each one gets its own files.
void make_names_unique(Reports& reports) {
    for (std::size_t k = 0; k < reports.size(); ++k) {
        int seen = 0;
        for (std::size_t q = 0; q < reports.size(); ++q) seen += reports[q].name == reports[k].name;
        if (seen < 2) continue;
        const std::string base = reports[k].name;
        int index = 0;
        for (auto& r : reports) {
            if (r.name == base) r.name = base + "-" + std::to_string(++index);
        }
    }
}

} // namespace

std::vector<ExperimentReport> run_experiment(const RunConfig& cfg) {
    if (cfg.experiment != "suite") {
        Reports out = dispatch(cfg);
        make_names_unique(out);
        return out;
    }
    // Model and per-experiment overrides stay with the individual subcommands.
    RunConfig base = cfg;
    base.model.clear();
    base.times.clear();
    base.grid = 0;
    base.paths = 0;
    base.domain = 0;
    base.alpha = base.r = base.c = 0.0;
    ExperimentReport summary;
    summary.name = "suite";
    summary.topic = "every acceptance experiment";
    summary.input("quick", cfg.quick ? "true" : "false");
    summary.input("seed", static_cast<double>(cfg.seed));
    Reports all;
    for (const auto& name : experiment_names()) {
        if (name == "suite") continue;
        RunConfig sub = base;
        sub.experiment = name;
        Reports part = dispatch(sub);
        make_names_unique(part);
        for (auto& r : part) {
            const Verdict v = r.verdict();
            if (v == Verdict::ReportOnly) summary.note(r.name + " is report-only");
            else summary.check_true(r.name, v == Verdict::Pass);
            all.push_back(std::move(r));
        }
    }
    make_names_unique(all);
    all.push_back(std::move(summary));
    return all;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
        const Reports reports = run_experiment(cfg);
        int status = 0;
        for (const auto& r : reports) {
            emit_report(r, cfg.out);
            const Verdict v = r.verdict();
            if (v == Verdict::Fail) status = 1;
            out << r.name << ": " << verdict_name(v) << '\n';
            for (const auto& c : r.checks) {
                if (!c.passed && !c.report_only) out << "  failed " << c.name << '\n';
            }
        }
        return status;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const OutputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    }
    return 2;
}

} // namespace nodalheat
