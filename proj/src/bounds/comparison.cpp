#include "nodalheat/bounds.hpp"

#include "nodalheat/errors.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/regions.hpp"

#include "../parallel.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

namespace {

std::vector<std::size_t> domain_cells(const DomainMask& mask, int label) {
    mask.require_label(label);
    std::vector<std::size_t> cells;
    for (std::size_t k = 0; k < mask.labels.size(); ++k) {
        if (mask.labels[k] == label) cells.push_back(k);
    }
    if (cells.empty()) throw EmptyDomain("domain has no cells");
    return cells;
}

Point uniform_in_cell(const GridSpec& g, std::size_t k, PathStream& rng) {
    const int i = static_cast<int>(k % static_cast<std::size_t>(g.nx));
    const int j = static_cast<int>(k / static_cast<std::size_t>(g.nx));
    return {g.x0 + (i + rng.uniform()) * g.h, g.y0 + (j + rng.uniform()) * g.h};
}

std::size_t pick(const std::vector<std::size_t>& cells, PathStream& rng) {
    const auto n = cells.size();
    return cells[std::min(n - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)))];
}

// Streams for start points are keyed apart from the path streams.
constexpr std::uint64_t start_stream_tag = 0x5bd1e995u;

// A point one cell inside the domain, found by walking from the deepest cell
// along the axis direction with the nearest boundary face.
Point near_boundary_point(const DomainMask& mask, int label) {
    const GridSpec& g = mask.grid;
    std::vector<unsigned char> outside(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) outside[k] = mask.labels[k] != label;
    const auto d2 = squared_distance_transform(g, outside, true);
    std::size_t deepest = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (!outside[k] && (outside[deepest] || d2[k] > d2[deepest])) deepest = k;
    }
    const int i0 = static_cast<int>(deepest % static_cast<std::size_t>(g.nx));
    const int j0 = static_cast<int>(deepest / static_cast<std::size_t>(g.nx));
    const int dirs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    int best_dir = 0;
    int best_steps = -1;
    for (int d = 0; d < 4; ++d) {
        int steps = 0;
        int i = i0;
        int j = j0;
        for (;;) {
            int ni = i + dirs[d][0];
            int nj = j + dirs[d][1];
            if (g.periodic_x) ni = (ni + g.nx) % g.nx;
            if (g.periodic_y) nj = (nj + g.ny) % g.ny;
            if (ni < 0 || nj < 0 || ni >= g.nx || nj >= g.ny || mask.label_at(ni, nj) != label) break;
            i = ni;
            j = nj;
            if (++steps > g.nx + g.ny) break;
        }
        if (best_steps < 0 || steps < best_steps) {
            best_steps = steps;
            best_dir = d;
        }
    }
    const Point c = g.cell_center(i0, j0);
    const double reach = (best_steps + 0.5) * g.h - g.h;  // face minus one cell
    return g.wrap({c.x + dirs[best_dir][0] * reach, c.y + dirs[best_dir][1] * reach});
}

} // namespace

std::vector<Point> random_interior_points(const DomainMask& mask, int label, std::size_t count, double margin,
                                          std::uint64_t seed) {
    const auto cells = domain_cells(mask, label);
    const MaskRegion region(mask, label);
    PathStream rng(seed ^ start_stream_tag, 0);
    std::vector<Point> pts;
    for (std::size_t tries = 0; pts.size() < count; ++tries) {
        if (tries > 1000 * count + 1000) throw Unresolved("no interior points at the requested margin");
        const Point p = uniform_in_cell(mask.grid, pick(cells, rng), rng);
        if (region.boundary_distance(p, margin) >= margin) pts.push_back(p);
    }
    return pts;
}

ExperimentReport heat_content_experiment(const DomainMask& mask, int label, double perimeter,
                                         const HeatContentOptions& opt) {
    ExperimentReport r;
    r.name = "heat-content";
    r.topic = "heat content square-root law";
    r.input("label", std::to_string(label));
    r.input("grid", std::to_string(mask.grid.nx) + "x" + std::to_string(mask.grid.ny));
    r.input("n_steps", std::to_string(opt.n_steps));
    r.input("perimeter", perimeter);
    const HeatContentCurve curve = heat_content_curve(mask, label, opt.times, opt.n_steps);
    const double reference = 2.0 / std::sqrt(pi) * perimeter;
    r.measure("slope_c", curve.fit.c);
    r.measure("r2", curve.fit.r2);
    r.reference("half_space_slope", reference);
    r.check_rel("slope", curve.fit.c, reference, opt.tolerance);
    r.check_ge("r2", curve.fit.r2, opt.min_r2);
    Table tab{"curve", {"t", "content", "slope_running"}, {}};
    for (std::size_t k = 0; k < curve.times.size(); ++k) {
        tab.rows.push_back({curve.times[k], curve.contents[k], curve.running_slope[k]});
    }
    r.tables.push_back(std::move(tab));
    for (const auto& w : curve.warnings) r.note(w);
    return r;
}

ExperimentReport explicit_solution_check(const EigenfunctionModel& model, const DomainMask& mask, int label, Point x,
                                         double t, const PathEnsembleConfig& cfg, const ExplicitSolutionOptions& opt) {
    ExperimentReport r;
    r.name = "explicit-solution";
    r.topic = "explicit Dirichlet solution exp(-lambda t) u";
    r.input("model", model.describe());
    r.input("label", std::to_string(label));
    r.input("t", t);
    r.input("x", x.x);
    r.input("y", x.y);
    r.input("paths", static_cast<double>(cfg.n_paths));
    r.input("seed", static_cast<double>(cfg.seed));
    const double decay = std::exp(-model.eigenvalue() * t);
    r.reference("decay", decay);

    const ScalarField d = dirichlet_semigroup_field(model, mask, label, t, opt.n_steps);
    const GridSpec& g = mask.grid;
    double umax = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        if (mask.labels[k] == label) umax = std::max(umax, std::abs(model.value(g.cell_center(
                                              static_cast<int>(k % g.nx), static_cast<int>(k / g.nx)))));
    }
    double worst = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (mask.label_at(i, j) != label) continue;
            const double u = model.value(g.cell_center(i, j));
            if (std::abs(u) <= 1e-3 * umax) continue;
            worst = std::max(worst, std::abs(d.at(i, j) / (decay * u) - 1.0));
        }
    }
    r.measure("fd_max_relative_error", worst);
    r.check_le("fd_relative_error", worst, opt.fd_tolerance);

    const McEstimate fk = feynman_kac_dirichlet(model, mask, label, x, t, cfg);
    const double exact = decay * model.value(x);
    const double dt = effective_dt(cfg, t);
    const double allowance = 3.0 * fk.std_error + std::sqrt(dt) * std::abs(model.value(x));
    r.measure("fk_mean", fk.mean);
    r.measure("fk_std_error", fk.std_error);
    r.reference("fk_exact", exact);
    r.check_abs("feynman_kac", fk.mean, exact, allowance);
    if (fk.near_boundary) r.note("start point lies within one cell of the boundary");
    return r;
}

ExperimentReport check_comparison_lemma(const EigenfunctionModel& model, const DomainMask& mask, int label,
                                        const std::vector<Point>& points, double t, const PathEnsembleConfig& cfg,
                                        const ComparisonOptions& opt) {
    ExperimentReport r;
    r.name = "comparison";
    r.topic = "comparison lemma and conservation of the Xi flow";
    r.input("model", model.describe());
    r.input("label", std::to_string(label));
    r.input("t", t);
    r.input("paths", static_cast<double>(cfg.n_paths));
    r.input("seed", static_cast<double>(cfg.seed));
    r.input("conservation_paths", static_cast<double>(opt.conservation_paths));

    const MaskRegion region(mask, label);
    const double s = mask.sign_of(label);
    const TestFunction f = [&](Point p) { return s * model.value(p); };
    const NormBundle norms = compute_norms(model, mask, label);
    const double sqrt_t = std::sqrt(t);

    Table tab{"points", {"x", "y", "u", "p", "dirichlet", "xi", "gap", "residual", "C"}, {}};
    double worst_residual = 0.0;
    double min_gap = 0.0;
    double max_c = 0.0;
    bool first = true;
    for (const Point& x : points) {
        const SharedPathEstimate e = evaluate_shared_paths(region, f, x, t, cfg);
        const double gap = e.xi.mean - e.dirichlet.mean;
        const double c = e.hitting.mean > 0.0 ? gap / (sqrt_t * e.hitting.mean * norms.grad_linf) : 0.0;
        const double scale = std::max(1.0, std::abs(e.f_start));
        worst_residual = std::max(worst_residual, e.identity_residual / scale);
        min_gap = first ? gap : std::min(min_gap, gap);
        max_c = std::max(max_c, c);
        first = false;
        tab.rows.push_back({x.x, x.y, e.f_start, e.hitting.mean, e.dirichlet.mean, e.xi.mean, gap,
                            e.identity_residual, c});
    }
    r.tables.push_back(std::move(tab));
    r.measure("max_identity_residual", worst_residual);
    r.measure("min_gap", min_gap);
    r.measure("max_constant_C", max_c);
    r.measure("grad_linf", norms.grad_linf);
    r.check_le("identity_residual", worst_residual, 1e-12);
    r.check_ge("gap_nonnegative", min_gap, 0.0);
    r.check_ge("constant_C_positive", max_c, 0.0, 0.0, true);

    // Mean-value bound next to the boundary: gap = p u(x) <= d(x) ‖∇u‖∞.
    const Point xb = near_boundary_point(mask, label);
    const double h = mask.grid.h;
    const SharedPathEstimate eb = evaluate_shared_paths(region, f, xb, t, cfg);
    const double gap_b = eb.xi.mean - eb.dirichlet.mean;
    const double sigma_b = std::abs(eb.f_start) * eb.hitting.std_error;
    r.measure("near_boundary_x", xb.x);
    r.measure("near_boundary_y", xb.y);
    r.measure("near_boundary_distance", region.boundary_distance(xb, 10.0 * h));
    r.measure("near_boundary_gap", gap_b);
    r.reference("near_boundary_bound", 2.0 * h * norms.grad_linf);
    r.check_le("near_boundary_gap", gap_b, 2.0 * h * norms.grad_linf, 3.0 * sigma_b);

    // ∫ e^{tΞ}f over D from uniform starts against ∫ f.
    const auto cells = domain_cells(mask, label);
    const double area = mask.area_of(label);
    const double dt = effective_dt(cfg, t);
    const std::size_t n = opt.conservation_paths;
    if (n < 100) throw InvalidParameter("conservation needs at least 100 paths");
    std::vector<double> xi(n);
    detail::parallel_for(n, [&](std::size_t i) {
        PathStream start(cfg.seed ^ start_stream_tag, i + 1);
        const Point x0 = uniform_in_cell(mask.grid, pick(cells, start), start);
        PathStream rng(cfg.seed, i);
        const PathOutcome o = simulate_path(region, x0, t, dt, cfg.bridge_correction, rng);
        xi[i] = o.absorbed ? f(x0) : f(o.end);
    });
    const McEstimate m = summarize(xi);
    const double integral = norms.l1;  // f = s·u is positive on D
    r.measure("xi_integral", area * m.mean);
    r.measure("xi_integral_std_error", area * m.std_error);
    r.reference("u_integral", integral);
    r.check_abs("conservation", area * m.mean, integral, 3.0 * area * m.std_error);
    return r;
}

ExperimentReport max_point_survival(const EigenfunctionModel& model, const DomainMask& mask, int label, double t,
                                    const PathEnsembleConfig& cfg, const MaxPointOptions& opt) {
    ExperimentReport r;
    r.name = "max-point";
    r.topic = "survival bound at the maximum point";
    r.input("model", model.describe());
    r.input("label", std::to_string(label));
    r.input("t", t);
    r.input("paths", static_cast<double>(cfg.n_paths));
    r.input("seed", static_cast<double>(cfg.seed));
    const GridSpec& g = mask.grid;
    const double s = mask.sign_of(label);
    int bi = -1;
    int bj = -1;
    double best = 0.0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            if (mask.label_at(i, j) != label) continue;
            const double v = s * model.value(g.cell_center(i, j));
            if (bi < 0 || v > best) {
                best = v;
                bi = i;
                bj = j;
            }
        }
    }
    if (bi < 0) throw EmptyDomain("domain has no cells");
    const Point x = g.cell_center(bi, bj);
    const double bound = 1.0 - std::exp(-model.eigenvalue() * t);
    r.measure("argmax_x", x.x);
    r.measure("argmax_y", x.y);
    r.measure("u_max", best);
    r.reference("bound", bound);

    const double p_fd = t > 0.0 ? solve_hitting_field(mask, label, t, opt.n_steps).at(bi, bj) : 0.0;
    r.measure("p_fd", p_fd);
    r.check_le("fd_bound", p_fd, bound);
    if (t > 0.0) {
        const McEstimate mc = estimate_hitting_probability(mask, label, x, t, cfg);
        r.measure("p_mc", mc.mean);
        r.measure("p_mc_std_error", mc.std_error);
        r.check_le("mc_bound", mc.mean, bound, 3.0 * mc.std_error);
        r.check_abs("mc_vs_fd", mc.mean, p_fd, 3.0 * mc.std_error + 0.01, true);
    }
    return r;
}

} // namespace nodalheat
