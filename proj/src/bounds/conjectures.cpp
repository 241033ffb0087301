#include "nodalheat/bounds.hpp"

#include "nodalheat/errors.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

ExperimentReport isoperimetry_sweep(const std::vector<NamedDomain>& family, const IsoperimetryOptions& opt) {
    if (family.empty() || opt.times.empty()) throw InvalidParameter("the sweep needs domains and times");
    ExperimentReport r;
    r.name = "isoperimetry";
    r.topic = "heat content isoperimetry conjecture";
    r.input("domains", std::to_string(family.size()));
    r.input("n_steps", std::to_string(opt.n_steps));
    r.input("bound_factor", opt.bound_factor);
    const double half_space = 2.0 / std::sqrt(pi);
    r.reference("half_space_constant", half_space);
    Table tab{"ratios", {"domain", "t", "content", "perimeter", "R"}, {}};
    double running = 0.0;
    double max_r = 0.0;
    std::string max_name;
    std::size_t flags = 0;
    const double t_min = *std::min_element(opt.times.begin(), opt.times.end());
    for (std::size_t d = 0; d < family.size(); ++d) {
        const NamedDomain& nd = family[d];
        if (!(nd.perimeter > 0.0)) throw InvalidParameter("domain " + nd.name + " has zero boundary length");
        r.input("domain." + std::to_string(d + 1), nd.name);
        std::vector<double> times = opt.times;
        if (nd.natural_time > 0.0) times.push_back(nd.natural_time);
        double r_small = 0.0;
        double r_decade = 0.0;
        double decade_gap = 1e300;
        for (double t : times) {
            const double content = heat_content(nd.mask, nd.label, t, opt.n_steps);
            const double ratio = content / (nd.perimeter * std::sqrt(t));
            tab.rows.push_back({static_cast<double>(d + 1), t, content, nd.perimeter, ratio});
            if (running > 0.0 && ratio > 1.05 * running) {
                ++flags;
                r.note("ratio of " + nd.name + " at t = " + format_real(t) + " exceeds the running maximum by >5%");
            }
            running = std::max(running, ratio);
            if (ratio > max_r) {
                max_r = ratio;
                max_name = nd.name;
            }
            if (t == t_min) r_small = ratio;
            const double gap = std::abs(std::log(t / (10.0 * t_min)));
            if (t != nd.natural_time && gap < decade_gap) {
                decade_gap = gap;
                r_decade = ratio;
            }
        }
        const std::string tag = nd.name;
        r.measure(tag + ".R_small_t", r_small);
        r.check_le(tag + ".decade_drift", std::abs(r_decade / r_small - 1.0), 0.05, 0.0, true);
        if (nd.name == "square") r.check_rel("square.half_space_limit", r_small, half_space, 0.03, true);
        if (nd.natural_time > 0.0) {
            const double content = heat_content(nd.mask, nd.label, nd.natural_time, opt.n_steps);
            const double r_nat = content / (nd.perimeter * std::sqrt(nd.natural_time));
            r.measure(tag + ".R_natural_time", r_nat);
            const double spread = std::max(r_nat, r_small) / std::min(r_nat, r_small);
            r.check_le(tag + ".comparable_up_to_wavelength", spread, 2.0, 0.0, true);
        }
    }
    r.tables.push_back(std::move(tab));
    r.measure("max_ratio", max_r);
    r.measure("flags", static_cast<double>(flags));
    r.input("max_ratio_domain", max_name);
    r.check_le("ratio_bound", max_r, opt.bound_factor * half_space, 0.0, true);
    return r;
}

ExperimentReport global_survival_field(const GlobalSurvivalOptions& opt) {
    if (opt.modes.empty()) throw InvalidParameter("the sweep needs at least one mode");
    ExperimentReport r;
    r.name = "global-survival";
    r.topic = "global survival field at the wavelength time";
    r.input("cells_per_mode", std::to_string(opt.cells_per_mode));
    r.input("n_steps", std::to_string(opt.n_steps));
    r.input("symmetry_tolerance", opt.symmetry_tolerance);
    Table tab{"modes", {"m", "lambda", "inf_p", "inf_x", "inf_y", "centre_distance", "min_spread"}, {}};
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t q = 0; q < opt.modes.size(); ++q) {
        const int m = opt.modes[q];
        const auto model = make_torus_eigenfunction(m, m);
        const ScalarField field = sample_field(model, natural_grid(model, opt.cells_per_mode * m));
        const DomainMask mask = label_nodal_domains(field);
        const GridSpec& g = mask.grid;
        const SurvivalField p = solve_hitting_field_all(mask, 1.0 / model.eigenvalue(), opt.n_steps);
        std::vector<double> minima(static_cast<std::size_t>(mask.count()), 2.0);
        std::size_t arg = 0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            const int l = mask.labels[k];
            if (l == 0) continue;
            double& mn = minima[static_cast<std::size_t>(l - 1)];
            mn = std::min(mn, p.values[k]);
            if (p.values[k] < p.values[arg] || mask.labels[arg] == 0) arg = k;
        }
        const Point at = g.cell_center(static_cast<int>(arg % g.nx), static_cast<int>(arg / g.nx));
        // Domain centres sit at odd multiples of 1/(4m) in both coordinates.
        const double cell = 1.0 / (2.0 * m);
        auto centre_offset = [&](double v) {
            const double k = std::floor(v / cell);
            return std::abs(v - (k + 0.5) * cell);
        };
        const double centre_distance = std::hypot(centre_offset(at.x), centre_offset(at.y));
        const auto [mn, mx] = std::minmax_element(minima.begin(), minima.end());
        const double spread = (*mx - *mn) / *mn;
        const double inf = p.values[arg];
        tab.rows.push_back({static_cast<double>(m), model.eigenvalue(), inf, at.x, at.y, centre_distance, spread});
        const std::string tag = "m" + std::to_string(m);
        r.measure(tag + ".inf_p", inf);
        r.check_ge(tag + ".inf_positive", inf, 0.0, 0.0, true);
        r.check_true(tag + ".inf_positive_strict", inf > 0.0, true);
        r.check_le(tag + ".symmetric_minima", spread, opt.symmetry_tolerance, 0.0, true);
        r.check_le(tag + ".minimum_at_centre", centre_distance, g.h, 0.0, true);
        lo = q == 0 ? inf : std::min(lo, inf);
        hi = q == 0 ? inf : std::max(hi, inf);
        if (opt.emit_field && q == 0) {
            r.matrices.push_back({"p_global", g.nx, g.ny, p.values});
            r.matrices.push_back({"u", g.nx, g.ny, field.values});
        }
    }
    r.tables.push_back(std::move(tab));
    r.measure("inf_min", lo);
    r.measure("inf_max", hi);
    r.check_le("inf_stable", hi / lo, 2.0, 0.0, true);
    return r;
}

double ball_fill_ratio(const DomainMask& mask, int label, double radius, Point* best_centre) {
    mask.require_label(label);
    const GridSpec& g = mask.grid;
    if (!(radius >= g.h)) throw InvalidParameter("ball radius below the grid spacing");
    const double rr = radius / g.h;
    const int reach = static_cast<int>(std::floor(rr));
    std::vector<int> half(static_cast<std::size_t>(2 * reach + 1));
    double lattice = 0.0;
    for (int dj = -reach; dj <= reach; ++dj) {
        const int w = static_cast<int>(std::floor(std::sqrt(std::max(0.0, rr * rr - double(dj) * dj))));
        half[static_cast<std::size_t>(dj + reach)] = w;
        lattice += 2.0 * w + 1.0;
    }
    // prefix[j][i] = number of domain cells among columns < i of row j.
    const auto nx = static_cast<std::size_t>(g.nx);
    std::vector<int> prefix(static_cast<std::size_t>(g.ny) * (nx + 1), 0);
    for (int j = 0; j < g.ny; ++j) {
        int* row = &prefix[static_cast<std::size_t>(j) * (nx + 1)];
        for (int i = 0; i < g.nx; ++i) row[i + 1] = row[i] + (mask.label_at(i, j) == label);
    }
    auto row_count = [&](int j, int a, int b) -> long {
        if (j < 0 || j >= g.ny) {
            if (!g.periodic_y) return 0;
            j = ((j % g.ny) + g.ny) % g.ny;
        }
        const int* row = &prefix[static_cast<std::size_t>(j) * (nx + 1)];
        if (!g.periodic_x) {
            a = std::max(a, 0);
            b = std::min(b, g.nx - 1);
            return b >= a ? row[b + 1] - row[a] : 0;
        }
        auto upto = [&](long i) {  // domain cells among wrapped columns < i
            const long q = i >= 0 ? i / g.nx : -((-i + g.nx - 1) / g.nx);
            const long rem = i - q * g.nx;
            return q * row[g.nx] + row[rem];
        };
        return upto(b + 1) - upto(a);
    };
    long best = -1;
    int bi = 0;
    int bj = 0;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            long count = 0;
            for (int dj = -reach; dj <= reach; ++dj) {
                const int w = half[static_cast<std::size_t>(dj + reach)];
                count += row_count(j + dj, i - w, i + w);
            }
            if (count > best) {
                best = count;
                bi = i;
                bj = j;
            }
        }
    }
    if (best_centre) *best_centre = g.cell_center(bi, bj);
    return static_cast<double>(best) / lattice;
}

double strip_disk_fraction(double width, double radius) {
    if (!(width > 0.0) || !(radius > 0.0)) throw InvalidParameter("strip width and radius must be positive");
    // Centred disk: the x-extent at height y is min(1, 2·half-chord).
    const int n = 4000;
    const double step = width / n;
    double sum = 0.0;
    for (int k = 0; k <= n; ++k) {
        const double y = k * step - 0.5 * width;
        const double chord = 2.0 * std::sqrt(std::max(0.0, radius * radius - y * y));
        const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        sum += weight * std::min(1.0, chord);
    }
    return sum * step / 3.0 / (pi * radius * radius);
}

std::vector<BallSearchCase> standard_ball_cases(int cells_per_unit, double strip_width) {
    std::vector<BallSearchCase> cases;
    cases.push_back({"square", rectangle_domain(1.0, 1.0, cells_per_unit), 1, 0.25, 1.0, 4.0});
    cases.push_back({"strip", strip_domain(strip_width, cells_per_unit), 1, 1.0,
                     strip_disk_fraction(strip_width, 1.0), 2.0 * (1.0 + strip_width)});
    const auto model = make_torus_eigenfunction(1, 1);
    const ScalarField field = sample_field(model, natural_grid(model, cells_per_unit));
    DomainMask mask = label_nodal_domains(field);
    const int label = mask.label_at(cells_per_unit / 8, cells_per_unit / 8);
    const double perimeter = boundary_length(mask, label, field);
    cases.push_back({"torus-1-1-domain", std::move(mask), label, 1.0 / std::sqrt(model.eigenvalue()), 1.0, perimeter});
    return cases;
}

ExperimentReport ball_intersection_search(const std::vector<BallSearchCase>& cases, double c1, int n_steps,
                                          double tolerance) {
    ExperimentReport r;
    r.name = "ball-search";
    r.topic = "large ball intersection under heat content isoperimetry";
    r.input("c1", c1);
    r.input("n_steps", std::to_string(n_steps));
    r.input("tolerance", tolerance);
    Table tab{"cases", {"case", "radius", "ratio", "oracle", "centre_x", "centre_y", "c1_measured"}, {}};
    for (std::size_t k = 0; k < cases.size(); ++k) {
        const BallSearchCase& c = cases[k];
        r.input("case." + std::to_string(k + 1), c.name);
        Point centre;
        const double ratio = ball_fill_ratio(c.mask, c.label, c.radius, &centre);
        const double t = c.radius * c.radius;
        const double content = heat_content(c.mask, c.label, t, n_steps);
        const double c1_measured = content / (c.perimeter * c.radius);
        tab.rows.push_back({static_cast<double>(k + 1), c.radius, ratio, c.oracle, centre.x, centre.y, c1_measured});
        r.measure(c.name + ".ratio", ratio);
        r.measure(c.name + ".implied_c2", ratio);
        r.reference(c.name + ".oracle", c.oracle);
        r.check_rel(c.name + ".oracle_match", ratio, c.oracle, tolerance, true);
        r.check_ge(c.name + ".heat_content_hypothesis", c1_measured, c1, 0.0, true);
    }
    r.tables.push_back(std::move(tab));
    return r;
}

} // namespace nodalheat
