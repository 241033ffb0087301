#include "nodalheat/bounds.hpp"

#include "nodalheat/errors.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/regions.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

namespace {

// Survival of 1-D Brownian motion (generator d²/dx²) started at the centre of
// (-a, a) up to time t.
double strip_survival(double a, double t) {
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        const double odd = 2.0 * k + 1.0;
        const double term = 4.0 / (odd * pi) * std::exp(-odd * odd * pi * pi * t / (4.0 * a * a));
        sum += (k % 2 == 0) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

// Tail bound of the escape argument: 1 - √(2/π)·c·κ.
double tail_bound(double c, double kappa) { return 1.0 - std::sqrt(2.0 / pi) * c * kappa; }

} // namespace

double thin_domain_threshold_bisection(double kappa) {
    if (!(kappa > 0.0)) throw InvalidParameter("variance factor must be positive");
    const double target = 1.0 - std::exp(-1.0);
    double lo = 0.0;
    double hi = 1.0;
    while (tail_bound(hi, kappa) > target) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (tail_bound(mid, kappa) > target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

ExperimentReport thin_domain_check(const EigenfunctionModel& model, Point a, Point b, double c, int cells,
                                   const PathEnsembleConfig& cfg, const ThinDomainOptions& opt) {
    if (model.kind() != ModelKind::TorusProduct) throw InvalidParameter("thin-domain check runs on torus models");
    if (!(c > 0.0)) throw InvalidParameter("tube constant must be positive");
    ExperimentReport r;
    r.name = "thin-domain";
    r.topic = "thin domain exclusion by tube escape";
    r.input("model", model.describe());
    r.input("segment", format_real(a.x) + "," + format_real(a.y) + ":" + format_real(b.x) + "," + format_real(b.y));
    r.input("c", c);
    r.input("cells", std::to_string(cells));
    r.input("paths", static_cast<double>(cfg.n_paths));
    r.input("seed", static_cast<double>(cfg.seed));

    const double lambda = model.eigenvalue();
    const double t = 1.0 / lambda;
    const double half_width = c / std::sqrt(lambda);
    // Increments of variance 2t instead of t rescale c by 1/√2 in the tail bound.
    const double kappa = 1.0 / std::sqrt(2.0);
    const double max_point = 1.0 - std::exp(-1.0);
    r.measure("lambda", lambda);
    r.measure("half_width", half_width);
    r.reference("kappa", kappa);
    r.reference("max_point_bound", max_point);

    const double c_kappa1 = thin_domain_threshold_bisection(1.0);
    const double c_conv = thin_domain_threshold_bisection(kappa);
    r.measure("threshold_kappa1", c_kappa1);
    r.measure("threshold_convention", c_conv);
    r.reference("threshold_kappa1_closed_form", std::sqrt(pi) / (std::sqrt(2.0) * std::exp(1.0)));
    r.reference("threshold_convention_closed_form", std::sqrt(pi) / std::exp(1.0));
    r.check_abs("threshold_kappa1", c_kappa1, std::sqrt(pi) / (std::sqrt(2.0) * std::exp(1.0)), 1e-5);
    r.check_abs("threshold_convention", c_conv, std::sqrt(pi) / std::exp(1.0), 1e-5);
    r.check_abs("threshold_quoted_0.46105", c_kappa1, 0.46105, 1e-5, true);

    const TubeRegion tube(a, b, half_width);
    const Point mid = tube.wrap(0.5 * (a + b));
    const McEstimate esc = estimate_hitting_probability(tube, mid, t, cfg);
    const double bound_kappa1 = tail_bound(c, 1.0);
    const double bound_conv = tail_bound(c, kappa);
    const double exact_1d = 1.0 - strip_survival(half_width, t);
    r.measure("escape_mc", esc.mean);
    r.measure("escape_std_error", esc.std_error);
    r.reference("escape_bound_kappa1", bound_kappa1);
    r.reference("escape_bound_convention", bound_conv);
    r.reference("escape_strip_exact", exact_1d);
    r.check_ge("escape_above_bound", esc.mean, bound_conv, 3.0 * esc.std_error);
    r.check_ge("strip_exact_above_bound", exact_1d, bound_conv);
    const bool contradiction = esc.mean - 3.0 * esc.std_error > max_point;
    r.measure("contradiction_branch", contradiction ? 1.0 : 0.0);
    if (c < c_conv) r.check_ge("escape_exceeds_max_point_bound", esc.mean, max_point + 3.0 * esc.std_error);

    // Sweep of the escape bound.
    Table sweep{"sweep", {"c", "bound_kappa1", "bound_convention", "strip_exact", "escape_mc", "std_error"}, {}};
    PathEnsembleConfig sc = cfg;
    sc.n_paths = opt.sweep_paths;
    for (double cs : opt.sweep) {
        const double hw = cs / std::sqrt(lambda);
        const TubeRegion ts(a, b, hw);
        const McEstimate e = estimate_hitting_probability(ts, mid, t, sc);
        const double bc = tail_bound(cs, kappa);
        sweep.rows.push_back({cs, tail_bound(cs, 1.0), bc, 1.0 - strip_survival(hw, t), e.mean, e.std_error});
        r.check_ge("sweep_c" + format_real(cs), e.mean, bc, 3.0 * e.std_error);
    }
    r.tables.push_back(std::move(sweep));

    // Does a nodal domain of the model fit inside the tube?
    const ScalarField field = sample_field(model, natural_grid(model, cells));
    const DomainMask mask = label_nodal_domains(field);
    const GridSpec& g = mask.grid;
    std::vector<double> reach(static_cast<std::size_t>(mask.count()), 0.0);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int l = mask.label_at(i, j);
            if (l == 0) continue;
            double& m = reach[static_cast<std::size_t>(l - 1)];
            m = std::max(m, tube.axis_distance(g.cell_center(i, j)) + 0.5 * g.h);
        }
    }
    const auto best = std::min_element(reach.begin(), reach.end());
    const int label = static_cast<int>(best - reach.begin()) + 1;
    const bool contained = half_width >= *best - 1e-12;
    r.measure("containment_half_width", *best);
    r.measure("containment_c", *best * std::sqrt(lambda));
    r.measure("domain_contained", contained ? 1.0 : 0.0);
    if (contradiction) r.check_true("no_domain_in_tube", !contained);
    if (contained) {
        const double p = max_point_survival(model, mask, label, t, sc).measured_value("p_fd");
        r.measure("contained_max_point_p", p);
        r.check_le("contained_max_point_bound", p, max_point, 0.0, true);
        r.note("a nodal domain fits inside the tube: sharpness witness");
    }
    return r;
}

} // namespace nodalheat
