#include "nodalheat/bounds.hpp"

#include "nodalheat/errors.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

namespace {

struct DomainTerms {
    double lhs = 0.0;  // ∫_D p_t
    double rhs = 0.0;  // (1 - e^{-λt}) t^{-1/2} ‖u‖₁ / ‖∇u‖∞
    NormBundle norms;
    double boundary = 0.0;
};

struct Certificate {
    double lambda = 0.0;
    double t = 0.0;
    double nodal_length = 0.0;
    double boundary_sum = 0.0;
    double theorem3 = 0.0;        // λ^{1/2} Σ ‖u‖₁/‖u‖∞
    double chain_length = 0.0;    // Σ rhs / √t
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<DomainTerms> domains;
};

Certificate certify(const EigenfunctionModel& model, int cells, double t_factor, int n_steps) {
    Certificate c;
    c.lambda = model.eigenvalue();
    if (!(c.lambda > 0.0)) throw InvalidParameter("the certificate needs a model with positive eigenvalue");
    c.t = t_factor / c.lambda;
    const ScalarField field = sample_field(model, natural_grid(model, cells));
    const DomainMask mask = label_nodal_domains(field);
    c.nodal_length = extract_nodal_set(field).total_length;
    const SurvivalField p = solve_hitting_field_all(mask, c.t, n_steps);
    const double factor = (1.0 - std::exp(-c.lambda * c.t)) / std::sqrt(c.t);
    for (int label = 1; label <= mask.count(); ++label) {
        DomainTerms d;
        d.lhs = content_of(p, mask, label);
        d.norms = compute_norms(model, mask, label);
        d.rhs = factor * d.norms.l1 / d.norms.grad_linf;
        d.boundary = boundary_length(mask, label, field);
        c.boundary_sum += d.boundary;
        c.theorem3 += d.norms.l1 / d.norms.linf;
        c.chain_length += d.rhs / std::sqrt(c.t);
        const double ratio = d.lhs / d.rhs;
        c.min_ratio = label == 1 ? ratio : std::min(c.min_ratio, ratio);
        c.max_ratio = label == 1 ? ratio : std::max(c.max_ratio, ratio);
        c.domains.push_back(d);
    }
    c.theorem3 *= std::sqrt(c.lambda);
    return c;
}

} // namespace

ExperimentReport theorem1_certificate(const EigenfunctionModel& model, const Theorem1Options& opt) {
    ExperimentReport r;
    r.name = "theorem1";
    r.topic = "nodal length lower bound from heat content";
    r.input("model", model.describe());
    r.input("cells", std::to_string(opt.cells));
    r.input("t_factor", opt.t_factor);
    r.input("n_steps", std::to_string(opt.n_steps));
    const Certificate c = certify(model, opt.cells, opt.t_factor, opt.n_steps);
    r.measure("lambda", c.lambda);
    r.measure("t", c.t);
    r.measure("nodal_length", c.nodal_length);
    r.measure("boundary_length_sum", c.boundary_sum);
    r.measure("domains", static_cast<double>(c.domains.size()));
    r.measure("theorem3_certificate", c.theorem3);
    r.measure("chain_length_certificate", c.chain_length);
    r.measure("min_ratio", c.min_ratio);
    r.measure("max_ratio", c.max_ratio);
    r.check_le("theorem3_below_length", c.theorem3, c.nodal_length);
    r.check_ge("ratio_positive", c.min_ratio, 0.0);
    Table tab{"domains", {"label", "lhs", "rhs", "ratio", "l1", "linf", "grad_linf", "boundary"}, {}};
    for (std::size_t k = 0; k < c.domains.size(); ++k) {
        const DomainTerms& d = c.domains[k];
        tab.rows.push_back({static_cast<double>(k + 1), d.lhs, d.rhs, d.lhs / d.rhs, d.norms.l1, d.norms.linf,
                            d.norms.grad_linf, d.boundary});
    }
    r.tables.push_back(std::move(tab));
    return r;
}

ExperimentReport theorem1_sweep(const Theorem1SweepOptions& opt) {
    if (opt.modes.empty()) throw InvalidParameter("the sweep needs at least one mode");
    ExperimentReport r;
    r.name = "theorem1-sweep";
    r.topic = "nodal length lower bound across torus modes (m,m)";
    r.input("cells_per_mode", std::to_string(opt.cells_per_mode));
    r.input("n_steps", std::to_string(opt.n_steps));
    r.input("length_tolerance", opt.length_tolerance);
    Table tab{"modes", {"m", "lambda", "nodal_length", "exact_length", "boundary_sum", "theorem3", "theorem3_exact",
                        "chain_length", "min_ratio", "max_ratio"}, {}};
    double lo = 0.0;
    double hi = 0.0;
    std::vector<double> log_lambda;
    std::vector<double> log_chain;
    for (std::size_t k = 0; k < opt.modes.size(); ++k) {
        const int m = opt.modes[k];
        const auto model = make_torus_eigenfunction(m, m);
        const Certificate c = certify(model, opt.cells_per_mode * m, 1.0, opt.n_steps);
        // sin(2πmx) sin(2πmy) vanishes on 2m vertical and 2m horizontal unit circles.
        const double exact_length = 4.0 * m;
        const double exact_t3 = 8.0 * std::sqrt(2.0) * m / pi;
        const std::string tag = "m" + std::to_string(m);
        r.check_rel(tag + ".length", c.nodal_length, exact_length, opt.length_tolerance);
        r.check_rel(tag + ".boundary_sum", c.boundary_sum, 2.0 * exact_length, opt.length_tolerance);
        // Cell-centre sampling of ‖u‖∞ and the midpoint rule err at O(h²).
        const double sampling = std::pow(2.0 * pi / opt.cells_per_mode, 2);
        r.check_rel(tag + ".theorem3", c.theorem3, exact_t3, std::max(1e-3, sampling));
        r.check_le(tag + ".theorem3_below_length", c.theorem3, c.nodal_length);
        lo = k == 0 ? c.min_ratio : std::min(lo, c.min_ratio);
        hi = k == 0 ? c.max_ratio : std::max(hi, c.max_ratio);
        log_lambda.push_back(std::log(c.lambda));
        log_chain.push_back(std::log(c.chain_length));
        tab.rows.push_back({static_cast<double>(m), c.lambda, c.nodal_length, exact_length, c.boundary_sum,
                            c.theorem3, exact_t3, c.chain_length, c.min_ratio, c.max_ratio});
    }
    r.tables.push_back(std::move(tab));
    r.measure("ratio_min", lo);
    r.measure("ratio_max", hi);
    r.measure("ratio_spread", hi / lo);
    r.check_le("ratio_stable", hi / lo, 2.0);
    if (log_lambda.size() >= 2) {
        // Least-squares slope of log(chain certificate) against log λ.
        const double n = static_cast<double>(log_lambda.size());
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t k = 0; k < log_lambda.size(); ++k) {
            sx += log_lambda[k];
            sy += log_chain[k];
            sxx += log_lambda[k] * log_lambda[k];
            sxy += log_lambda[k] * log_chain[k];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        r.measure("chain_exponent", slope);
        r.reference("general_exponent", 0.25);
        r.reference("torus_length_exponent", 0.5);
        r.check_ge("chain_exponent_at_least_quarter", slope, 0.25, 0.0, true);
    }
    return r;
}

} // namespace nodalheat
