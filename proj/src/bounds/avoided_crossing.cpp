#include "nodalheat/bounds.hpp"

#include "nodalheat/errors.hpp"
#include "nodalheat/regions.hpp"

#include "../parallel.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

namespace {

constexpr int absorbed_class = -1;
constexpr int exit_class = -2;
constexpr std::uint64_t start_tag = 0x2545f491u;

// Where a path ended: absorbed, outside the covered squares, or square index.
int classify(const PathOutcome& o, double w, int squares) {
    if (o.absorbed) return absorbed_class;
    const double q = o.end.x / w;
    if (!(q >= 0.0 && q < squares)) return exit_class;
    return std::min(squares - 1, static_cast<int>(q));
}

struct SquareCounts {
    std::size_t absorbed = 0;
    std::size_t exited = 0;
    std::vector<std::size_t> landed;
};

} // namespace

ExperimentReport avoided_crossing_scan(const AvoidedCrossingOptions& opt, const PathEnsembleConfig& cfg) {
    if (!(opt.alpha > 0.5)) throw InvalidParameter("alpha must exceed 1/2");
    if (!(opt.lambda > 1.0)) throw InvalidParameter("lambda must exceed 1");
    if (opt.squares < 3 || opt.cell_squares < 3) throw InvalidParameter("at least three squares are required");
    if (opt.paths_per_square < 100) throw InvalidParameter("at least 100 paths per square are required");
    const double w = std::pow(opt.lambda, -opt.alpha);
    const double t = w * w;  // λ^{-2α}
    const double dt = cfg.dt > 0.0 ? cfg.dt : t / 100.0;
    if (dt > t / 100.0 * (1.0 + 1e-12)) throw InvalidParameter("dt must not exceed t/100");
    const int n_sq = opt.squares;
    const std::size_t n = opt.paths_per_square;

    ExperimentReport r;
    r.name = "avoided-crossing";
    r.topic = "avoided crossings: square covering, transition masses and growth";
    r.input("lambda", opt.lambda);
    r.input("alpha", opt.alpha);
    r.input("squares", std::to_string(n_sq));
    r.input("cell_squares", std::to_string(opt.cell_squares));
    r.input("paths_per_square", static_cast<double>(n));
    r.input("dt", dt);
    r.input("seed", static_cast<double>(cfg.seed));
    r.measure("width", w);
    r.measure("horizon", t);
    r.note("horizon t = lambda^(-2 alpha), the value consistent with exp(-lambda t) = exp(-lambda^(1-2 alpha)); "
           "the alternative reading t = exp(-lambda^alpha) is not used");

    // Corridor: the strip 0 < y < w; walls absorb, the ends stay open.
    const BoxRegion strip({{-1e6, 0.0}, {1e6, w}});
    std::vector<SquareCounts> counts(static_cast<std::size_t>(n_sq));
    std::vector<int> cls(n);
    for (int i = 0; i < n_sq; ++i) {
        detail::parallel_for(n, [&](std::size_t k) {
            const std::uint64_t id = static_cast<std::uint64_t>(i) * n + k;
            PathStream start(cfg.seed ^ start_tag, id);
            const Point x0{(i + start.uniform()) * w, start.uniform() * w};
            PathStream rng(cfg.seed, id);
            cls[k] = classify(simulate_path(strip, x0, t, dt, cfg.bridge_correction, rng), w, n_sq);
        });
        SquareCounts& c = counts[static_cast<std::size_t>(i)];
        c.landed.assign(static_cast<std::size_t>(n_sq), 0);
        for (int v : cls) {
            if (v == absorbed_class) ++c.absorbed;
            else if (v == exit_class) ++c.exited;
            else ++c.landed[static_cast<std::size_t>(v)];
        }
    }

    const double nn = static_cast<double>(n);
    auto se = [&](double p) { return std::sqrt(std::max(p * (1.0 - p), 1.0 / nn) / nn); };
    Table squares{"squares", {"i", "p_b", "sum_p_ij", "p_ie", "total", "sigma"}, {}};
    Table matrix{"p_ij", {"i", "j", "p_ij", "count"}, {}};
    double pb_mean = 0.0;
    for (int i = 1; i + 1 < n_sq; ++i) pb_mean += static_cast<double>(counts[static_cast<std::size_t>(i)].absorbed) / nn;
    pb_mean /= (n_sq - 2);
    for (int i = 0; i < n_sq; ++i) {
        const SquareCounts& c = counts[static_cast<std::size_t>(i)];
        const double pb = static_cast<double>(c.absorbed) / nn;
        const double pe = static_cast<double>(c.exited) / nn;
        double sum = 0.0;
        for (int j = 0; j < n_sq; ++j) {
            const double p = static_cast<double>(c.landed[static_cast<std::size_t>(j)]) / nn;
            sum += p;
            matrix.rows.push_back({static_cast<double>(i + 1), static_cast<double>(j + 1), p,
                                   static_cast<double>(c.landed[static_cast<std::size_t>(j)])});
        }
        const double sigma = std::sqrt(se(pb) * se(pb) + se(sum) * se(sum) + se(pe) * se(pe));
        squares.rows.push_back({static_cast<double>(i + 1), pb, sum, pe, pb + sum + pe, sigma});
        r.check_abs("bookkeeping_R" + std::to_string(i + 1), pb + sum + pe, 1.0, 3.0 * sigma);
        if (i > 0 && i + 1 < n_sq) {
            r.check_abs("p_b_translation_R" + std::to_string(i + 1), pb, pb_mean, 3.0 * std::sqrt(2.0) * se(pb));
        }
    }
    r.tables.push_back(std::move(squares));
    r.tables.push_back(std::move(matrix));
    r.measure("p_b_interior_mean", pb_mean);

    // Gaussian decay of p_ij in |i - j|, pooled over pairs at equal distance.
    Table pooled{"pooled", {"d", "p", "count", "pairs"}, {}};
    std::vector<double> xs;
    std::vector<double> ys;
    for (int d = 0; d < n_sq; ++d) {
        std::size_t total = 0;
        std::size_t pairs = 0;
        for (int i = 0; i < n_sq; ++i) {
            for (int j : {i - d, i + d}) {
                if (j < 0 || j >= n_sq || (d == 0 && j != i + d)) continue;
                total += counts[static_cast<std::size_t>(i)].landed[static_cast<std::size_t>(j)];
                ++pairs;
            }
        }
        const double p = static_cast<double>(total) / (nn * static_cast<double>(pairs));
        pooled.rows.push_back({static_cast<double>(d), p, static_cast<double>(total), static_cast<double>(pairs)});
        if (total >= opt.min_survivors) {
            xs.push_back(static_cast<double>(d) * d);
            ys.push_back(std::log(p));
        }
    }
    r.tables.push_back(std::move(pooled));
    r.measure("gaussian_fit_points", static_cast<double>(xs.size()));
    if (xs.size() >= 3) {
        const double m = static_cast<double>(xs.size());
        double sx = 0.0, sy = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sx += xs[k];
            sy += ys[k];
        }
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t k = 0; k < xs.size(); ++k) {
            sxx += (xs[k] - sx / m) * (xs[k] - sx / m);
            sxy += (xs[k] - sx / m) * (ys[k] - sy / m);
            syy += (ys[k] - sy / m) * (ys[k] - sy / m);
        }
        const double gamma = -sxy / sxx;
        const double r2 = sxy * sxy / (sxx * syy);
        r.measure("gaussian_gamma", gamma);
        r.measure("gaussian_r2", r2);
        r.reference("diffusive_gamma", w * w / (4.0 * t));
        r.check_ge("gaussian_fit_r2", r2, 0.95);
    } else {
        r.check_true("gaussian_fit_resolved", false);
    }

    // Growth iteration from the middle square: (⋄) forces a neighbour sup at
    // least e^{-λt}/(1 - p_b) times larger.
    const SquareCounts& mid = counts[static_cast<std::size_t>(n_sq / 2)];
    const double survive = 1.0 - static_cast<double>(mid.absorbed) / nn;
    const double decay = std::exp(-opt.lambda * t);
    if (survive > 0.0) {
        const double growth = decay / survive;
        const double n_max = 1.0 + 2.0 * opt.growth_constant * std::sqrt(opt.lambda) / std::log(growth);
        const double length = n_max * w;
        r.measure("growth_factor", growth);
        r.measure("implied_max_squares", n_max);
        r.measure("implied_max_length", length);
        r.measure("implied_C", length / (std::pow(opt.lambda, 0.5 - opt.alpha) * std::log(opt.lambda)));
        r.check_ge("growth_factor_above_one", growth, 1.0, 0.0, true);
    } else {
        r.note("no path survived the middle square; growth factor unbounded at this sample size");
    }

    // Inequality (⋄) on a stretched sign cell [0, L]×[0, w] of sin(πx/L) sin(πy/w).
    const int nc = opt.cell_squares;
    const double cell_len = nc * w;
    const double lambda_cell = pi * pi * (1.0 / (cell_len * cell_len) + 1.0 / (w * w));
    const BoxRegion cell({{0.0, 0.0}, {cell_len, w}});
    auto u = [&](Point p) { return std::sin(pi * p.x / cell_len) * std::sin(pi * p.y / w); };
    std::vector<double> sup(static_cast<std::size_t>(nc));
    std::vector<Point> argsup(static_cast<std::size_t>(nc));
    for (int i = 0; i < nc; ++i) {
        const Point p{std::clamp(0.5 * cell_len, i * w, (i + 1) * w), 0.5 * w};
        argsup[static_cast<std::size_t>(i)] = p;
        sup[static_cast<std::size_t>(i)] = u(p);
    }
    const double decay_cell = std::exp(-lambda_cell * t);
    r.measure("cell_lambda", lambda_cell);
    r.reference("cell_decay", decay_cell);
    Table diamond{"diamond", {"i", "lhs", "rhs", "rhs_sigma", "fk", "fk_sigma", "fk_exact"}, {}};
    std::vector<double> rhs(n);
    std::vector<double> fk(n);
    // Paths that start exactly on the sup point are kept inside the open cell.
    for (int i = 0; i < nc; ++i) {
        Point x0 = argsup[static_cast<std::size_t>(i)];
        x0.x = std::clamp(x0.x, 1e-9 * w, cell_len - 1e-9 * w);
        detail::parallel_for(n, [&](std::size_t k) {
            PathStream rng(cfg.seed + 1, static_cast<std::uint64_t>(i) * n + k);
            const PathOutcome o = simulate_path(cell, x0, t, dt, cfg.bridge_correction, rng);
            const int c = classify(o, w, nc);
            rhs[k] = c >= 0 ? sup[static_cast<std::size_t>(c)] : (c == exit_class ? 1.0 : 0.0);
            fk[k] = o.absorbed ? 0.0 : u(o.end);
        });
        const McEstimate er = summarize(rhs);
        const McEstimate ef = summarize(fk);
        const double lhs = decay_cell * sup[static_cast<std::size_t>(i)];
        diamond.rows.push_back({static_cast<double>(i + 1), lhs, er.mean, er.std_error, ef.mean, ef.std_error,
                                decay_cell * u(x0)});
        // Both samples take values in [0,1], so their variance is at most
        // their mean; the error under the null value keeps rare-event counts
        // of zero from reading as exact.
        const double null_sigma = std::sqrt(lhs / static_cast<double>(n));
        if (i > 0 && i + 1 < nc) {
            r.check_le("diamond_R" + std::to_string(i + 1), lhs, er.mean, 3.0 * std::max(er.std_error, null_sigma));
        }
        const double fk_exact = decay_cell * u(x0);
        r.check_abs("cell_feynman_kac_R" + std::to_string(i + 1), ef.mean, fk_exact,
                    3.0 * std::max(ef.std_error, std::sqrt(fk_exact / static_cast<double>(n))), true);
    }
    r.tables.push_back(std::move(diamond));
    return r;
}

} // namespace nodalheat
