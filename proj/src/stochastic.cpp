#include "nodalheat/errors.hpp"
#include "nodalheat/stochastic.hpp"

#include "parallel.hpp"

#include <algorithm>
#include <cmath>

namespace nodalheat {

McEstimate summarize(const std::vector<double>& samples) {
    McEstimate e;
    e.n_paths = samples.size();
    if (samples.empty()) return e;
    double sum = 0.0;
    for (double v : samples) sum += v;
    e.mean = sum / static_cast<double>(samples.size());
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double v : samples) ss += (v - e.mean) * (v - e.mean);
        const double var = ss / static_cast<double>(samples.size() - 1);
        e.std_error = std::sqrt(var / static_cast<double>(samples.size()));
    }
    return e;
}

double effective_dt(const PathEnsembleConfig& cfg, double t) {
    if (cfg.n_paths < 100) throw InvalidParameter("n_paths must be at least 100");
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("horizon must be finite and nonnegative");
    if (cfg.dt < 0.0) throw InvalidParameter("dt must be positive");
    if (t == 0.0) return 0.0;
    if (cfg.dt == 0.0) return t / 1000.0;
    if (cfg.dt > t / 100.0 * (1.0 + 1e-12)) throw InvalidParameter("dt must not exceed t/100");
    return cfg.dt;
}

PathOutcome simulate_path(const Region& region, Point x, double t, double dt, bool bridge, PathStream& rng) {
    PathOutcome out;
    out.end = x;
    if (t <= 0.0) return out;
    const auto n = static_cast<std::size_t>(std::ceil(t / dt * (1.0 - 1e-12)));
    const bool planar = bridge && region.planar_bridge();
    const double full_cap = crossing_cap(dt);
    Point a = x;
    // Distance of a, carried over from the previous step when the bridge is planar.
    double da = planar ? region.probe(a, full_cap) : 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const bool last = k + 1 == n;
        const double h = last ? t - static_cast<double>(k) * dt : dt;
        if (h <= 0.0) break;
        const double s = std::sqrt(2.0 * h);
        const double gx = rng.normal();
        const double gy = rng.normal();
        const Point b{a.x + s * gx, a.y + s * gy};
        ++out.steps;
        bool absorbed = false;
        if (planar) {
            const double cap = last ? crossing_cap(h) : full_cap;
            const double db = region.probe(b, cap);
            if (db < 0.0) {
                absorbed = true;
            } else {
                if (da < cap && db < cap && rng.uniform() < planar_crossing_probability(da, db, h)) absorbed = true;
                da = db;
            }
        } else if (!region.contains(b)) {
            absorbed = true;
        } else if (bridge) {
            const double survive = region.bridge_survival(a, b, h);
            absorbed = survive < 1.0 && rng.uniform() >= survive;
        }
        if (absorbed) {
            out.absorbed = true;
            out.end = b;
            return out;
        }
        a = b;
    }
    out.end = a;
    return out;
}

namespace {

void require_inside(const Region& region, Point x) {
    if (!region.contains(x)) throw OutsideDomain("start point is not inside the domain");
}

bool near_mask_boundary(const DomainMask& mask, const MaskRegion& region, Point x) {
    return region.boundary_distance(x, mask.grid.h) < mask.grid.h;
}

} // namespace

SharedPathEstimate evaluate_shared_paths(const Region& region, const TestFunction& f, Point x, double t,
                                         const PathEnsembleConfig& cfg) {
    require_inside(region, x);
    const double dt = effective_dt(cfg, t);
    const std::size_t n = cfg.n_paths;
    const double fx = f(x);
    std::vector<double> dir(n);
    std::vector<double> hit(n);
    detail::parallel_for(n, [&](std::size_t i) {
        PathStream rng(cfg.seed, i);
        const PathOutcome o = simulate_path(region, x, t, dt, cfg.bridge_correction, rng);
        hit[i] = o.absorbed ? 1.0 : 0.0;
        dir[i] = o.absorbed ? 0.0 : f(o.end);
    });
    std::vector<double> xi(n);
    for (std::size_t i = 0; i < n; ++i) xi[i] = dir[i] + hit[i] * fx;
    SharedPathEstimate s;
    s.dirichlet = summarize(dir);
    s.xi = summarize(xi);
    s.hitting = summarize(hit);
    s.f_start = fx;
    s.identity_residual = std::abs((s.xi.mean - s.dirichlet.mean) - s.hitting.mean * fx);
    return s;
}

McEstimate estimate_hitting_probability(const Region& region, Point x, double t, const PathEnsembleConfig& cfg) {
    require_inside(region, x);
    const double dt = effective_dt(cfg, t);
    std::vector<double> hit(cfg.n_paths);
    detail::parallel_for(cfg.n_paths, [&](std::size_t i) {
        PathStream rng(cfg.seed, i);
        hit[i] = simulate_path(region, x, t, dt, cfg.bridge_correction, rng).absorbed ? 1.0 : 0.0;
    });
    return summarize(hit);
}

McEstimate estimate_hitting_probability(const DomainMask& mask, int label, Point x, double t,
                                        const PathEnsembleConfig& cfg) {
    const MaskRegion region(mask, label);
    McEstimate e = estimate_hitting_probability(region, x, t, cfg);
    e.near_boundary = near_mask_boundary(mask, region, x);
    return e;
}

McEstimate feynman_kac_dirichlet(const Region& region, const TestFunction& f, Point x, double t,
                                 const PathEnsembleConfig& cfg) {
    return evaluate_shared_paths(region, f, x, t, cfg).dirichlet;
}

McEstimate feynman_kac_dirichlet(const EigenfunctionModel& model, const DomainMask& mask, int label, Point x, double t,
                                 const PathEnsembleConfig& cfg) {
    const MaskRegion region(mask, label);
    McEstimate e = feynman_kac_dirichlet(region, [&](Point p) { return model.value(p); }, x, t, cfg);
    e.near_boundary = near_mask_boundary(mask, region, x);
    return e;
}

McEstimate xi_evolution(const Region& region, const TestFunction& f, Point x, double t, const PathEnsembleConfig& cfg) {
    return evaluate_shared_paths(region, f, x, t, cfg).xi;
}

McEstimate xi_evolution(const EigenfunctionModel& model, const DomainMask& mask, int label, Point x, double t,
                        const PathEnsembleConfig& cfg) {
    const MaskRegion region(mask, label);
    McEstimate e = xi_evolution(region, [&](Point p) { return model.value(p); }, x, t, cfg);
    e.near_boundary = near_mask_boundary(mask, region, x);
    return e;
}

SupHitting sup_hitting_check(double a, double t, const PathEnsembleConfig& cfg) {
    if (!(a > 0.0) || !(t > 0.0)) throw InvalidParameter("level and horizon must be positive");
    const double dt = effective_dt(cfg, t);
    const auto n = static_cast<std::size_t>(std::ceil(t / dt * (1.0 - 1e-12)));
    std::vector<double> hit(cfg.n_paths);
    detail::parallel_for(cfg.n_paths, [&](std::size_t i) {
        PathStream rng(cfg.seed, i);
        double x = 0.0;
        double result = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double h = (k + 1 == n) ? t - static_cast<double>(k) * dt : dt;
            const double y = x + std::sqrt(2.0 * h) * rng.normal();
            if (y >= a) {
                result = 1.0;
                break;
            }
            if (cfg.bridge_correction && rng.uniform() < planar_crossing_probability(a - x, a - y, h)) {
                result = 1.0;
                break;
            }
            x = y;
        }
        hit[i] = result;
    });
    return {summarize(hit), std::erfc(a / (2.0 * std::sqrt(t)))};
}

double cone_exit_exact(const ConeSpec& spec) {
    if (!(spec.r > 1.0)) throw InvalidParameter("cone stopping radius must exceed 1");
    if (!(spec.alpha > 0.0) || spec.alpha > 2.0 * pi + 1e-12) throw InvalidParameter("cone opening must lie in (0, 2π]");
    const double q = pi / spec.alpha;
    const double rq = std::pow(spec.r, q);
    // 2 r^q / (r^{2q} - 1) written as 2 / (r^q - r^{-q}) to stay finite for large r.
    return (2.0 / pi) * std::atan(2.0 / (rq - 1.0 / rq));
}

McEstimate cone_exit_mc(const ConeSpec& spec, const PathEnsembleConfig& cfg) {
    cone_exit_exact(spec);
    return cone_exit_mc(spec.alpha, {spec.r}, cfg).front();
}

std::vector<McEstimate> cone_exit_mc(double alpha, const std::vector<double>& radii, const PathEnsembleConfig& cfg) {
    if (radii.empty()) throw InvalidParameter("at least one stopping radius is required");
    for (std::size_t k = 0; k < radii.size(); ++k) {
        cone_exit_exact({alpha, radii[k]});
        if (k > 0 && !(radii[k] > radii[k - 1])) throw InvalidParameter("stopping radii must ascend");
    }
    if (cfg.n_paths < 100) throw InvalidParameter("n_paths must be at least 100");
    if (cfg.dt < 0.0) throw InvalidParameter("dt must be positive");
    const double rel = cfg.dt > 0.0 ? cfg.dt : default_cone_dt;
    if (rel > 0.01) throw InvalidParameter("relative cone step must not exceed 0.01");
    const ConeRegion cone(alpha);
    const std::size_t max_steps = 100000000;

    // reached[i] = number of radii the path got to before leaving the cone.
    std::vector<std::size_t> reached(cfg.n_paths, 0);
    detail::parallel_for(cfg.n_paths, [&](std::size_t i) {
        PathStream rng(cfg.seed, i);
        Point a{1.0, 0.0};
        std::size_t next = 0;
        for (std::size_t step = 0; step < max_steps && next < radii.size(); ++step) {
            const double ra = norm(a);
            const double h = rel * ra * ra;
            const double s = std::sqrt(2.0 * h);
            const double gx = rng.normal();
            const double gy = rng.normal();
            const Point b{a.x + s * gx, a.y + s * gy};
            if (!cone.contains(b)) break;
            if (cfg.bridge_correction) {
                const double survive = cone.bridge_survival(a, b, h);
                if (survive < 1.0 && rng.uniform() >= survive) break;
            }
            const double rb = norm(b);
            while (next < radii.size() && rb >= radii[next]) ++next;
            if (cfg.bridge_correction && next < radii.size()) {
                const double cap = crossing_cap(h);
                const double d0 = radii[next] - ra;
                const double d1 = radii[next] - rb;
                if (d0 < cap && d1 < cap && rng.uniform() < planar_crossing_probability(d0, d1, h)) ++next;
            }
            a = b;
        }
        reached[i] = next;
    });

    std::vector<McEstimate> out;
    std::vector<double> success(cfg.n_paths);
    for (std::size_t k = 0; k < radii.size(); ++k) {
        for (std::size_t i = 0; i < cfg.n_paths; ++i) success[i] = reached[i] > k ? 1.0 : 0.0;
        out.push_back(summarize(success));
    }
    return out;
}

} // namespace nodalheat
