#include "nodalheat/errors.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>

namespace nodalheat {

namespace {

struct Run {
    std::size_t offset = 0;  // into AdiSolver::cells_
    std::size_t length = 0;
    bool cyclic = false;
    bool contiguous = false;  // cells are idx[0], idx[0]+1, ...
};

// Maximal runs of equal nonzero key along each grid line. Neighbours outside
// a run (other key, or beyond a wall) absorb through the antisymmetric ghost
// value -u, which puts the boundary on the shared cell face.
class AdiSolver {
public:
    AdiSolver(const GridSpec& g, const std::vector<int>& key) : g_(g) {
        // x runs index the row-major array, y runs the column-major copy, so
        // both sweeps walk memory contiguously.
        std::vector<std::size_t> line;
        std::vector<int> line_key;
        for (int j = 0; j < g.ny; ++j) {
            line.clear();
            line_key.clear();
            for (int i = 0; i < g.nx; ++i) {
                line.push_back(g.index(i, j));
                line_key.push_back(key[g.index(i, j)]);
            }
            add_runs(line, line_key, g.periodic_x, x_runs_);
        }
        for (int i = 0; i < g.nx; ++i) {
            line.clear();
            line_key.clear();
            for (int j = 0; j < g.ny; ++j) {
                line.push_back(static_cast<std::size_t>(i) * g.ny + j);
                line_key.push_back(key[g.index(i, j)]);
            }
            add_runs(line, line_key, g.periodic_y, y_runs_);
        }
        for (auto* runs : {&x_runs_, &y_runs_}) {
            for (Run& r : *runs) {
                r.contiguous = true;
                for (std::size_t q = 1; q < r.length; ++q) {
                    r.contiguous = r.contiguous && cells_[r.offset + q] == cells_[r.offset] + q;
                }
            }
        }
        for (const Run& r : x_runs_) max_run_ = std::max(max_run_, r.length);
        for (const Run& r : y_runs_) max_run_ = std::max(max_run_, r.length);
    }

    // Advances u (row-major, zero Dirichlet data on run ends) to time t.
    void evolve(std::vector<double>& u, double t, int n_steps) const {
        const double dt = t / n_steps;
        const double half = 0.5 * dt;
        std::vector<double> ut(u.size(), 0.0);
        std::vector<double> w(u.size(), 0.0);
        std::vector<double> wt(u.size(), 0.0);
        const double r = half / (g_.h * g_.h);
        const FactorSet fx = factor_runs(x_runs_, r);
        const FactorSet fy = factor_runs(y_runs_, r);
        for (int k = 0; k < 2; ++k) {
            implicit(x_runs_, fx, u, half);
            to_columns(u, ut);
            implicit(y_runs_, fy, ut, half);
            to_rows(ut, u);
        }
        to_columns(u, ut);
        for (int s = 1; s < n_steps; ++s) {
            explicit_half(y_runs_, ut, wt, half);
            to_rows(wt, w);
            implicit(x_runs_, fx, w, half);
            explicit_half(x_runs_, w, u, half);
            to_columns(u, ut);
            implicit(y_runs_, fy, ut, half);
        }
        to_rows(ut, u);
        for (double v : u) {
            if (!std::isfinite(v)) throw SolverError("heat solver produced a non-finite value", v);
        }
    }

private:
    void add_runs(const std::vector<std::size_t>& line, const std::vector<int>& key, bool periodic,
                  std::vector<Run>& runs) {
        const std::size_t n = line.size();
        auto k = [&](std::size_t i) { return key[i % n]; };
        std::size_t start = 0;
        if (periodic) {
            bool uniform = true;
            for (std::size_t i = 1; i < n; ++i) uniform = uniform && k(i) == k(0);
            if (uniform) {
                if (k(0) != 0) {
                    runs.push_back({cells_.size(), n, true});
                    cells_.insert(cells_.end(), line.begin(), line.end());
                }
                return;
            }
            while (k(start) == k(start + n - 1)) ++start;
        }
        std::size_t i = 0;
        while (i < n) {
            const int kv = k(start + i);
            std::size_t len = 1;
            while (i + len < n && k(start + i + len) == kv) ++len;
            if (kv != 0) {
                runs.push_back({cells_.size(), len, false});
                for (std::size_t q = 0; q < len; ++q) cells_.push_back(line[(start + i + q) % n]);
            }
            i += len;
        }
    }

    // Blocked transposes between the row-major and column-major layouts.
    void to_columns(const std::vector<double>& rows, std::vector<double>& cols) const {
        transpose(rows.data(), cols.data(), g_.nx, g_.ny);
    }
    void to_rows(const std::vector<double>& cols, std::vector<double>& rows) const {
        transpose(cols.data(), rows.data(), g_.ny, g_.nx);
    }
    // src has `height` rows of `width` entries; dst gets `width` rows of `height`.
    static void transpose(const double* src, double* dst, int width, int height) {
        constexpr int block = 32;
        const int by = (height + block - 1) / block;
#pragma omp parallel for schedule(static)
        for (int b = 0; b < by; ++b) {
            const int j0 = b * block;
            const int j1 = std::min(height, j0 + block);
            for (int i0 = 0; i0 < width; i0 += block) {
                const int i1 = std::min(width, i0 + block);
                for (int j = j0; j < j1; ++j) {
                    for (int i = i0; i < i1; ++i) {
                        dst[static_cast<std::size_t>(i) * height + j] = src[static_cast<std::size_t>(j) * width + i];
                    }
                }
            }
        }
    }

    // Factorisation of (I - r·L) for one run length; L has ghost value -u
    // beyond open ends. For cyclic runs the Sherman–Morrison pieces are kept too.
    struct Factor {
        std::vector<double> inv_beta;
        std::vector<double> cp;
        std::vector<double> z;
        double gamma = 0.0;
        double corner = 0.0;
        double denom = 1.0;
    };

    static Factor factor(std::size_t m, double r, bool cyclic) {
        Factor f;
        double lo = r;
        double hi = r;
        if (cyclic && m >= 3) {
            f.gamma = -(1.0 + 2.0 * r);
            f.corner = -r;
            lo = -f.gamma;
            hi = -f.corner * f.corner / f.gamma;
        }
        f.inv_beta.resize(m);
        f.cp.assign(m, 0.0);
        for (std::size_t q = 0; q < m; ++q) {
            double b = 1.0 + 2.0 * r;
            if (q == 0) b += lo;
            if (q + 1 == m) b += hi;
            if (q > 0) {
                f.cp[q] = -r * f.inv_beta[q - 1];
                b += r * f.cp[q];
            }
            if (!(std::abs(b) > 1e-300)) throw SolverError("singular tridiagonal pivot", b);
            f.inv_beta[q] = 1.0 / b;
        }
        if (cyclic && m >= 3) {
            f.z.assign(m, 0.0);
            f.z[0] = f.gamma;
            f.z[m - 1] = f.corner;
            sweep(f, r, f.z.data(), m);
            f.denom = 1.0 + f.z[0] + f.corner * f.z[m - 1] / f.gamma;
        }
        return f;
    }

    static void sweep(const Factor& f, double r, double* x, std::size_t m) {
        x[0] *= f.inv_beta[0];
        for (std::size_t q = 1; q < m; ++q) x[q] = (x[q] + r * x[q - 1]) * f.inv_beta[q];
        for (std::size_t q = m - 1; q-- > 0;) x[q] -= f.cp[q + 1] * x[q + 1];
    }

    // Solves (I - r·L) x = x in place.
    static void solve(const Factor& f, double r, bool cyclic, double* x, std::size_t m) {
        if (!cyclic || m >= 3) {
            sweep(f, r, x, m);
            if (cyclic) {
                const double fact = (x[0] + f.corner * x[m - 1] / f.gamma) / f.denom;
                for (std::size_t q = 0; q < m; ++q) x[q] -= fact * f.z[q];
            }
        } else if (m == 2) {
            const double a = 1.0 + 2.0 * r;
            const double b = -2.0 * r;
            const double det = a * a - b * b;
            const double x0 = (a * x[0] - b * x[1]) / det;
            x[1] = (a * x[1] - b * x[0]) / det;
            x[0] = x0;
        }
    }

    // Factor table for the distinct (length, cyclic) pairs of a run list.
    struct FactorSet {
        std::vector<Factor> factors;
        std::vector<std::size_t> of_run;
    };

    static FactorSet factor_runs(const std::vector<Run>& runs, double r) {
        FactorSet fs;
        std::map<std::pair<std::size_t, bool>, std::size_t> seen;
        fs.of_run.reserve(runs.size());
        for (const Run& run : runs) {
            const auto key = std::pair{run.length, run.cyclic};
            auto it = seen.find(key);
            if (it == seen.end()) {
                it = seen.emplace(key, fs.factors.size()).first;
                fs.factors.push_back(factor(run.length, r, run.cyclic));
            }
            fs.of_run.push_back(it->second);
        }
        return fs;
    }

    // dst = src + coef·L src along the runs (cells outside every run untouched).
    void explicit_half(const std::vector<Run>& runs, const std::vector<double>& src, std::vector<double>& dst,
                       double coef) const {
        const double r = coef / (g_.h * g_.h);
        const auto nr = static_cast<std::int64_t>(runs.size());
#pragma omp parallel
        {
            std::vector<double> buf(max_run_);
            std::vector<double> out(max_run_);
#pragma omp for schedule(static)
            for (std::int64_t ri = 0; ri < nr; ++ri) {
                const Run& run = runs[static_cast<std::size_t>(ri)];
                const std::size_t* idx = &cells_[run.offset];
                const std::size_t m = run.length;
                const double* v = run.contiguous ? &src[idx[0]] : buf.data();
                double* o = run.contiguous ? &dst[idx[0]] : out.data();
                if (!run.contiguous) {
                    for (std::size_t q = 0; q < m; ++q) buf[q] = src[idx[q]];
                }
                if (m == 1) {
                    o[0] = run.cyclic ? v[0] : v[0] * (1.0 - 4.0 * r);
                } else {
                    const double first_lo = run.cyclic ? v[m - 1] : -v[0];
                    const double last_hi = run.cyclic ? v[0] : -v[m - 1];
                    o[0] = v[0] + r * (first_lo - 2.0 * v[0] + v[1]);
                    for (std::size_t q = 1; q + 1 < m; ++q) o[q] = v[q] + r * (v[q - 1] - 2.0 * v[q] + v[q + 1]);
                    o[m - 1] = v[m - 1] + r * (v[m - 2] - 2.0 * v[m - 1] + last_hi);
                }
                if (!run.contiguous) {
                    for (std::size_t q = 0; q < m; ++q) dst[idx[q]] = out[q];
                }
            }
        }
    }

    // Solves (I - coef·L) v = u along every run, in place.
    void implicit(const std::vector<Run>& runs, const FactorSet& fs, std::vector<double>& u, double coef) const {
        const double r = coef / (g_.h * g_.h);
        const auto nr = static_cast<std::int64_t>(runs.size());
#pragma omp parallel
        {
            std::vector<double> buf(max_run_);
#pragma omp for schedule(static)
            for (std::int64_t ri = 0; ri < nr; ++ri) {
                const Run& run = runs[static_cast<std::size_t>(ri)];
                const Factor& f = fs.factors[fs.of_run[static_cast<std::size_t>(ri)]];
                const std::size_t* idx = &cells_[run.offset];
                const std::size_t m = run.length;
                if (run.contiguous) {
                    solve(f, r, run.cyclic, &u[idx[0]], m);
                    continue;
                }
                for (std::size_t q = 0; q < m; ++q) buf[q] = u[idx[q]];
                solve(f, r, run.cyclic, buf.data(), m);
                for (std::size_t q = 0; q < m; ++q) u[idx[q]] = buf[q];
            }
        }
    }

    GridSpec g_;
    std::vector<std::size_t> cells_;
    std::vector<Run> x_runs_;
    std::vector<Run> y_runs_;
    std::size_t max_run_ = 1;
};

void check_steps(double t, int n_steps) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidParameter("time must be finite and nonnegative");
    if (n_steps < 10) throw InvalidParameter("n_steps must be at least 10");
}

SurvivalField solve_with_key(const DomainMask& mask, const std::vector<int>& key, double t, int n_steps) {
    check_steps(t, n_steps);
    SurvivalField p;
    p.grid = mask.grid;
    p.t = t;
    p.in_domain.resize(key.size());
    for (std::size_t k = 0; k < key.size(); ++k) p.in_domain[k] = key[k] != 0;
    std::vector<double> q(key.size(), 0.0);
    for (std::size_t k = 0; k < key.size(); ++k) q[k] = key[k] != 0 ? 1.0 : 0.0;
    if (t > 0.0) AdiSolver(mask.grid, key).evolve(q, t, n_steps);
    p.values.assign(key.size(), 1.0);
    for (std::size_t k = 0; k < key.size(); ++k) {
        if (!key[k]) continue;
        const double c = std::clamp(q[k], 0.0, 1.0);
        p.clip_magnitude = std::max(p.clip_magnitude, std::abs(c - q[k]));
        p.values[k] = 1.0 - c;
    }
    return p;
}

} // namespace

SurvivalField solve_hitting_field(const DomainMask& mask, int label, double t, int n_steps) {
    mask.require_label(label);
    std::vector<int> key(mask.labels.size());
    for (std::size_t k = 0; k < key.size(); ++k) key[k] = mask.labels[k] == label ? 1 : 0;
    return solve_with_key(mask, key, t, n_steps);
}

SurvivalField solve_hitting_field_all(const DomainMask& mask, double t, int n_steps) {
    if (mask.count() == 0) throw EmptyDomain("mask has no domains");
    return solve_with_key(mask, mask.labels, t, n_steps);
}

double content_of(const SurvivalField& p, const DomainMask& mask, int label) {
    mask.require_label(label);
    double sum = 0.0;
    for (std::size_t k = 0; k < mask.labels.size(); ++k) {
        if (mask.labels[k] == label) sum += p.values[k];
    }
    return sum * mask.grid.cell_area();
}

double heat_content(const DomainMask& mask, int label, double t, int n_steps) {
    mask.require_label(label);
    check_steps(t, n_steps);
    if (t == 0.0) return 0.0;
    return content_of(solve_hitting_field(mask, label, t, n_steps), mask, label);
}

SlopeFit fit_sqrt_law(const std::vector<double>& times, const std::vector<double>& contents) {
    if (times.size() != contents.size() || times.empty()) throw InvalidParameter("fit needs matching nonempty arrays");
    double sy = 0.0;
    double ss = 0.0;
    double sw = 0.0;
    double swy = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] > 0.0)) throw InvalidParameter("fit times must be positive");
        const double s = std::sqrt(times[k]);
        sy += contents[k];
        ss += s;
        sw += 1.0 / s;
        swy += contents[k] / s;
    }
    SlopeFit fit;
    fit.c = sy / ss;
    const double mean = swy / sw;
    double res = 0.0;
    double tot = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double s = std::sqrt(times[k]);
        const double w = 1.0 / s;
        res += w * (contents[k] - fit.c * s) * (contents[k] - fit.c * s);
        tot += w * (contents[k] - mean) * (contents[k] - mean);
    }
    fit.r2 = tot > 0.0 ? 1.0 - res / tot : (res == 0.0 ? 1.0 : 0.0);
    return fit;
}

HeatContentCurve heat_content_curve(const DomainMask& mask, int label, const std::vector<double>& times, int n_steps) {
    mask.require_label(label);
    if (times.size() < 4) throw InvalidParameter("heat content curve needs at least four times");
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] > 0.0)) throw InvalidParameter("curve times must be positive");
        if (k > 0 && !(times[k] > times[k - 1])) throw InvalidParameter("curve times must ascend");
    }
    HeatContentCurve curve;
    if (times.back() < 10.0 * times.front() * (1.0 - 1e-12)) curve.warnings.push_back("time span shorter than a decade");
    const double r = domain_inradius(mask, label);
    if (times.back() > r * r) curve.warnings.push_back("times exceed the squared inradius");
    curve.times = times;
    for (double t : times) curve.contents.push_back(heat_content(mask, label, t, n_steps));
    for (std::size_t k = 1; k <= times.size(); ++k) {
        const std::vector<double> tt(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(k));
        const std::vector<double> cc(curve.contents.begin(), curve.contents.begin() + static_cast<std::ptrdiff_t>(k));
        curve.running_slope.push_back(fit_sqrt_law(tt, cc).c);
    }
    curve.fit = fit_sqrt_law(times, curve.contents);
    return curve;
}

EvolutionResult evolve_dirichlet(const DomainMask& mask, int label, const ScalarField& initial, double t, int n_steps) {
    mask.require_label(label);
    check_steps(t, n_steps);
    if (!(initial.grid == mask.grid)) throw InvalidParameter("initial data and mask grids differ");
    std::vector<int> key(mask.labels.size());
    std::vector<double> u(mask.labels.size(), 0.0);
    bool nonneg = true;
    bool nonpos = true;
    for (std::size_t k = 0; k < key.size(); ++k) {
        key[k] = mask.labels[k] == label ? 1 : 0;
        if (!key[k]) continue;
        u[k] = initial.values[k];
        nonneg = nonneg && u[k] >= 0.0;
        nonpos = nonpos && u[k] <= 0.0;
    }
    if (t > 0.0) AdiSolver(mask.grid, key).evolve(u, t, n_steps);
    EvolutionResult out;
    out.field.grid = mask.grid;
    out.field.values.assign(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!key[k]) continue;
        double v = u[k];
        if (nonneg && v < 0.0) {
            out.clip_magnitude = std::max(out.clip_magnitude, -v);
            v = 0.0;
        } else if (nonpos && !nonneg && v > 0.0) {
            out.clip_magnitude = std::max(out.clip_magnitude, v);
            v = 0.0;
        }
        out.field.values[k] = v;
    }
    return out;
}

ScalarField dirichlet_semigroup_field(const EigenfunctionModel& model, const DomainMask& mask, int label, double t,
                                      int n_steps) {
    const ScalarField u0 = sample_field(model, mask.grid);
    ScalarField out = evolve_dirichlet(mask, label, u0, t, n_steps).field;
    out.warnings = u0.warnings;
    return out;
}

} // namespace nodalheat
