#pragma once

#include "nodalheat/fields.hpp"
#include "nodalheat/geometry.hpp"
#include "nodalheat/mask.hpp"
#include "nodalheat/regions.hpp"
#include "nodalheat/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace nodalheat {

/// Brownian ensemble parameters. Increments are Normal(0, 2 dt) per
/// coordinate (generator Δ). dt = 0 selects t/1000.
struct PathEnsembleConfig {
    std::size_t n_paths = 100000;
    double dt = 0.0;
    std::uint64_t seed = 12345;
    bool bridge_correction = true;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_paths = 0;
    bool near_boundary = false;  // start point within one cell of the boundary
};

/// Mean and standard error (sample deviation / sqrt(n)) of per-path values,
/// summed in index order.
McEstimate summarize(const std::vector<double>& samples);

using TestFunction = std::function<double(Point)>;

struct PathOutcome {
    bool absorbed = false;
    Point end;            // unwrapped position at absorption or at time t
    std::size_t steps = 0;
};

/// Simulates one path from x up to time t with step dt (the last step is
/// shortened to land on t). With `bridge`, a surviving step is killed with
/// the region's bridge crossing probability.
PathOutcome simulate_path(const Region& region, Point x, double t, double dt, bool bridge, PathStream& rng);

/// Step actually used for horizon t; throws InvalidParameter when dt > t/100
/// or the configuration is otherwise invalid.
double effective_dt(const PathEnsembleConfig& cfg, double t);

/// Dirichlet, Ξ and hitting estimates computed from one shared ensemble.
struct SharedPathEstimate {
    McEstimate dirichlet;  // E_x[f(ω_t) ψ]
    McEstimate xi;         // E_x[f(ω_t) ψ] + E_x[1 - ψ] f(x)
    McEstimate hitting;    // E_x[1 - ψ]
    double f_start = 0.0;
    /// |(xi - dirichlet) - hitting·f(x)| over the ensemble means.
    double identity_residual = 0.0;
};

SharedPathEstimate evaluate_shared_paths(const Region& region, const TestFunction& f, Point x, double t,
                                         const PathEnsembleConfig& cfg);

McEstimate estimate_hitting_probability(const Region& region, Point x, double t, const PathEnsembleConfig& cfg);
McEstimate estimate_hitting_probability(const DomainMask& mask, int label, Point x, double t,
                                        const PathEnsembleConfig& cfg);

McEstimate feynman_kac_dirichlet(const Region& region, const TestFunction& f, Point x, double t,
                                 const PathEnsembleConfig& cfg);
McEstimate feynman_kac_dirichlet(const EigenfunctionModel& model, const DomainMask& mask, int label, Point x, double t,
                                 const PathEnsembleConfig& cfg);

McEstimate xi_evolution(const Region& region, const TestFunction& f, Point x, double t, const PathEnsembleConfig& cfg);
McEstimate xi_evolution(const EigenfunctionModel& model, const DomainMask& mask, int label, Point x, double t,
                        const PathEnsembleConfig& cfg);

struct SupHitting {
    McEstimate mc;
    double exact = 0.0;  // erfc(a / (2 sqrt t))
};
/// P(sup_{s<t} B(s) > a) for 1-D Brownian motion with variance 2s.
SupHitting sup_hitting_check(double a, double t, const PathEnsembleConfig& cfg);

struct ConeSpec {
    double alpha = pi / 2;  // opening angle in (0, 2π]
    double r = 2.0;         // stopping radius > 1
};

/// P(B[0, T(r)] ⊂ W(alpha)) from (1,0): (2/π) arctan(2 r^{π/α} / (r^{2π/α} - 1)).
double cone_exit_exact(const ConeSpec& spec);

/// Relative step used by the cone simulation when cfg.dt is 0.
inline constexpr double default_cone_dt = 1e-3;

/// Monte Carlo estimate from (1,0). The step is cfg.dt·|x|² (the exit law is
/// scale invariant), with bridge corrections on the walls and the stopping circle.
McEstimate cone_exit_mc(const ConeSpec& spec, const PathEnsembleConfig& cfg);
/// One ensemble scored at several ascending stopping radii.
std::vector<McEstimate> cone_exit_mc(double alpha, const std::vector<double>& radii, const PathEnsembleConfig& cfg);

} // namespace nodalheat
