#pragma once

#include "nodalheat/fields.hpp"
#include "nodalheat/mask.hpp"
#include "nodalheat/report.hpp"
#include "nodalheat/shapes.hpp"
#include "nodalheat/stochastic.hpp"

#include <vector>

namespace nodalheat {

/// Heat content curve of one domain with the fitted √t slope, compared with
/// (2/√π)·perimeter.
struct HeatContentOptions {
    std::vector<double> times;
    int n_steps = 20;
    double tolerance = 0.03;   // relative, on the slope
    double min_r2 = 0.999;
};
ExperimentReport heat_content_experiment(const DomainMask& mask, int label, double perimeter,
                                         const HeatContentOptions& opt);

/// Explicit Dirichlet solution e^{-λt}u: finite differences and Feynman–Kac.
struct ExplicitSolutionOptions {
    int n_steps = 50;
    double fd_tolerance = 0.01;  // max relative error over cells with |u| above 1e-3·‖u‖∞
};
ExperimentReport explicit_solution_check(const EigenfunctionModel& model, const DomainMask& mask, int label, Point x,
                                         double t, const PathEnsembleConfig& cfg, const ExplicitSolutionOptions& opt);

/// Comparison lemma on shared paths at the given points, the near-boundary
/// mean-value bound, and L¹ conservation of e^{tΞ} from uniform starts.
struct ComparisonOptions {
    std::size_t conservation_paths = 100000;
};
ExperimentReport check_comparison_lemma(const EigenfunctionModel& model, const DomainMask& mask, int label,
                                        const std::vector<Point>& points, double t, const PathEnsembleConfig& cfg,
                                        const ComparisonOptions& opt = {});
/// `count` deterministic interior points of a domain, each at least `margin`
/// from its boundary.
std::vector<Point> random_interior_points(const DomainMask& mask, int label, std::size_t count, double margin,
                                          std::uint64_t seed);

/// Per-domain heat content against the comparison-chain right-hand side
/// (1 - e^{-λt}) t^{-1/2} ‖u‖₁ / ‖∇u‖∞, plus nodal length and the
/// constant-free certificate λ^{1/2} Σ_D ‖u‖₁/‖u‖∞.
struct Theorem1Options {
    int cells = 256;        // along x
    double t_factor = 1.0;  // t = t_factor / λ
    int n_steps = 20;
};
ExperimentReport theorem1_certificate(const EigenfunctionModel& model, const Theorem1Options& opt);
/// Torus (m,m) for each m; the per-domain LHS/RHS ratio must stay within a factor 2.
struct Theorem1SweepOptions {
    std::vector<int> modes{1, 2, 3, 4};
    int cells_per_mode = 128;
    int n_steps = 20;
    double length_tolerance = 0.02;
};
ExperimentReport theorem1_sweep(const Theorem1SweepOptions& opt);

/// p_t at the maximum point of |u| on one domain against 1 - e^{-λt}.
struct MaxPointOptions {
    int n_steps = 50;
};
ExperimentReport max_point_survival(const EigenfunctionModel& model, const DomainMask& mask, int label, double t,
                                    const PathEnsembleConfig& cfg, const MaxPointOptions& opt = {});

/// Straight geodesic segment Σ on the unit torus with its tube half width.
struct TubeSpec {
    Point a;
    Point b;
    double half_width = 0.0;
};
/// Threshold c* where the κ = 1 tail bound 1 - √(2/π)c meets 1 - e^{-1},
/// found by bisection.
double thin_domain_threshold_bisection(double kappa);
struct ThinDomainOptions {
    std::vector<double> sweep{0.1, 0.2, 0.3, 0.4, 0.5};
    std::size_t sweep_paths = 20000;
};
/// Escape from the c·λ^{-1/2} tube around Σ by t = 1/λ, and whether a nodal
/// domain of the model fits inside the tube.
ExperimentReport thin_domain_check(const EigenfunctionModel& model, Point a, Point b, double c, int cells,
                                   const PathEnsembleConfig& cfg, const ThinDomainOptions& opt = {});

struct AvoidedCrossingOptions {
    double lambda = 1e4;
    double alpha = 0.75;
    int squares = 9;                 // corridor squares
    int cell_squares = 4;            // squares along the stretched sign cell
    std::size_t paths_per_square = 1000000;
    std::size_t min_survivors = 10;  // per pooled distance in the Gaussian fit
    double growth_constant = 1.0;    // ‖u‖∞ / sup over the middle square ≤ exp(growth_constant·√λ)
};
/// Square covering of a straight corridor of width λ^{-α} with horizon
/// t = λ^{-2α}: p_b, p_ij, p_ie, bookkeeping, Gaussian decay of p_ij, the
/// growth iteration, and inequality (⋄) on a stretched sign cell.
ExperimentReport avoided_crossing_scan(const AvoidedCrossingOptions& opt, const PathEnsembleConfig& cfg);

/// Cone exit law at one (α, r) against the closed form.
ExperimentReport cone_experiment(const ConeSpec& spec, const PathEnsembleConfig& cfg, double bias_allowance);

struct ConeConditionOptions {
    std::vector<int> orders{1, 2, 4, 8};
    std::vector<double> radius_powers{16.0, 64.0, 256.0};  // r^k at the stopping radii
    double tolerance = 0.10;  // relative, widened by 3σ of the fitted slope
};
/// Survival exponent of W(π/k) from the scaling of the exit law, for each
/// vanishing order k of Re((x+iy)^k).
ExperimentReport cone_condition_decay(const ConeConditionOptions& opt, const PathEnsembleConfig& cfg);

struct IsoperimetryOptions {
    std::vector<double> times{1e-4, 2e-4, 4e-4, 8e-4, 1.6e-3};
    int n_steps = 20;
    double bound_factor = 1.2;  // R ≤ bound_factor·2/√π
};
ExperimentReport isoperimetry_sweep(const std::vector<NamedDomain>& family, const IsoperimetryOptions& opt);

struct GlobalSurvivalOptions {
    std::vector<int> modes{1, 2, 3, 4};
    int cells_per_mode = 128;
    int n_steps = 20;
    double symmetry_tolerance = 1e-9;
    bool emit_field = false;  // adds the p field of the first mode as a matrix
};
/// Global p_{1/λ} on torus (m,m) modes: its infimum, where it sits, and the
/// spread of the per-domain minima.
ExperimentReport global_survival_field(const GlobalSurvivalOptions& opt);

/// max over ball centres of |B(x,√t) ∩ Ω| / |B(x,√t)|, counted on the lattice
/// of cell centres (the ball may leave the grid).
double ball_fill_ratio(const DomainMask& mask, int label, double radius, Point* best_centre = nullptr);
struct BallSearchCase {
    std::string name;
    DomainMask mask;
    int label = 1;
    double radius = 0.0;
    double oracle = 0.0;
    double perimeter = 0.0;
};
/// Ball search on the geometric cases, each checked against its oracle, with
/// c₁ = heat content / √t reported per case.
/// c₁ is the heat-content constant ∫p_t / (H¹(∂Ω)√t) the hypothesis asks for.
ExperimentReport ball_intersection_search(const std::vector<BallSearchCase>& cases, double c1, int n_steps,
                                          double tolerance = 0.05);
/// Unit square at r = 1/4, a 1×w strip at r = 1, torus (1,1) domain at r = λ^{-1/2}.
std::vector<BallSearchCase> standard_ball_cases(int cells_per_unit, double strip_width);
/// Largest |strip ∩ disk| / |disk| over centres for the strip [0,1]×[0,w], by quadrature.
double strip_disk_fraction(double width, double radius);

} // namespace nodalheat
