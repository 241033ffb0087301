#pragma once

#include "nodalheat/fields.hpp"
#include "nodalheat/grid.hpp"
#include "nodalheat/mask.hpp"

#include <string>
#include <vector>

namespace nodalheat {

/// Hitting probabilities p_t on the cells of one domain (or of every domain
/// for the global solve). Cells outside the solved domains hold 1.
struct SurvivalField {
    GridSpec grid;
    double t = 0.0;
    std::vector<double> values;
    std::vector<unsigned char> in_domain;
    /// Largest amount removed when clipping the solution into [0,1].
    double clip_magnitude = 0.0;

    double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// p_t for one domain: heat equation with p = 1 on the boundary faces and
/// p = 0 at t = 0. Peaceman–Rachford ADI (Crank–Nicolson on each line) with
/// the first step replaced by two implicit-Euler half steps. Boundaries sit
/// on the faces of out-of-domain cells.
SurvivalField solve_hitting_field(const DomainMask& mask, int label, double t, int n_steps);
/// Every labelled domain at once; cells of other labels absorb.
SurvivalField solve_hitting_field_all(const DomainMask& mask, double t, int n_steps);

/// ∫_D p_t dx as a cell-area-weighted sum.
double heat_content(const DomainMask& mask, int label, double t, int n_steps);
double content_of(const SurvivalField& p, const DomainMask& mask, int label);

struct SlopeFit {
    double c = 0.0;   // content ≈ c·sqrt(t)
    double r2 = 0.0;  // weighted coefficient of determination
};
/// Least squares through the origin with weights 1/sqrt(t): c = Σy / Σ sqrt(t).
SlopeFit fit_sqrt_law(const std::vector<double>& times, const std::vector<double>& contents);

struct HeatContentCurve {
    std::vector<double> times;
    std::vector<double> contents;
    std::vector<double> running_slope;  // fit over the first k points
    SlopeFit fit;
    std::vector<std::string> warnings;
};
/// Each time is solved from t = 0 with n_steps steps. Throws InvalidParameter
/// for fewer than four times; warns when the span is under a decade or a time
/// exceeds the squared inradius.
HeatContentCurve heat_content_curve(const DomainMask& mask, int label, const std::vector<double>& times, int n_steps);

struct EvolutionResult {
    ScalarField field;
    /// Sign violations removed from one-signed data (0 for mixed-sign data).
    double clip_magnitude = 0.0;
};
/// Dirichlet heat flow of `initial` on one domain (zero on its boundary faces).
EvolutionResult evolve_dirichlet(const DomainMask& mask, int label, const ScalarField& initial, double t, int n_steps);
/// e^{tΔ_D} applied to the model sampled on the domain.
ScalarField dirichlet_semigroup_field(const EigenfunctionModel& model, const DomainMask& mask, int label, double t,
                                      int n_steps);

} // namespace nodalheat
