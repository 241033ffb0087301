#pragma once

#include "nodalheat/geometry.hpp"
#include "nodalheat/grid.hpp"
#include "nodalheat/mask.hpp"

#include <functional>
#include <string>

namespace nodalheat {

enum class ModelKind { TorusProduct, RectangleDirichlet, DiskBessel, ConeHarmonic };

/// Analytic Laplacian eigenfunction (or, for the cone kind, a harmonic model
/// with λ = 0) with exact values and gradients.
class EigenfunctionModel {
public:
    ModelKind kind() const { return kind_; }
    double eigenvalue() const { return lambda_; }
    /// First and second integer parameter: (m, n), (angular m, radial k) or (k, 0).
    int first_index() const { return i1_; }
    int second_index() const { return i2_; }
    /// Vanishing order at the origin for the cone kind; 0 otherwise.
    int vanishing_order() const { return kind_ == ModelKind::ConeHarmonic ? i1_ : 0; }
    double side_a() const { return a_; }
    double side_b() const { return b_; }
    double radius() const { return a_; }

    double value(Point p) const;
    Point gradient(Point p) const;

    bool periodic() const { return kind_ == ModelKind::TorusProduct; }
    /// Natural domain: unit torus, the rectangle, the disk's bounding box, or [-1,1]^2 for the cone.
    Box natural_domain() const;
    /// False outside the disk for the disk kind.
    bool defined_at(Point p) const;
    std::string describe() const;

    friend EigenfunctionModel make_torus_eigenfunction(int m, int n);
    friend EigenfunctionModel make_rectangle_eigenfunction(int m, int n, double a, double b);
    friend EigenfunctionModel make_disk_eigenfunction(int m, int k, double radius);
    friend EigenfunctionModel make_cone_model(int k);

private:
    EigenfunctionModel() = default;

    ModelKind kind_ = ModelKind::TorusProduct;
    int i1_ = 0;
    int i2_ = 0;
    double a_ = 1.0;
    double b_ = 1.0;
    double lambda_ = 0.0;
    double bessel_zero_ = 0.0;
};

/// sin(2πmx) sin(2πny) on the unit torus, λ = 4π²(m² + n²).
EigenfunctionModel make_torus_eigenfunction(int m, int n);
/// sin(mπx/a) sin(nπy/b) on [0,a]×[0,b], λ = π²(m²/a² + n²/b²).
EigenfunctionModel make_rectangle_eigenfunction(int m, int n, double a, double b);
/// J_m(j_{m,k} r/R) cos(mθ) on the disk of radius R centred at the origin.
EigenfunctionModel make_disk_eigenfunction(int m, int k, double radius);
/// Re((x+iy)^k), harmonic; adjacent nodal domains are cones of opening π/k.
EigenfunctionModel make_cone_model(int k);

/// k-th positive zero of J_m.
double bessel_zero(int m, int k);

struct NormBundle {
    double l1 = 0.0;
    double linf = 0.0;
    double grad_linf = 0.0;
};

/// Midpoint sums and cell-centre suprema of u over one labelled domain.
NormBundle compute_norms(const EigenfunctionModel& model, const DomainMask& mask, int label);
/// Same, over every labelled cell of the mask.
NormBundle compute_norms(const EigenfunctionModel& model, const DomainMask& mask);

/// n x n' grid over the model's natural domain with n cells along x.
GridSpec natural_grid(const EigenfunctionModel& model, int n);
/// Smallest cell count along x that gives ten samples per wavelength.
int min_cells_per_axis(const EigenfunctionModel& model);

/// Samples u at cell centres; records a warning when h exceeds a tenth of the wavelength.
ScalarField sample_field(const EigenfunctionModel& model, const GridSpec& grid);
ScalarField sample_function(const std::function<double(Point)>& f, const GridSpec& grid);

} // namespace nodalheat
