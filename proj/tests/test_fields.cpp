#include "nodalheat/fields.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/rng.hpp"

#include <doctest.h>

#include <cmath>

using namespace nodalheat;

namespace {

// Five-point Laplacian of the analytic model at p.
double fd_laplacian(const EigenfunctionModel& m, Point p, double e) {
    return (m.value({p.x + e, p.y}) + m.value({p.x - e, p.y}) + m.value({p.x, p.y + e}) + m.value({p.x, p.y - e}) -
            4.0 * m.value(p)) / (e * e);
}

} // namespace

TEST_SUITE("fields") {

TEST_CASE("eigenvalues follow the closed forms") {
    CHECK(make_torus_eigenfunction(1, 1).eigenvalue() == doctest::Approx(8.0 * pi * pi));
    CHECK(make_torus_eigenfunction(2, 3).eigenvalue() == doctest::Approx(4.0 * pi * pi * 13.0));
    CHECK(make_rectangle_eigenfunction(2, 1, 2.0, 1.0).eigenvalue() == doctest::Approx(2.0 * pi * pi));
    CHECK(make_cone_model(3).eigenvalue() == 0.0);
    CHECK(make_cone_model(3).vanishing_order() == 3);
    const auto d = make_disk_eigenfunction(0, 1, 2.0);
    CHECK(d.eigenvalue() == doctest::Approx(std::pow(2.404825557695773 / 2.0, 2)));
}

TEST_CASE("bessel zeros match tabulated values") {
    CHECK(bessel_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(bessel_zero(0, 2) == doctest::Approx(5.520078110286311).epsilon(1e-12));
    CHECK(bessel_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-12));
    CHECK(bessel_zero(2, 3) == doctest::Approx(11.61984117214906).epsilon(1e-12));
}

TEST_CASE("models satisfy -Δu = λu and carry exact gradients") {
    const EigenfunctionModel models[] = {make_torus_eigenfunction(1, 2), make_rectangle_eigenfunction(2, 3, 1.0, 1.5),
                                         make_disk_eigenfunction(2, 1, 1.0), make_cone_model(3)};
    PathStream rng(99, 0);
    for (const auto& m : models) {
        CAPTURE(m.describe());
        const Box b = m.natural_domain();
        const double scale = std::max(1.0, m.eigenvalue());
        for (int k = 0; k < 50; ++k) {
            const Point p{b.lo.x + (0.1 + 0.8 * rng.uniform()) * b.width(),
                          b.lo.y + (0.1 + 0.8 * rng.uniform()) * b.height()};
            if (!m.defined_at(p) || std::hypot(p.x, p.y) < 0.05) continue;
            const double e = 1e-4;
            CHECK(-fd_laplacian(m, p, e) == doctest::Approx(m.eigenvalue() * m.value(p)).epsilon(1e-3).scale(scale));
            const Point g = m.gradient(p);
            const double gx = (m.value({p.x + 1e-6, p.y}) - m.value({p.x - 1e-6, p.y})) / 2e-6;
            const double gy = (m.value({p.x, p.y + 1e-6}) - m.value({p.x, p.y - 1e-6})) / 2e-6;
            CHECK(g.x == doctest::Approx(gx).epsilon(1e-6).scale(std::sqrt(scale)));
            CHECK(g.y == doctest::Approx(gy).epsilon(1e-6).scale(std::sqrt(scale)));
        }
    }
}

TEST_CASE("torus norms converge to the closed forms") {
    const auto m = make_torus_eigenfunction(1, 1);
    const ScalarField f = sample_field(m, natural_grid(m, 256));
    CHECK(f.warnings.empty());
    const NormBundle n = compute_norms(m, label_nodal_domains(f));
    CHECK(n.l1 == doctest::Approx(4.0 / (pi * pi)).epsilon(1e-4));
    CHECK(n.linf == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(n.linf <= 1.0);
    CHECK(n.grad_linf == doctest::Approx(2.0 * pi).epsilon(1e-3));
}

TEST_CASE("coarse sampling records a warning") {
    const auto m = make_torus_eigenfunction(4, 4);
    CHECK(!sample_field(m, natural_grid(m, 16)).warnings.empty());
    CHECK(sample_field(m, natural_grid(m, min_cells_per_axis(m))).warnings.empty());
}

TEST_CASE("invalid model parameters are rejected") {
    CHECK_THROWS(make_torus_eigenfunction(0, 1));
    CHECK_THROWS(make_rectangle_eigenfunction(1, 1, -1.0, 1.0));
    CHECK_THROWS(make_disk_eigenfunction(0, 0, 1.0));
    CHECK_THROWS(make_cone_model(0));
}

} // TEST_SUITE
