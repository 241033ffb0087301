#include "nodalheat/errors.hpp"
#include "nodalheat/fields.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/regions.hpp"
#include "nodalheat/shapes.hpp"
#include "nodalheat/stochastic.hpp"

#include <doctest.h>

#include <omp.h>

#include <cmath>

using namespace nodalheat;

namespace {

PathEnsembleConfig paths(std::size_t n, std::uint64_t seed = 12345) {
    PathEnsembleConfig c;
    c.n_paths = n;
    c.seed = seed;
    return c;
}

} // namespace

TEST_SUITE("stochastic") {

TEST_CASE("cone exit closed form: quoted values, limits and conformal invariance") {
    CHECK(cone_exit_exact({pi / 2, 2.0}) == doctest::Approx(0.3119).epsilon(1e-4 / 0.3119));
    CHECK(cone_exit_exact({pi, 2.0}) == doctest::Approx(0.5903).epsilon(1e-4 / 0.5903));
    CHECK(cone_exit_exact({pi, 1.0 + 1e-9}) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(cone_exit_exact({pi, 1e8}) < 1e-7);
    // z -> z^(π/α) maps W(α) onto the half plane and radius r to r^(π/α).
    for (double alpha : {pi / 5, pi / 3, 0.7, 1.9 * pi}) {
        for (double r : {1.3, 2.0, 7.5}) {
            CHECK(cone_exit_exact({alpha, r}) == doctest::Approx(cone_exit_exact({pi, std::pow(r, pi / alpha)})));
        }
    }
    CHECK_THROWS_AS(cone_exit_exact({pi, 0.5}), InvalidParameter);
}

TEST_CASE("sup of 1-D Brownian motion matches the reflection principle") {
    const SupHitting s = sup_hitting_check(0.5, 0.1, paths(20000));
    CHECK(std::abs(s.mc.mean - s.exact) <= 3.0 * s.mc.std_error + 0.01);
}

TEST_CASE("half-plane hitting probability is erfc(a / 2√t)") {
    const HalfPlaneRegion half({0.0, 0.0}, {0.0, 1.0});
    const McEstimate e = estimate_hitting_probability(half, {0.3, 0.2}, 0.02, paths(20000));
    CHECK(std::abs(e.mean - std::erfc(0.2 / (2.0 * std::sqrt(0.02)))) <= 3.0 * e.std_error + 0.01);
}

TEST_CASE("bridge correction removes most of the discrete-monitoring bias") {
    const HalfPlaneRegion half({0.0, 0.0}, {0.0, 1.0});
    PathEnsembleConfig c = paths(20000);
    c.dt = 0.02 / 100;
    const double exact = std::erfc(0.2 / (2.0 * std::sqrt(0.02)));
    const McEstimate with = estimate_hitting_probability(half, {0.0, 0.2}, 0.02, c);
    c.bridge_correction = false;
    const McEstimate without = estimate_hitting_probability(half, {0.0, 0.2}, 0.02, c);
    CHECK(without.mean < with.mean);
    CHECK(std::abs(with.mean - exact) < std::abs(without.mean - exact));
}

TEST_CASE("shared paths satisfy the Xi identity to rounding") {
    const auto m = make_rectangle_eigenfunction(1, 1, 1.0, 1.0);
    const MaskRegion region(rectangle_domain(1.0, 1.0, 64), 1);
    const auto f = [&](Point p) { return m.value(p); };
    for (Point x : {Point{0.5, 0.5}, Point{0.1, 0.8}, Point{0.03, 0.03}}) {
        const SharedPathEstimate s = evaluate_shared_paths(region, f, x, 0.01, paths(2000));
        CHECK(s.identity_residual <= 1e-12);
        CHECK(s.hitting.mean >= 0.0);
        CHECK(s.hitting.mean <= 1.0);
    }
}

TEST_CASE("Feynman-Kac reproduces exp(-λt)u on a rectangle") {
    const auto m = make_rectangle_eigenfunction(1, 1, 1.0, 1.0);
    const DomainMask mask = label_nodal_domains(sample_field(m, natural_grid(m, 128)));
    const double t = 1.0 / m.eigenvalue();
    const Point x{0.3, 0.6};
    PathEnsembleConfig c = paths(20000);
    const McEstimate e = feynman_kac_dirichlet(m, mask, 1, x, t, c);
    const double exact = std::exp(-1.0) * m.value(x);
    CHECK(std::abs(e.mean - exact) <= 3.0 * e.std_error + std::sqrt(t / 1000.0) * exact);
}

TEST_CASE("ensembles are identical for any thread count") {
    const MaskRegion region(l_shape_domain(32), 1);
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const McEstimate a = estimate_hitting_probability(region, {0.3, 0.3}, 0.01, paths(3000, 5));
    omp_set_num_threads(3);
    const McEstimate b = estimate_hitting_probability(region, {0.3, 0.3}, 0.01, paths(3000, 5));
    omp_set_num_threads(saved);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    const McEstimate c = estimate_hitting_probability(region, {0.3, 0.3}, 0.01, paths(3000, 6));
    CHECK(c.mean != a.mean);
}

TEST_CASE("mask regions measure distance to cell faces") {
    const MaskRegion square(rectangle_domain(1.0, 1.0, 64), 1);
    CHECK(square.contains({0.5, 0.5}));
    CHECK(!square.contains({1.2, 0.5}));
    CHECK(!square.contains({-1e-9, 0.5}));
    CHECK(square.boundary_distance({0.1, 0.7}, 1.0) == doctest::Approx(0.1));
    CHECK(square.boundary_distance({0.5, 0.5}, 0.05) == doctest::Approx(0.05));
    CHECK(square.probe({2.0, 0.5}, 1.0) == -1.0);
    const auto m = make_torus_eigenfunction(1, 1);
    const MaskRegion torus(label_nodal_domains(sample_field(m, natural_grid(m, 64))), 1);
    CHECK(torus.contains(Point{0.1, 0.1}) == torus.contains(Point{1.1, -0.9}));
}

TEST_CASE("ensemble configuration is validated") {
    PathEnsembleConfig c = paths(1000);
    CHECK(effective_dt(c, 1.0) == doctest::Approx(1e-3));
    c.dt = 0.05;
    CHECK_THROWS_AS(effective_dt(c, 1.0), InvalidParameter);
    c = paths(10);
    CHECK_THROWS_AS(effective_dt(c, 1.0), InvalidParameter);
    CHECK(summarize({1.0, 1.0, 1.0}).std_error == 0.0);
}

} // TEST_SUITE
