#include "nodalheat/errors.hpp"
#include "nodalheat/fields.hpp"
#include "nodalheat/heat.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/shapes.hpp"

#include <doctest.h>

#include <cmath>

using namespace nodalheat;

namespace {

// ∫₀^a of the 1-D survival probability on (0, a) for generator d²/dx².
double interval_survival_mass(double a, double t) {
    double s = 0.0;
    for (int k = 1; k < 20000; k += 2) {
        const double term = 8.0 * a / (k * k * pi * pi) * std::exp(-k * k * pi * pi * t / (a * a));
        s += term;
        if (term < 1e-18) break;
    }
    return s;
}

// Heat content of the a×b rectangle: the survival probability factorises.
double rectangle_content(double a, double b, double t) {
    return a * b - interval_survival_mass(a, t) * interval_survival_mass(b, t);
}

} // namespace

TEST_SUITE("heat") {

TEST_CASE("rectangle heat content matches the product formula") {
    for (auto [a, b, n] : {std::tuple{1.0, 1.0, 256}, std::tuple{2.0, 0.5, 128}}) {
        const DomainMask mask = rectangle_domain(a, b, n);
        for (double t : {1e-4, 1e-3, 1e-2}) {
            CAPTURE(a);
            CAPTURE(t);
            CHECK(heat_content(mask, 1, t, 20) == doctest::Approx(rectangle_content(a, b, t)).epsilon(0.01));
        }
    }
}

TEST_CASE("hitting field obeys the maximum principle and grows in time") {
    const auto m = make_torus_eigenfunction(1, 1);
    const DomainMask mask = label_nodal_domains(sample_field(m, natural_grid(m, 96)));
    const SurvivalField a = solve_hitting_field(mask, 1, 2e-3, 20);
    const SurvivalField b = solve_hitting_field(mask, 1, 8e-3, 20);
    CHECK(a.clip_magnitude <= 1e-8);
    CHECK(b.clip_magnitude <= 1e-8);
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        REQUIRE(a.values[k] >= 0.0);
        REQUIRE(a.values[k] <= 1.0);
        if (mask.labels[k] == 1) REQUIRE(a.values[k] <= b.values[k] + 1e-12);
        else REQUIRE(a.values[k] == 1.0);
    }
}

TEST_CASE("global solve agrees with per-domain solves and is symmetric") {
    const auto m = make_torus_eigenfunction(1, 1);
    const DomainMask mask = label_nodal_domains(sample_field(m, natural_grid(m, 64)));
    const double t = 1.0 / m.eigenvalue();
    const SurvivalField all = solve_hitting_field_all(mask, t, 20);
    for (int l = 1; l <= mask.count(); ++l) {
        const SurvivalField one = solve_hitting_field(mask, l, t, 20);
        for (std::size_t k = 0; k < all.values.size(); ++k) {
            if (mask.labels[k] == l) REQUIRE(all.values[k] == doctest::Approx(one.values[k]).epsilon(1e-12));
        }
    }
    // Quarter-period shifts map domains onto each other.
    const int n = mask.grid.nx;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            REQUIRE(all.at(i, j) == doctest::Approx(all.at((i + n / 2) % n, j)).epsilon(1e-12));
            REQUIRE(all.at(i, j) == doctest::Approx(all.at(j, i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("Dirichlet flow of an eigenfunction decays by exp(-λt)") {
    const auto m = make_torus_eigenfunction(1, 1);
    const ScalarField f = sample_field(m, natural_grid(m, 128));
    const DomainMask mask = label_nodal_domains(f);
    const double t = 1.0 / m.eigenvalue();
    const ScalarField e = dirichlet_semigroup_field(m, mask, 1, t, 50);
    double worst = 0.0;
    for (std::size_t k = 0; k < f.values.size(); ++k) {
        if (mask.labels[k] != 1 || std::abs(f.values[k]) < 1e-3) continue;
        worst = std::max(worst, std::abs(e.values[k] / (std::exp(-1.0) * f.values[k]) - 1.0));
    }
    CHECK(worst < 0.01);
}

TEST_CASE("square-root fit recovers exact data") {
    const std::vector<double> t{1e-4, 2e-4, 4e-4, 8e-4};
    std::vector<double> y;
    for (double s : t) y.push_back(3.0 * std::sqrt(s));
    const SlopeFit f = fit_sqrt_law(t, y);
    CHECK(f.c == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("heat content curve validates its inputs") {
    const DomainMask mask = rectangle_domain(1.0, 1.0, 64);
    CHECK_THROWS_AS(heat_content_curve(mask, 1, {1e-3, 2e-3, 3e-3}, 10), InvalidParameter);
    CHECK_THROWS_AS(solve_hitting_field(mask, 2, 1e-3, 10), UnknownLabel);
    const HeatContentCurve c = heat_content_curve(mask, 1, {1e-3, 1.2e-3, 1.4e-3, 1.6e-3}, 10);
    CHECK(!c.warnings.empty());
}

} // TEST_SUITE
