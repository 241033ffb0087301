#include "nodalheat/errors.hpp"
#include "nodalheat/fields.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/rng.hpp"
#include "nodalheat/shapes.hpp"

#include <doctest.h>

#include <cmath>

using namespace nodalheat;

namespace {

struct Sampled {
    ScalarField field;
    DomainMask mask;
};

Sampled sample(const EigenfunctionModel& m, int n) {
    Sampled s{sample_field(m, natural_grid(m, n)), {}};
    s.mask = label_nodal_domains(s.field);
    return s;
}

// Brute-force squared distance to the nearest outside cell (or wall).
double brute_distance2(const GridSpec& g, const std::vector<unsigned char>& outside, int i, int j) {
    double best = 1e300;
    for (int q = 0; q < g.ny; ++q) {
        for (int p = 0; p < g.nx; ++p) {
            if (!outside[g.index(p, q)]) continue;
            double dx = std::abs(p - i);
            double dy = std::abs(q - j);
            if (g.periodic_x) dx = std::min(dx, g.nx - dx);
            if (g.periodic_y) dy = std::min(dy, g.ny - dy);
            best = std::min(best, dx * dx + dy * dy);
        }
    }
    if (!g.periodic_x) best = std::min({best, std::pow(i + 1.0, 2), std::pow(g.nx - double(i), 2)});
    if (!g.periodic_y) best = std::min({best, std::pow(j + 1.0, 2), std::pow(g.ny - double(j), 2)});
    return best;
}

} // namespace

TEST_SUITE("nodal") {

TEST_CASE("torus (m,n) modes: domain count, areas and nodal length 2m + 2n") {
    for (auto [m, n] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 1}}) {
        CAPTURE(m);
        CAPTURE(n);
        const auto s = sample(make_torus_eigenfunction(m, n), 96);
        CHECK(s.mask.count() == 4 * m * n);
        for (int l = 1; l <= s.mask.count(); ++l)
            CHECK(s.mask.area_of(l) == doctest::Approx(1.0 / (4.0 * m * n)).epsilon(1e-9));
        CHECK(extract_nodal_set(s.field).total_length == doctest::Approx(2.0 * m + 2.0 * n).epsilon(1e-6));
    }
}

TEST_CASE("labels are sign-consistent 4-connected components") {
    const auto s = sample(make_disk_eigenfunction(2, 2, 1.0), 120);
    const GridSpec& g = s.mask.grid;
    // Near-zero samples count as positive.
    const double eps = zero_perturbation * s.field.max_abs();
    const auto positive = [&](int i, int j) { return s.field.at(i, j) >= -eps; };
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int l = s.mask.label_at(i, j);
            if (l == 0) continue;
            REQUIRE((positive(i, j) ? 1 : -1) == s.mask.sign_of(l));
            if (i + 1 < g.nx && s.mask.label_at(i + 1, j) != 0 && positive(i + 1, j) == positive(i, j))
                REQUIRE(s.mask.label_at(i + 1, j) == l);
            if (j + 1 < g.ny && s.mask.label_at(i, j + 1) != 0 && positive(i, j + 1) == positive(i, j))
                REQUIRE(s.mask.label_at(i, j + 1) == l);
        }
    }
    // A nodal diameter through a centre disk and a ring gives four domains.
    CHECK(label_nodal_domains(sample_field(make_disk_eigenfunction(1, 2, 1.0),
                                           natural_grid(make_disk_eigenfunction(1, 2, 1.0), 200)))
              .count() == 4);
}

TEST_CASE("rectangle boundary lengths include the outer walls") {
    const auto s = sample(make_rectangle_eigenfunction(2, 1, 1.0, 1.0), 128);
    REQUIRE(s.mask.count() == 2);
    for (int l = 1; l <= 2; ++l) {
        CHECK(boundary_length(s.mask, l, s.field) == doctest::Approx(3.0).epsilon(1e-6));
        CHECK(nodal_boundary_length(s.mask, l, s.field) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("disk domains: nodal diameter plus half of the circle") {
    const auto s = sample(make_disk_eigenfunction(1, 1, 1.0), 200);
    CHECK(s.mask.count() == 2);
    for (int l = 1; l <= 2; ++l) {
        CHECK(nodal_boundary_length(s.mask, l, s.field) == doctest::Approx(2.0).epsilon(0.01));
        CHECK(boundary_length(s.mask, l, s.field) == doctest::Approx(2.0 + pi).epsilon(0.01));
    }
    const auto radial = sample(make_disk_eigenfunction(0, 1, 1.0), 200);
    CHECK(extract_nodal_set(radial.field).total_length == 0.0);
    CHECK(boundary_length(radial.mask, 1, radial.field) == doctest::Approx(2.0 * pi).epsilon(1e-3));
}

TEST_CASE("exact zeros are perturbed, not dropped") {
    // An odd cell count puts cell centres on the nodal line x = 1/2.
    const auto m = make_rectangle_eigenfunction(2, 1, 1.0, 1.0);
    const ScalarField f = sample_field(m, natural_grid(m, 33));
    const NodalSet z = extract_nodal_set(f);
    CHECK(z.perturbed_zeros > 0);
    CHECK(z.total_length == doctest::Approx(1.0).epsilon(0.02));
    CHECK(label_nodal_domains(f).count() == 2);
}

TEST_CASE("distance transform equals brute force on random masks") {
    for (int seed = 0; seed < 6; ++seed) {
        const bool periodic = seed % 2 == 0;
        const GridSpec g = GridSpec::make(23, 17, {0.0, 0.0}, 23.0, 17.0, periodic, periodic);
        PathStream rng(static_cast<std::uint64_t>(seed), 0);
        std::vector<unsigned char> outside(g.size());
        for (auto& o : outside) o = rng.uniform() < 0.08;
        outside[0] = 1;
        const auto d2 = squared_distance_transform(g, outside, true);
        for (int j = 0; j < g.ny; ++j) {
            for (int i = 0; i < g.nx; ++i) {
                if (outside[g.index(i, j)]) {
                    REQUIRE(d2[g.index(i, j)] == 0.0);
                    continue;
                }
                REQUIRE(d2[g.index(i, j)] == brute_distance2(g, outside, i, j));
            }
        }
    }
}

TEST_CASE("inradius of simple domains") {
    const int n = 128;
    const double h = 1.0 / n;
    CHECK(std::abs(domain_inradius(rectangle_domain(1.0, 1.0, n), 1) - 0.5) <= h);
    const auto s = sample(make_torus_eigenfunction(1, 1), n);
    for (int l = 1; l <= 4; ++l) CHECK(std::abs(domain_inradius(s.mask, l) - 0.25) <= h);
    CHECK(std::abs(domain_inradius(strip_domain(0.125, n), 1) - 0.0625) <= h);
}

TEST_CASE("shape masks have their stair-step perimeters") {
    const int n = 64;
    CHECK(mask_perimeter(rectangle_domain(2.0, 0.5, n), 1) == doctest::Approx(5.0));
    CHECK(mask_perimeter(l_shape_domain(n), 1) == doctest::Approx(4.0));
    CHECK(rectangle_domain(1.0, 1.0, n).area_of(1) == doctest::Approx(1.0));
    CHECK(l_shape_domain(n).area_of(1) == doctest::Approx(0.75));
    CHECK_THROWS_AS(rectangle_domain(1.0, 1.0, n).require_label(2), UnknownLabel);
}

} // TEST_SUITE
