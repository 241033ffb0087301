#include "nodalheat/bounds.hpp"
#include "nodalheat/nodal.hpp"
#include "nodalheat/regions.hpp"

#include <doctest.h>

#include <cmath>

using namespace nodalheat;

TEST_SUITE("bounds") {

TEST_CASE("thin-domain thresholds solve the tail equation") {
    CHECK(thin_domain_threshold_bisection(1.0) ==
          doctest::Approx(std::sqrt(pi) / (std::sqrt(2.0) * std::exp(1.0))).epsilon(1e-12));
    CHECK(thin_domain_threshold_bisection(1.0 / std::sqrt(2.0)) ==
          doctest::Approx(std::sqrt(pi) / std::exp(1.0)).epsilon(1e-12));
    CHECK_THROWS_AS(thin_domain_threshold_bisection(0.0), InvalidParameter);
}

TEST_CASE("strip-disk fraction: limits and lattice agreement") {
    CHECK(strip_disk_fraction(0.2, 0.1) == doctest::Approx(1.0).epsilon(1e-6));
    // Disk much wider than the strip: the fraction tends to 2rw / (π r²)
    // with the chord clipped at the strip length 1.
    CHECK(strip_disk_fraction(1e-3, 0.4) == doctest::Approx(2.0 * 0.4 * 1e-3 / (pi * 0.16)).epsilon(1e-3));
    for (double r : {0.1, 0.3, 1.0}) {
        CAPTURE(r);
        const double lattice = ball_fill_ratio(strip_domain(0.125, 256), 1, r);
        CHECK(lattice == doctest::Approx(strip_disk_fraction(0.125, r)).epsilon(0.02));
    }
}

TEST_CASE("ball fill ratio wraps on periodic grids") {
    const GridSpec g = GridSpec::square(32, {0.0, 0.0}, 1.0, true);
    const DomainMask full = DomainMask::from_labels(g, std::vector<int>(g.size(), 1));
    CHECK(ball_fill_ratio(full, 1, 0.3) == 1.0);
    CHECK(ball_fill_ratio(full, 1, 1.7) == 1.0);
    Point centre;
    CHECK(ball_fill_ratio(rectangle_domain(1.0, 1.0, 64), 1, 0.25, &centre) == 1.0);
    CHECK(centre.x >= 0.25 - 1e-12);
    CHECK(centre.x <= 0.75 + 1e-12);
    CHECK_THROWS_AS(ball_fill_ratio(full, 1, 1e-3), InvalidParameter);
}

TEST_CASE("random interior points respect the margin and the seed") {
    const auto m = make_torus_eigenfunction(1, 1);
    const DomainMask mask = label_nodal_domains(sample_field(m, natural_grid(m, 128)));
    const auto a = random_interior_points(mask, 2, 10, 0.05, 3);
    const auto b = random_interior_points(mask, 2, 10, 0.05, 3);
    const auto c = random_interior_points(mask, 2, 10, 0.05, 4);
    REQUIRE(a.size() == 10);
    const MaskRegion region(mask, 2);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].x == b[k].x);
        CHECK(a[k].y == b[k].y);
        CHECK(region.contains(a[k]));
        CHECK(region.boundary_distance(a[k], 1.0) >= 0.05);
    }
    CHECK((a[0].x != c[0].x || a[0].y != c[0].y));
}

TEST_CASE("theorem-1 certificate stays below the nodal length") {
    Theorem1Options opt;
    opt.cells = 128;
    const ExperimentReport r = theorem1_certificate(make_torus_eigenfunction(1, 1), opt);
    CHECK(r.verdict() == Verdict::Pass);
    CHECK(r.measured_value("theorem3_certificate") == doctest::Approx(8.0 * std::sqrt(2.0) / pi).epsilon(3e-3));
    CHECK(r.measured_value("nodal_length") == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("verdicts: report-only checks never fail a report") {
    ExperimentReport r;
    r.check_le("soft", 2.0, 1.0, 0.0, true);
    CHECK(r.verdict() == Verdict::ReportOnly);
    r.check_abs("hard", 1.0, 1.05, 0.1);
    CHECK(r.verdict() == Verdict::Pass);
    r.check_rel("broken", 1.0, 2.0, 0.1);
    CHECK(r.verdict() == Verdict::Fail);
    CHECK(!r.find_check("soft")->passed);
    CHECK(r.find_check("missing") == nullptr);
}

TEST_CASE("verdicts are monotone in the tolerance across seeds") {
    // A run that passes with allowance b also passes with 2b; a run that
    // fails with 2b also fails with b.
    int passes = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        PathEnsembleConfig cfg;
        cfg.n_paths = 1000;
        cfg.seed = seed;
        const ConeSpec spec{pi / 3, 4.0};
        const ExperimentReport narrow = cone_experiment(spec, cfg, 0.0);
        const ExperimentReport wide = cone_experiment(spec, cfg, 0.01);
        CHECK(narrow.measured_value("mc") == wide.measured_value("mc"));
        if (narrow.verdict() == Verdict::Pass) CHECK(wide.verdict() == Verdict::Pass);
        if (wide.verdict() == Verdict::Fail) CHECK(narrow.verdict() == Verdict::Fail);
        passes += wide.verdict() == Verdict::Pass;
    }
    // With a 3σ band nearly every seed passes.
    CHECK(passes >= 18);
}

TEST_CASE("isoperimetry family has the expected members") {
    const auto family = isoperimetry_family(64);
    REQUIRE(family.size() == 7);
    CHECK(family.front().name == "square");
    CHECK(family.front().perimeter == doctest::Approx(4.0));
    CHECK(family.back().natural_time == doctest::Approx(1.0 / (8.0 * pi * pi)));
    CHECK(family.back().perimeter == doctest::Approx(2.0).epsilon(1e-6));
}

} // TEST_SUITE
