#include "nodalheat/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace nodalheat;

TEST_SUITE("rng") {

TEST_CASE("philox4x32-10 known answers") {
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
          std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
          std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
          std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams depend only on seed and path") {
    PathStream a(7, 3);
    PathStream b(7, 3);
    PathStream c(7, 4);
    PathStream d(8, 3);
    int same_c = 0;
    int same_d = 0;
    for (int k = 0; k < 100; ++k) {
        const double x = a.uniform();
        CHECK(x == b.uniform());
        same_c += x == c.uniform();
        same_d += x == d.uniform();
    }
    CHECK(same_c == 0);
    CHECK(same_d == 0);
}

TEST_CASE("uniforms stay in the open unit interval with the right mean") {
    PathStream s(1, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(std::abs(sum / n - 0.5) < 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("ziggurat normals have standard moments and tails") {
    PathStream s(2, 0);
    const int n = 1000000;
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    int beyond2 = 0;
    int beyond_r = 0;
    for (int k = 0; k < n; ++k) {
        const double z = s.normal();
        m1 += z;
        m2 += z * z;
        m3 += z * z * z;
        m4 += z * z * z * z;
        beyond2 += std::abs(z) > 2.0;
        beyond_r += std::abs(z) > detail::Ziggurat::r;
    }
    m1 /= n; m2 /= n; m3 /= n; m4 /= n;
    CHECK(std::abs(m1) < 4.0 / std::sqrt(n));
    CHECK(std::abs(m2 - 1.0) < 4.0 * std::sqrt(2.0 / n));
    CHECK(std::abs(m3) < 4.0 * std::sqrt(15.0 / n));
    CHECK(std::abs(m4 - 3.0) < 4.0 * std::sqrt(96.0 / n));
    const double p2 = std::erfc(2.0 / std::sqrt(2.0));
    CHECK(std::abs(beyond2 / double(n) - p2) < 4.0 * std::sqrt(p2 / n));
    const double pr = std::erfc(detail::Ziggurat::r / std::sqrt(2.0));
    CHECK(std::abs(beyond_r / double(n) - pr) < 5.0 * std::sqrt(pr / n));
}

TEST_CASE("ziggurat layers have equal area") {
    const auto& z = detail::ziggurat;
    for (int i = 1; i < detail::Ziggurat::layers - 1; ++i) {
        CHECK(z.x[i] * (z.f[i + 1] - z.f[i]) == doctest::Approx(detail::Ziggurat::v).epsilon(1e-9));
    }
    // The top layer closes on x = 0 up to the rounding of r and v.
    const int top = detail::Ziggurat::layers - 1;
    CHECK(z.x[top] * (z.f[top + 1] - z.f[top]) == doctest::Approx(detail::Ziggurat::v).epsilon(1e-3));
    CHECK(z.x[detail::Ziggurat::layers - 1] > 0.0);
}

} // TEST_SUITE
