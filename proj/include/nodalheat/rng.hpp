#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace nodalheat {

/// Philox4x32-10 block function (Salmon et al. counter-based generator).
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t m0 = 0xD2511F53u;
    constexpr std::uint32_t m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u;
    constexpr std::uint32_t w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(m0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(m1) * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

namespace detail {

/// Layer table of a 256-layer ziggurat for exp(-x^2/2).
struct Ziggurat {
    static constexpr int layers = 256;
    static constexpr double r = 3.6541528853610088;
    static constexpr double v = 0.00492867323399;
    double x[layers + 1];
    double f[layers + 1];
    double ratio[layers];

    Ziggurat() {
        const auto pdf = [](double z) { return std::exp(-0.5 * z * z); };
        x[0] = v / pdf(r);
        x[1] = r;
        for (int i = 1; i < layers - 1; ++i) x[i + 1] = std::sqrt(-2.0 * std::log(v / x[i] + pdf(x[i])));
        x[layers] = 0.0;
        for (int i = 0; i <= layers; ++i) f[i] = pdf(x[i]);
        for (int i = 0; i < layers; ++i) ratio[i] = x[i + 1] / x[i];
    }
};

inline const Ziggurat ziggurat;

} // namespace detail

/// Random stream of one path: key = seed, counter = (path index, block index).
/// The sequence depends only on (seed, path), never on scheduling.
class PathStream {
public:
    PathStream(std::uint64_t seed, std::uint64_t path)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, path_(path) {}

    /// Uniform on (0,1) with 53 random bits.
    double uniform() { return (static_cast<double>(bits64() >> 11) + 0.5) * 0x1.0p-53; }

    /// Standard normal by the ziggurat method; one 64-bit draw per accepted sample in ~99% of calls.
    double normal() {
        const auto& z = detail::ziggurat;
        for (;;) {
            const std::uint64_t b = bits64();
            const int i = static_cast<int>(b & 0xff);
            const double u = (static_cast<double>(b >> 11) + 0.5) * 0x1.0p-52 - 1.0;
            if (std::abs(u) < z.ratio[i]) return u * z.x[i];
            if (i == 0) {
                double a;
                double c;
                do {
                    a = -std::log(uniform()) / detail::Ziggurat::r;
                    c = -std::log(uniform());
                } while (c + c < a * a);
                return u > 0.0 ? detail::Ziggurat::r + a : -(detail::Ziggurat::r + a);
            }
            const double xx = u * z.x[i];
            if (z.f[i + 1] + uniform() * (z.f[i] - z.f[i + 1]) < std::exp(-0.5 * xx * xx)) return xx;
        }
    }

private:
    std::uint64_t bits64() {
        if (used_ > 2) refill();
        const std::uint64_t hi = buf_[used_];
        const std::uint64_t lo = buf_[used_ + 1];
        used_ += 2;
        return (hi << 32) | lo;
    }

    void refill() {
        buf_ = philox4x32({static_cast<std::uint32_t>(path_), static_cast<std::uint32_t>(path_ >> 32),
                           static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32)},
                          key_);
        ++block_;
        used_ = 0;
    }

    std::array<std::uint32_t, 2> key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int used_ = 4;
};

} // namespace nodalheat
