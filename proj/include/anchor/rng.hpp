// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_RNG_HPP
#define ANCHOR_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace anchor {

/// Deterministic 64-bit generator (xoshiro256** seeded through splitmix64).
///
/// All randomized operations in the library draw from this generator so that
/// results are bit-reproducible for a fixed seed, independent of the standard
/// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& word : state_) word = splitmix64(x);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), n > 0, without modulo bias (Lemire).
    std::uint64_t uniform_below(std::uint64_t n) {
        std::uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Standard normal via Box-Muller (no state cached; one draw per call pair).
    double normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Circularly symmetric complex Gaussian with E|w|^2 = 1.
    std::complex<double> complex_normal() {
        double u1 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-std::log(u1));
        const double phi = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(phi), r * std::sin(phi)};
    }

    static std::uint64_t splitmix64(std::uint64_t& x) {
        std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

    std::uint64_t state_[4];
};

/// Stable per-trial seed derivation: hash of (master seed, trial, salt).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, std::uint64_t salt = 0) {
    std::uint64_t x = master;
    Rng::splitmix64(x);
    x ^= 0x632be59bd9b4e019ULL + trial;
    Rng::splitmix64(x);
    x ^= 0x9e6c63d0876a9a47ULL + salt;
    return Rng::splitmix64(x);
}

} // namespace anchor

#endif
