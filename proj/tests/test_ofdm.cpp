// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "anchor/ofdm.hpp"

using namespace anchor;
using Catch::Approx;

namespace {
OfdmConfig paper_config() {
    return {512, 64, 64, 1e-6, 36};
}
PriorBands paper_bands() {
    return {{{0.15, 0.30, 1.0}, {0.70, 0.85, 1.0}}};
}
} // namespace

TEST_CASE("pilot positions") {
    OfdmConfig cfg = paper_config();
    cfg.pilot_count = 64;
    const auto all = pilot_positions(cfg, 3);
    REQUIRE(all.size() == 64);
    for (int i = 0; i < 64; ++i) CHECK(all[static_cast<std::size_t>(i)] == i);

    cfg.pilot_count = 36;
    const auto a = pilot_positions(cfg, 7);
    const auto b = pilot_positions(cfg, 7);
    CHECK(a == b);
    CHECK(a.size() == 36);
    CHECK(std::is_sorted(a.begin(), a.end()));
    CHECK(a.front() >= 0);
    CHECK(a.back() < 64);
    CHECK(pilot_positions(cfg, 8) != a);

    OfdmConfig bad = cfg;
    bad.pilot_count = 65;
    CHECK_THROWS_AS(pilot_positions(bad, 1), config_error);

    CHECK(reduced_pilot_index(cfg, 16) == 2);
    CHECK_THROWS_AS(reduced_pilot_index(cfg, 17), config_error);
}

TEST_CASE("delay to frequency mapping") {
    const OfdmConfig cfg = paper_config(); // L T_s = 64 us
    CHECK(delay_to_frequency(9.6e-6, cfg) == Approx(0.15));
    CHECK(delay_to_frequency(0.0, cfg) == 0.0);
    CHECK(delay_to_frequency(54.4e-6, cfg) == Approx(0.85));
    CHECK_THROWS_AS(delay_to_frequency(64e-6, cfg), config_error);

    // inverse composition is the identity on [0, 1)
    for (int i = 0; i < 100; ++i) {
        const double f = i / 100.0;
        CHECK(delay_to_frequency(frequency_to_delay(f, cfg), cfg) == Approx(f).margin(1e-15));
    }
}

TEST_CASE("channel sampling respects bands and separation") {
    const OfdmConfig cfg = paper_config();
    {
        PriorBands bands{{{0.15, 0.30, 1.0}}};
        const auto ch = sample_channel(cfg, bands, 1, 0.0, 42);
        REQUIRE(ch.paths.size() == 1);
        const double f = delay_to_frequency(ch.paths[0].delay, cfg);
        CHECK(f >= 0.15);
        CHECK(f <= 0.30);
        const double mag = std::abs(ch.paths[0].gain);
        CHECK(mag >= 0.5);
        CHECK(mag <= 1.5);
    }
    {
        const double sep = 4.0 / 512.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto ch = sample_channel(cfg, paper_bands(), 4, sep, seed);
            const auto f = delays_to_frequencies(
                {ch.paths[0].delay, ch.paths[1].delay, ch.paths[2].delay, ch.paths[3].delay},
                cfg);
            for (std::size_t i = 0; i < 4; ++i) {
                CHECK(paper_bands().contains(f[i]));
                for (std::size_t j = 0; j < i; ++j)
                    CHECK(torus_distance(f[i], f[j]) >= sep);
            }
        }
    }
    {
        const auto a = sample_channel(cfg, paper_bands(), 4, 4.0 / 512, 9);
        const auto b = sample_channel(cfg, paper_bands(), 4, 4.0 / 512, 9);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(a.paths[i].delay == b.paths[i].delay);
            CHECK(a.paths[i].gain == b.paths[i].gain);
        }
    }
    {
        PriorBands narrow{{{0.15, 0.155, 1.0}}};
        CHECK_THROWS_AS(sample_channel(cfg, narrow, 4, 0.1, 1), sampling_error);
    }
}

TEST_CASE("pilot-domain response") {
    const OfdmConfig cfg = paper_config();
    std::vector<int> grid(64);
    for (int i = 0; i < 64; ++i) grid[static_cast<std::size_t>(i)] = i;

    {
        ChannelRealization ch{{{0.0, {1.0, 0.0}}}};
        const auto h = channel_frequency_response(ch, cfg, grid);
        for (const auto& v : h) CHECK(std::abs(v - std::complex<double>(1, 0)) < 1e-12);
    }
    {
        ChannelRealization ch{{{frequency_to_delay(0.5, cfg), {1.0, 0.0}}}};
        const auto h = channel_frequency_response(ch, cfg, grid);
        for (int n = 0; n < 64; ++n) {
            const double expect = (n % 2 == 0) ? 1.0 : -1.0;
            CHECK(h[static_cast<std::size_t>(n)].real() == Approx(expect).margin(1e-10));
            CHECK(h[static_cast<std::size_t>(n)].imag() == Approx(0.0).margin(1e-10));
        }
    }
    {
        ChannelRealization ch{{{frequency_to_delay(0.2, cfg), {1.0, 0.0}},
                               {frequency_to_delay(0.7, cfg), {0.0, 2.0}}}};
        const auto h = channel_frequency_response(ch, cfg, {0});
        CHECK(h[0].real() == Approx(1.0));
        CHECK(h[0].imag() == Approx(2.0));

        // linearity in gains and the triangle bound
        ChannelRealization ch1{{ch.paths[0]}}, ch2{{ch.paths[1]}};
        const auto ha = channel_frequency_response(ch1, cfg, grid);
        const auto hb = channel_frequency_response(ch2, cfg, grid);
        const auto hs = channel_frequency_response(ch, cfg, grid);
        double gain_mass = std::abs(ch.paths[0].gain) + std::abs(ch.paths[1].gain);
        for (std::size_t n = 0; n < hs.size(); ++n) {
            CHECK(std::abs(hs[n] - ha[n] - hb[n]) < 1e-12);
            CHECK(std::abs(hs[n]) <= gain_mass + 1e-12);
        }
    }
}

TEST_CASE("noise synthesis") {
    std::vector<std::complex<double>> clean(64, {1.0, 0.0});
    {
        const auto [noisy, s2] = add_noise(clean, kNoNoise, 5);
        CHECK(s2 == 0.0);
        CHECK(noisy == clean);
    }
    {
        const auto [noisy, s2] = add_noise(clean, 20.0, 5);
        CHECK(s2 == Approx(0.01));
        CHECK(noisy != clean);
        const auto [again, s2b] = add_noise(clean, 20.0, 5);
        CHECK(noisy == again);
        CHECK(s2b == s2);
    }
    {
        // Monte Carlo sanity: empirical noise power within 3 percent
        std::vector<std::complex<double>> big(100000, {1.0, 0.0});
        const auto [noisy, s2] = add_noise(big, 10.0, 77);
        double p = 0;
        for (std::size_t i = 0; i < big.size(); ++i) p += std::norm(noisy[i] - big[i]);
        p /= double(big.size());
        CHECK(p == Approx(s2).epsilon(0.03));
    }
}

TEST_CASE("observation synthesis keeps methods matched") {
    const OfdmConfig cfg = paper_config();
    const auto ch = sample_channel(cfg, paper_bands(), 4, 4.0 / 512, 3);
    const auto random_pos = pilot_positions(cfg, 11);
    std::vector<int> contiguous(36);
    for (int i = 0; i < 36; ++i) contiguous[static_cast<std::size_t>(i)] = i;

    const auto obs_a = pilot_observation(cfg, ch, random_pos, 20.0, 99);
    const auto obs_b = pilot_observation(cfg, ch, contiguous, 20.0, 99);
    CHECK(obs_a.noise_variance == Approx(obs_b.noise_variance));
    // positions common to both layouts carry identical samples
    for (std::size_t i = 0; i < random_pos.size(); ++i) {
        const int pos = random_pos[i];
        const auto it = std::find(contiguous.begin(), contiguous.end(), pos);
        if (it == contiguous.end()) continue;
        const auto j = static_cast<std::size_t>(it - contiguous.begin());
        CHECK(obs_a.values[i] == obs_b.values[j]);
    }
}
