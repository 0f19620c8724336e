// SPDX-License-Identifier: Apache-2.0
//
// Signal model for pilot-aided OFDM channel estimation on a reduced grid.
// A sparse multipath channel h_c(tau) = sum_r h_r delta(tau - tau_r) has the
// pilot-domain response h[n'] = sum_r h_r e^{-j 2 pi f_r n'} with normalized
// frequencies f_r = tau_r / (L T_s) on the reduced index set B = {0..L-1}.
#ifndef ANCHOR_OFDM_HPP
#define ANCHOR_OFDM_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "anchor/errors.hpp"
#include "anchor/rng.hpp"

namespace anchor {

using std::complex;

/// System geometry: N subcarriers, reduced grid of L pilots positions,
/// cyclic prefix length, sampling interval, and the pilot budget P.
struct OfdmConfig {
    int n_subcarriers = 0;      // N
    int grid_size = 0;          // L, must divide N
    int cp_length = 0;          // L_cp
    double sample_interval = 0; // T_s seconds
    int pilot_count = 0;        // P <= L

    void validate() const {
        if (n_subcarriers <= 0 || grid_size <= 0 || cp_length <= 0 || pilot_count <= 0 ||
            !(sample_interval > 0))
            throw config_error("OfdmConfig: all fields must be positive");
        if (n_subcarriers % grid_size != 0)
            throw config_error("OfdmConfig: grid_size must divide n_subcarriers");
        if (pilot_count > grid_size)
            throw config_error("OfdmConfig: pilot_count exceeds grid_size");
    }

    int oversampling() const { return n_subcarriers / grid_size; } // V = N / L
    double delay_span() const { return grid_size * sample_interval; } // L T_s
};

struct ChannelPath {
    double delay = 0;          // tau_r seconds
    complex<double> gain{0, 0}; // h_r
};

/// Sparse multipath channel realization with I = paths.size() scatterers.
struct ChannelRealization {
    std::vector<ChannelPath> paths;

    void validate(const OfdmConfig& cfg) const {
        if (paths.empty()) throw config_error("ChannelRealization: need at least one path");
        for (std::size_t i = 0; i < paths.size(); ++i) {
            if (!(paths[i].delay >= 0) || paths[i].delay >= cfg.delay_span())
                throw config_error("ChannelRealization: delay outside [0, L T_s)");
            for (std::size_t j = 0; j < i; ++j)
                if (paths[i].delay == paths[j].delay)
                    throw config_error("ChannelRealization: delays must be distinct");
        }
    }
};

struct Band {
    double f_low = 0, f_high = 0;
    double weight = 1.0; // D_i > 0
};

/// Piecewise-constant prior on normalized frequency: weight D_i on each band,
/// zero outside all bands.
struct PriorBands {
    std::vector<Band> bands;

    void validate() const {
        if (bands.empty()) throw config_error("PriorBands: need at least one band");
        for (const auto& b : bands) {
            if (!(b.f_low >= 0 && b.f_low < b.f_high && b.f_high < 1.0))
                throw config_error("PriorBands: need 0 <= f_low < f_high < 1");
            if (!(b.weight > 0)) throw config_error("PriorBands: weights must be positive");
        }
        for (std::size_t i = 0; i < bands.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (bands[i].f_low < bands[j].f_high && bands[j].f_low < bands[i].f_high)
                    throw config_error("PriorBands: bands must be pairwise disjoint");
    }

    bool contains(double f) const {
        for (const auto& b : bands)
            if (f >= b.f_low && f <= b.f_high) return true;
        return false;
    }

    double total_length() const {
        double s = 0;
        for (const auto& b : bands) s += b.f_high - b.f_low;
        return s;
    }
};

/// Noisy pilot-domain samples y on the index set R, plus the noise variance
/// realized when the observation was synthesized.
struct PilotObservation {
    std::vector<int> positions;            // R, strictly increasing, subset of B
    std::vector<complex<double>> values;   // y[n'_p]
    double noise_variance = 0;             // sigma^2
    int grid_size = 0;                     // L

    void validate() const {
        if (positions.size() != values.size() || positions.empty())
            throw config_error("PilotObservation: positions/values size mismatch");
        for (std::size_t i = 0; i < positions.size(); ++i) {
            if (positions[i] < 0 || positions[i] >= grid_size)
                throw config_error("PilotObservation: position outside the grid");
            if (i > 0 && positions[i] <= positions[i - 1])
                throw config_error("PilotObservation: positions must be increasing");
        }
        if (!(noise_variance >= 0))
            throw config_error("PilotObservation: negative noise variance");
    }
};

/// Wrap-around distance on the frequency torus [0, 1).
inline double torus_distance(double a, double b) {
    const double d = std::abs(a - b);
    return std::min(d, 1.0 - d);
}

/// Draw P distinct pilot positions from {0..L-1}, sorted ascending.
/// Deterministic for a fixed seed.
inline std::vector<int> pilot_positions(const OfdmConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int L = cfg.grid_size, P = cfg.pilot_count;
    std::vector<int> all(static_cast<std::size_t>(L));
    for (int i = 0; i < L; ++i) all[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    for (int i = 0; i < P; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(L - i)));
        std::swap(all[static_cast<std::size_t>(i)], all[static_cast<std::size_t>(j)]);
    }
    all.resize(static_cast<std::size_t>(P));
    std::sort(all.begin(), all.end());
    return all;
}

/// Reduced-grid index n' = (L/N) n_p of a raw pilot subcarrier.
inline int reduced_pilot_index(const OfdmConfig& cfg, int raw_subcarrier) {
    const int v = cfg.oversampling();
    if (raw_subcarrier % v != 0)
        throw config_error("reduced_pilot_index: subcarrier not on the reduced grid");
    return raw_subcarrier / v;
}

inline double delay_to_frequency(double delay, const OfdmConfig& cfg) {
    if (!(delay >= 0) || delay >= cfg.delay_span())
        throw config_error("delay_to_frequency: delay outside [0, L T_s)");
    return delay / cfg.delay_span();
}

inline std::vector<double> delays_to_frequencies(const std::vector<double>& delays,
                                                 const OfdmConfig& cfg) {
    std::vector<double> f;
    f.reserve(delays.size());
    for (const double d : delays) f.push_back(delay_to_frequency(d, cfg));
    return f;
}

inline double frequency_to_delay(double f, const OfdmConfig& cfg) {
    return f * cfg.delay_span();
}

/// Frequencies i.i.d. uniform over the union of bands (band picked
/// proportionally to length), with the whole set redrawn until every pairwise
/// wrap-around distance reaches min_separation.
inline std::vector<double> sample_frequencies(const PriorBands& bands, int n_paths,
                                              double min_separation, Rng& rng,
                                              int max_attempts = 100000) {
    bands.validate();
    const double total = bands.total_length();
    auto draw_one = [&]() {
        double u = rng.uniform01() * total;
        for (const auto& b : bands.bands) {
            const double len = b.f_high - b.f_low;
            if (u <= len) return b.f_low + u;
            u -= len;
        }
        return bands.bands.back().f_high;
    };
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        std::vector<double> f;
        f.reserve(static_cast<std::size_t>(n_paths));
        for (int i = 0; i < n_paths; ++i) f.push_back(draw_one());
        bool ok = true;
        for (std::size_t i = 0; ok && i < f.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (torus_distance(f[i], f[j]) < min_separation) {
                    ok = false;
                    break;
                }
        if (ok) {
            std::sort(f.begin(), f.end());
            return f;
        }
    }
    throw sampling_error("sample_frequencies: rejection budget exhausted; bands cannot "
                         "hold the requested separated frequencies");
}

/// Random channel: frequencies from the prior, gains with magnitude uniform
/// in [0.5, 1.5] and uniform phase.  Deterministic per seed.
inline ChannelRealization sample_channel(const OfdmConfig& cfg, const PriorBands& bands,
                                         int n_paths, double min_separation,
                                         std::uint64_t seed) {
    Rng rng(seed);
    const auto freqs = sample_frequencies(bands, n_paths, min_separation, rng);
    ChannelRealization ch;
    ch.paths.reserve(freqs.size());
    for (const double f : freqs) {
        const double mag = rng.uniform(0.5, 1.5);
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        ch.paths.push_back({frequency_to_delay(f, cfg), std::polar(mag, phase)});
    }
    ch.validate(cfg);
    return ch;
}

/// Noiseless pilot-domain response at the given reduced-grid positions.
inline std::vector<complex<double>> channel_frequency_response(
    const ChannelRealization& ch, const OfdmConfig& cfg, const std::vector<int>& positions) {
    ch.validate(cfg);
    std::vector<complex<double>> h;
    h.reserve(positions.size());
    for (const int n : positions) {
        if (n < 0 || n >= cfg.grid_size)
            throw config_error("channel_frequency_response: position outside the grid");
        complex<double> acc(0, 0);
        for (const auto& p : ch.paths) {
            const double f = delay_to_frequency(p.delay, cfg);
            acc += p.gain * std::polar(1.0, -2.0 * std::numbers::pi * f * double(n));
        }
        h.push_back(acc);
    }
    return h;
}

/// Full-bandwidth response h[n] for n = 0..N-1 (the Eq-for-truth evaluation:
/// exponent -j 2 pi f_r (L/N) n).
inline std::vector<complex<double>> full_response(const ChannelRealization& ch,
                                                  const OfdmConfig& cfg) {
    ch.validate(cfg);
    std::vector<complex<double>> h(static_cast<std::size_t>(cfg.n_subcarriers));
    const double ratio = double(cfg.grid_size) / double(cfg.n_subcarriers);
    for (int n = 0; n < cfg.n_subcarriers; ++n) {
        complex<double> acc(0, 0);
        for (const auto& p : ch.paths) {
            const double f = delay_to_frequency(p.delay, cfg);
            acc += p.gain * std::polar(1.0, -2.0 * std::numbers::pi * f * ratio * double(n));
        }
        h[static_cast<std::size_t>(n)] = acc;
    }
    return h;
}

constexpr double kNoNoise = std::numeric_limits<double>::infinity();

/// Add circularly symmetric complex white Gaussian noise at the given SNR
/// (dB, relative to the mean power of `clean`).  Returns the realized noise
/// variance alongside the samples; snr_db = kNoNoise is the noiseless flag.
inline std::pair<std::vector<complex<double>>, double> add_noise(
    const std::vector<complex<double>>& clean, double snr_db, std::uint64_t seed) {
    if (clean.empty()) throw config_error("add_noise: empty input");
    if (std::isinf(snr_db)) return {clean, 0.0};
    double power = 0;
    for (const auto& c : clean) power += std::norm(c);
    power /= double(clean.size());
    const double sigma2 = power * std::pow(10.0, -snr_db / 10.0);
    Rng rng(seed);
    std::vector<complex<double>> noisy;
    noisy.reserve(clean.size());
    const double scale = std::sqrt(sigma2);
    for (const auto& c : clean) noisy.push_back(c + scale * rng.complex_normal());
    return {noisy, sigma2};
}

/// Synthesize a pilot observation.  Noise is drawn on the full reduced grid B
/// and then restricted to the pilot positions, so different position sets for
/// the same seed see identical per-position noise (matched-seed pairing).
inline PilotObservation pilot_observation(const OfdmConfig& cfg, const ChannelRealization& ch,
                                          const std::vector<int>& positions, double snr_db,
                                          std::uint64_t noise_seed) {
    std::vector<int> grid(static_cast<std::size_t>(cfg.grid_size));
    for (int i = 0; i < cfg.grid_size; ++i) grid[static_cast<std::size_t>(i)] = i;
    const auto clean = channel_frequency_response(ch, cfg, grid);
    const auto [noisy, sigma2] = add_noise(clean, snr_db, noise_seed);
    PilotObservation obs;
    obs.grid_size = cfg.grid_size;
    obs.noise_variance = sigma2;
    obs.positions = positions;
    obs.values.reserve(positions.size());
    for (const int n : positions) obs.values.push_back(noisy[static_cast<std::size_t>(n)]);
    obs.validate();
    return obs;
}

} // namespace anchor

#endif
