// SPDX-License-Identifier: Apache-2.0
//
// Gain recovery and channel reconstruction from estimated frequencies.
#ifndef ANCHOR_RECOVERY_HPP
#define ANCHOR_RECOVERY_HPP

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

#include "anchor/errors.hpp"
#include "anchor/ofdm.hpp"

namespace anchor {

/// Vandermonde design matrix Z[p, r] = e^{-j 2 pi f_r n'_p}.
inline Eigen::MatrixXcd vandermonde_design(const std::vector<double>& frequencies,
                                           const std::vector<int>& positions) {
    Eigen::MatrixXcd z(positions.size(), frequencies.size());
    for (std::size_t p = 0; p < positions.size(); ++p)
        for (std::size_t r = 0; r < frequencies.size(); ++r)
            z(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(r)) = std::polar(
                1.0, -2.0 * std::numbers::pi * frequencies[r] * double(positions[p]));
    return z;
}

struct GainSolution {
    std::vector<std::complex<double>> gains;
    bool ill_conditioned = false; // rank-deficient design; ridge fallback used
};

/// Least-squares gains: minimize ||Z h - y||_2.  Needs count <= P and
/// distinct frequencies; a rank-deficient design falls back to a small ridge
/// and is flagged.
inline GainSolution least_squares_gains(const std::vector<double>& frequencies,
                                        const PilotObservation& obs) {
    obs.validate();
    const auto I = static_cast<Eigen::Index>(frequencies.size());
    const auto P = static_cast<Eigen::Index>(obs.positions.size());
    if (I == 0) return {};
    if (I > P) throw config_error("least_squares_gains: more frequencies than pilots");
    for (std::size_t i = 0; i < frequencies.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (frequencies[i] == frequencies[j])
                throw config_error("least_squares_gains: frequencies must be distinct");

    const Eigen::MatrixXcd z = vandermonde_design(frequencies, obs.positions);
    Eigen::VectorXcd y(P);
    for (Eigen::Index p = 0; p < P; ++p) y[p] = obs.values[static_cast<std::size_t>(p)];

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod;
    cod.setThreshold(1e-10);
    cod.compute(z);
    GainSolution out;
    Eigen::VectorXcd h;
    if (cod.rank() < I) {
        out.ill_conditioned = true;
        // ridge scaled by the design energy keeps pathological draws usable
        Eigen::MatrixXcd gram = z.adjoint() * z;
        const double ridge = 1e-10 * gram.trace().real() / double(I);
        gram.diagonal().array() += ridge;
        h = gram.ldlt().solve(z.adjoint() * y);
    } else {
        h = cod.solve(y);
    }
    out.gains.assign(h.data(), h.data() + h.size());
    return out;
}

/// Reconstruct the full-bandwidth response from (frequency, gain) pairs:
/// h[n] = sum_r g_r e^{-j 2 pi f_r (L/N) n}, n = 0..N-1.
inline std::vector<std::complex<double>> reconstruct_response(
    const std::vector<double>& frequencies, const std::vector<std::complex<double>>& gains,
    const OfdmConfig& cfg) {
    if (frequencies.size() != gains.size())
        throw shape_error("reconstruct_response: frequency/gain length mismatch");
    std::vector<std::complex<double>> h(static_cast<std::size_t>(cfg.n_subcarriers),
                                        {0.0, 0.0});
    const double ratio = double(cfg.grid_size) / double(cfg.n_subcarriers);
    for (int n = 0; n < cfg.n_subcarriers; ++n) {
        std::complex<double> acc(0, 0);
        for (std::size_t r = 0; r < frequencies.size(); ++r)
            acc += gains[r] *
                   std::polar(1.0, -2.0 * std::numbers::pi * frequencies[r] * ratio * double(n));
        h[static_cast<std::size_t>(n)] = acc;
    }
    return h;
}

} // namespace anchor

#endif
