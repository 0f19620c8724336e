// SPDX-License-Identifier: Apache-2.0
//
// Weighted atomic-norm channel estimation with band-structured priors.
// The dual program
//
//   max  Re<q_R, y_R> - sigma ||q_R||_2
//   s.t. sup_{f in band_i} |Q(f)| <= D_i,   q = 0 off R,
//
// with Q(f) = sum_n q_n e^{j 2 pi f n}, is made finite-dimensional by one
// Gram-pair certificate per band.  Frequencies are the in-band points where
// |Q| attains the band weight; gains follow by least squares.
#ifndef ANCHOR_WEIGHTED_HPP
#define ANCHOR_WEIGHTED_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "anchor/conic/solver.hpp"
#include "anchor/errors.hpp"
#include "anchor/ofdm.hpp"
#include "anchor/recovery.hpp"
#include "anchor/trig_poly.hpp"

namespace anchor {

struct DualCertificate {
    std::vector<std::complex<double>> q; // length L, exactly zero off R
    double objective = 0;                // Re<q,y> - sigma ||q||
    conic::KktResiduals residuals;
    int iterations = 0;
};

struct WeightedEstimate {
    std::vector<double> frequencies; // sorted, in [0, 1)
    std::vector<double> delays;      // seconds
    std::vector<std::complex<double>> gains;
    DualCertificate certificate;
    bool ill_conditioned_gains = false;
};

/// The assembled dual program plus the variable handles needed for readout.
struct WeightedDualProgram {
    conic::ConicProgram program;
    int q_base = -1; // 2P reals: (re, im) per observed position
    int t_var = -1;  // SOC head; -1 when the observation is noiseless
    std::vector<BandBundle> bundles;
};

inline WeightedDualProgram build_dual_sdp(const PilotObservation& obs,
                                          const PriorBands& bands) {
    obs.validate();
    bands.validate();
    const int L = obs.grid_size;
    const auto P = static_cast<int>(obs.positions.size());

    WeightedDualProgram out;
    auto& prog = out.program;
    out.q_base = prog.add_variables(2 * P);

    std::vector<conic::LinExpr> q_expr(static_cast<std::size_t>(L), conic::LinExpr(0.0));
    for (int p = 0; p < P; ++p) {
        conic::LinExpr e = conic::LinExpr::var(out.q_base + 2 * p);
        e.add(out.q_base + 2 * p + 1, conic::cplx(0, 1));
        q_expr[static_cast<std::size_t>(obs.positions[static_cast<std::size_t>(p)])] = e;
    }

    for (const auto& band : bands.bands) {
        if (band.f_low <= 1e-12 && band.f_high >= 1.0 - 1e-9) {
            // whole-line prior: classical unbanded certificate, no split
            out.bundles.push_back(
                band_lmi_constraints(prog, q_expr, 0.0, 1.0, band.weight, "band"));
            continue;
        }
        for (const auto& [lo, hi] : split_band(band.f_low, band.f_high))
            out.bundles.push_back(
                band_lmi_constraints(prog, q_expr, lo, hi, band.weight, "band"));
    }

    conic::LinExpr obj;
    for (int p = 0; p < P; ++p) {
        obj.add(out.q_base + 2 * p, -obs.values[static_cast<std::size_t>(p)].real());
        obj.add(out.q_base + 2 * p + 1, -obs.values[static_cast<std::size_t>(p)].imag());
    }
    const double sigma = std::sqrt(obs.noise_variance);
    if (sigma > 0) {
        out.t_var = prog.add_variable();
        std::vector<conic::LinExpr> soc;
        soc.push_back(conic::LinExpr::var(out.t_var));
        for (int p = 0; p < 2 * P; ++p) soc.push_back(conic::LinExpr::var(out.q_base + p));
        prog.add_soc_block(std::move(soc), "noise");
        obj.add(out.t_var, sigma);
    }
    prog.set_objective(obj);
    return out;
}

inline DualCertificate solve_dual(const PilotObservation& obs, const PriorBands& bands,
                                  double tolerance = 1e-7, int max_iterations = 200) {
    auto built = build_dual_sdp(obs, bands);
    const auto sol = conic::solve(built.program, tolerance, max_iterations);
    if (sol.status != conic::SolveStatus::optimal)
        throw solver_error(std::string("solve_dual: solver status ") +
                           conic::to_string(sol.status));
    DualCertificate cert;
    cert.q.assign(static_cast<std::size_t>(obs.grid_size), {0.0, 0.0});
    for (std::size_t p = 0; p < obs.positions.size(); ++p)
        cert.q[static_cast<std::size_t>(obs.positions[p])] = {
            sol.primal_values[built.q_base + 2 * static_cast<int>(p)],
            sol.primal_values[built.q_base + 2 * static_cast<int>(p) + 1]};
    cert.objective = -sol.objective_value; // container minimizes
    cert.residuals = sol.kkt_residuals;
    cert.iterations = sol.iterations;
    return cert;
}

/// Q(f) = sum_n q_n e^{+j 2 pi f n}.
inline std::complex<double> dual_polynomial(const DualCertificate& cert, double f) {
    std::complex<double> acc(0, 0);
    for (std::size_t n = 0; n < cert.q.size(); ++n)
        acc += cert.q[n] * std::polar(1.0, 2.0 * std::numbers::pi * f * double(n));
    return acc;
}

namespace detail {

/// Golden-section maximization of |Q| on [lo, hi].
inline double golden_refine(const DualCertificate& cert, double lo, double hi) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - invphi * (b - a), d = a + invphi * (b - a);
    double fc = std::abs(dual_polynomial(cert, c));
    double fd = std::abs(dual_polynomial(cert, d));
    for (int it = 0; it < 80 && (b - a) > 1e-13; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - invphi * (b - a);
            fc = std::abs(dual_polynomial(cert, c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + invphi * (b - a);
            fd = std::abs(dual_polynomial(cert, d));
        }
    }
    return 0.5 * (a + b);
}

} // namespace detail

/// Frequencies where |Q| attains the band weight: grid candidates at
/// attainment_fraction * D_i, locally refined, merged below 1/(4L).
inline std::vector<double> extract_frequencies(const DualCertificate& cert,
                                               const PriorBands& bands,
                                               int grid_points_per_band = 4096,
                                               double attainment_fraction = 0.99) {
    if (grid_points_per_band < 1024)
        throw config_error("extract_frequencies: need at least 1024 grid points per band");
    const auto L = static_cast<double>(cert.q.size());
    const double merge_radius = 1.0 / (4.0 * L);

    struct Peak {
        double f, value;
    };
    std::vector<Peak> peaks;
    for (const auto& band : bands.bands) {
        const double step = (band.f_high - band.f_low) / grid_points_per_band;
        const double threshold = attainment_fraction * band.weight;
        int run_start = -1;
        double run_best = 0, run_best_f = 0;
        for (int g = 0; g <= grid_points_per_band; ++g) {
            const double f = band.f_low + step * g;
            const double v = std::abs(dual_polynomial(cert, f));
            const bool in_run = v >= threshold;
            if (in_run) {
                if (run_start < 0) {
                    run_start = g;
                    run_best = v;
                    run_best_f = f;
                } else if (v > run_best) {
                    run_best = v;
                    run_best_f = f;
                }
            }
            if ((!in_run || g == grid_points_per_band) && run_start >= 0) {
                const double lo = std::max(band.f_low, run_best_f - step);
                const double hi = std::min(band.f_high, run_best_f + step);
                const double fr = detail::golden_refine(cert, lo, hi);
                peaks.push_back({fr, std::abs(dual_polynomial(cert, fr))});
                run_start = -1;
            }
        }
    }
    // merge peaks closer than the resolution radius, keeping the stronger one
    std::sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) {
        return a.value > b.value;
    });
    std::vector<Peak> kept;
    for (const auto& p : peaks) {
        bool close = false;
        for (const auto& k : kept)
            if (torus_distance(p.f, k.f) < merge_radius) close = true;
        if (!close) kept.push_back(p);
    }
    std::vector<double> freqs;
    freqs.reserve(kept.size());
    for (const auto& k : kept) freqs.push_back(k.f);
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

/// Full pipeline: dual solve, attainment extraction, delay conversion, least
/// squares gains.  An empty extraction yields a zero-path estimate.
inline WeightedEstimate estimate_channel_weighted(const PilotObservation& obs,
                                                  const PriorBands& bands,
                                                  const OfdmConfig& cfg,
                                                  double tolerance = 1e-7,
                                                  int max_iterations = 200,
                                                  int grid_points_per_band = 4096) {
    cfg.validate();
    if (cfg.grid_size != obs.grid_size)
        throw config_error("estimate_channel_weighted: config/observation grid mismatch");
    WeightedEstimate est;
    est.certificate = solve_dual(obs, bands, tolerance, max_iterations);
    est.frequencies = extract_frequencies(est.certificate, bands, grid_points_per_band);
    // more peaks than pilots cannot be fit; keep the strongest |Q| peaks
    if (est.frequencies.size() > obs.positions.size()) {
        std::sort(est.frequencies.begin(), est.frequencies.end(),
                  [&](double a, double b) {
                      return std::abs(dual_polynomial(est.certificate, a)) >
                             std::abs(dual_polynomial(est.certificate, b));
                  });
        est.frequencies.resize(obs.positions.size());
        std::sort(est.frequencies.begin(), est.frequencies.end());
    }
    est.delays.reserve(est.frequencies.size());
    for (const double f : est.frequencies) est.delays.push_back(frequency_to_delay(f, cfg));
    if (!est.frequencies.empty()) {
        auto gains = least_squares_gains(est.frequencies, obs);
        est.gains = std::move(gains.gains);
        est.ill_conditioned_gains = gains.ill_conditioned;
    }
    return est;
}

} // namespace anchor

#endif
