// SPDX-License-Identifier: Apache-2.0
//
// Gram-pair machinery for bounding the magnitude of a trigonometric
// polynomial on a sub-interval of [0, 1).  A polynomial Q(f) = sum q_n
// e^{j 2 pi f n} satisfies |Q(f)| <= W on [f_low, f_high] iff there are
// Hermitian G1 >= 0 (order L) and G2 >= 0 (order L-1) with
//
//   delta_k = tr(Theta_k G1) + tr((d1 Theta_{k-1} + d0 Theta_k +
//             conj(d1) Theta_{k+1}) G2),   k = 0..L-1,
//
// and the bordered matrix [[G1, q/W], [q*/W, 1]] >= 0, where d0, d1 derive
// from the interval endpoints through a tangent parametrization.
#ifndef ANCHOR_TRIG_POLY_HPP
#define ANCHOR_TRIG_POLY_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "anchor/conic/program.hpp"
#include "anchor/errors.hpp"

namespace anchor {

using conic::cplx;
using conic::HermitianVar;
using conic::LinExpr;
using conic::MatrixXcd;

/// Interval data for the band-restricted positivity certificate.
struct BandCoefficients {
    double omega_low = 0, omega_high = 0; // in [-pi, pi]
    double alpha = 0, beta = 0;           // tan of the half-angles
    double d0 = 0;
    cplx d1{0, 0};
};

/// Map a normalized frequency in [0, 1) to its principal angle in [-pi, pi].
inline double band_omega(double f) {
    return f <= 0.5 ? 2.0 * std::numbers::pi * f : 2.0 * std::numbers::pi * (f - 1.0);
}

inline BandCoefficients band_coefficients(double f_low, double f_high) {
    if (!(f_low >= 0.0 && f_low < f_high && f_high < 1.0))
        throw band_error("band_coefficients: need 0 <= f_low < f_high < 1");
    constexpr double kSingularTol = 1e-9;
    if (std::abs(f_low - 0.5) < kSingularTol || std::abs(f_high - 0.5) < kSingularTol)
        throw band_error("band_coefficients: band endpoint at the f = 0.5 tangent "
                         "singularity; split or perturb the band");
    BandCoefficients b;
    b.omega_low = band_omega(f_low);
    b.omega_high = band_omega(f_high);
    b.alpha = std::tan(b.omega_low / 2.0);
    b.beta = std::tan(b.omega_high / 2.0);
    b.d0 = -(b.alpha * b.beta + 1.0) / 2.0;
    b.d1 = cplx((1.0 - b.alpha * b.beta) / 4.0, (b.alpha + b.beta) / 4.0);
    return b;
}

/// Split a band so that no piece crosses the f = 0.5 singularity.
inline std::vector<std::pair<double, double>> split_band(double f_low, double f_high,
                                                         double gap = 1e-6) {
    if (f_low < 0.5 && f_high > 0.5)
        return {{f_low, 0.5 - gap}, {0.5 + gap, f_high}};
    return {{f_low, f_high}};
}

/// Elementary Toeplitz matrix: ones on the k-th diagonal (entry (m, n) = 1
/// iff n - m = k), zeros elsewhere.
struct ElementaryToeplitz {
    Eigen::Index order;
    Eigen::Index diagonal_index;

    Eigen::MatrixXd matrix() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(order, order);
        const Eigen::Index k = diagonal_index;
        for (Eigen::Index i = 0; i < order; ++i) {
            const Eigen::Index j = i + k;
            if (j >= 0 && j < order) m(i, j) = 1.0;
        }
        return m;
    }
};

/// Sum of the k-th diagonal of a matrix, i.e. tr(Theta_k A); zero when the
/// diagonal index falls outside the matrix.
inline cplx diagonal_sum(const MatrixXcd& a, Eigen::Index k) {
    const Eigen::Index n = a.rows();
    cplx acc(0, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j = i + k;
        if (j >= 0 && j < n) acc += a(i, j);
    }
    return acc;
}

/// Numeric Gram pair (used by tests and certificate inspection).
struct GramPair {
    MatrixXcd g1; // L x L
    MatrixXcd g2; // (L-1) x (L-1); empty for the unbanded certificate
};

/// The linear trace functional of the certificate at coefficient index k.
inline cplx trace_functional(Eigen::Index k, const BandCoefficients& band,
                             const GramPair& pair) {
    if (pair.g2.rows() > 0 && pair.g2.rows() != pair.g1.rows() - 1)
        throw shape_error("trace_functional: G2 must have order L-1");
    cplx v = diagonal_sum(pair.g1, k);
    if (pair.g2.rows() > 0) {
        v += band.d1 * diagonal_sum(pair.g2, k - 1);
        v += band.d0 * diagonal_sum(pair.g2, k);
        v += std::conj(band.d1) * diagonal_sum(pair.g2, k + 1);
    }
    return v;
}

/// Handles to the constraint records emitted for one band.
struct BandBundle {
    HermitianVar g1;
    HermitianVar g2;     // order 0 when the certificate is unbanded
    int schur_block = -1; // PSD block [[G1, border],[border*, corner]]
    int g2_block = -1;    // PSD block for G2 (absent when unbanded)
    bool banded = true;
    BandCoefficients coeffs;
};

/// Symbolic diagonal sum over a Hermitian matrix variable.
inline LinExpr herm_diagonal_sum(const HermitianVar& h, Eigen::Index k) {
    LinExpr e;
    for (Eigen::Index i = 0; i < h.order; ++i) {
        const Eigen::Index j = i + k;
        if (j >= 0 && j < h.order) e += h.entry(i, j);
    }
    return e;
}

/// Bordered PSD constraint [[G1, border], [border*, corner]] >= 0.
inline int bordered_psd_block(conic::ConicProgram& prog, const HermitianVar& g1,
                              const std::vector<LinExpr>& border, const LinExpr& corner,
                              std::string tag = {}) {
    const Eigen::Index n = g1.order;
    if (static_cast<Eigen::Index>(border.size()) != n)
        throw shape_error("bordered_psd_block: border size mismatch");
    std::vector<conic::ConicProgram::PsdEntry> entries;
    entries.reserve(static_cast<std::size_t>(conic::svec_dim(n + 1)));
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i <= j; ++i) entries.push_back({i, j, g1.entry(i, j)});
    for (Eigen::Index i = 0; i < n; ++i)
        entries.push_back({i, n, border[static_cast<std::size_t>(i)]});
    entries.push_back({n, n, corner});
    return prog.add_psd_block(n + 1, std::move(entries), true, std::move(tag));
}

/// Emit the full constraint bundle certifying that the polynomial with
/// coefficient expressions `q_expr` (length L) has magnitude at most `weight`
/// on [f_low, f_high]: fresh Gram variables, L trace equalities, the G2 cone
/// and the bordered block scaled by 1/weight.  A degenerate full-line band
/// (f_low <= 0, f_high >= 1-eps) produces the classical unbanded certificate
/// without G2.
inline BandBundle band_lmi_constraints(conic::ConicProgram& prog,
                                       const std::vector<LinExpr>& q_expr, double f_low,
                                       double f_high, double weight,
                                       const std::string& tag = {}) {
    const auto L = static_cast<Eigen::Index>(q_expr.size());
    if (L < 2) throw shape_error("band_lmi_constraints: need L >= 2");
    if (!(weight > 0)) throw config_error("band_lmi_constraints: weight must be positive");

    BandBundle bundle;
    const bool full_line = f_low <= 1e-12 && f_high >= 1.0 - 1e-9;
    bundle.banded = !full_line;
    bundle.g1 = prog.add_hermitian_variable(L);
    if (bundle.banded) {
        bundle.coeffs = band_coefficients(f_low, f_high);
        bundle.g2 = prog.add_hermitian_variable(L - 1);
    }

    for (Eigen::Index k = 0; k < L; ++k) {
        LinExpr lhs = herm_diagonal_sum(bundle.g1, k);
        if (bundle.banded) {
            lhs += bundle.coeffs.d1 * herm_diagonal_sum(bundle.g2, k - 1);
            lhs += cplx(bundle.coeffs.d0) * herm_diagonal_sum(bundle.g2, k);
            lhs += std::conj(bundle.coeffs.d1) * herm_diagonal_sum(bundle.g2, k + 1);
        }
        prog.add_equality(lhs, k == 0 ? cplx(1.0) : cplx(0.0), tag + "/trace");
    }

    std::vector<LinExpr> border;
    border.reserve(static_cast<std::size_t>(L));
    for (const auto& q : q_expr) border.push_back(cplx(1.0 / weight) * LinExpr(q));
    bundle.schur_block = bordered_psd_block(prog, bundle.g1, border, LinExpr(1.0),
                                            tag + "/schur");
    if (bundle.banded) bundle.g2_block = prog.add_psd_block(bundle.g2, tag + "/g2");
    return bundle;
}

} // namespace anchor

#endif
