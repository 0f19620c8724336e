// SPDX-License-Identifier: Apache-2.0
//
// Unweighted atomic-norm channel estimation: the Toeplitz-bordered SDP
//
//   minimize (1/(2L)) tr(T) + t/2
//   s.t.     [[T, xhat], [xhat*, t]] >= 0,  ||y - xhat_R||_2^2 <= mu,
//
// solved through its conic dual (diagonal-sum constraints on a bordered PSD
// variable); the primal (T, xhat, t) is read back from the dual slack.
// Frequencies come out of T by noise-subspace polynomial rooting.
#ifndef ANCHOR_ATOMSR_HPP
#define ANCHOR_ATOMSR_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "anchor/conic/solver.hpp"
#include "anchor/errors.hpp"
#include "anchor/ofdm.hpp"
#include "anchor/trig_poly.hpp"

namespace anchor {

class estimation_error : public error {
public:
    using error::error;
};

struct AstSolution {
    conic::MatrixXcd toeplitz;                 // T, L x L Hermitian Toeplitz
    std::vector<std::complex<double>> denoised; // xhat, length L
    double slack = 0;                           // t
    double mu = 0;
    conic::KktResiduals residuals;
    int iterations = 0;
};

/// Data-fit budget heuristic: mu = sigma sqrt(2 L log L); zero when noiseless.
inline double choose_mu(double noise_variance, int grid_size) {
    if (!(noise_variance >= 0)) throw config_error("choose_mu: negative variance");
    if (noise_variance == 0) return 0.0;
    const double L = static_cast<double>(grid_size);
    return std::sqrt(noise_variance) * std::sqrt(2.0 * L * std::log(L));
}

/// Solve the constrained atomic-norm SDP for the given data-fit budget mu.
inline AstSolution solve_ast(const PilotObservation& obs, double mu, double tolerance = 1e-8,
                             int max_iterations = 200) {
    obs.validate();
    if (!(mu >= 0)) throw config_error("solve_ast: mu must be nonnegative");
    const int L = obs.grid_size;
    const auto P = static_cast<int>(obs.positions.size());

    conic::ConicProgram prog;
    const int wb = prog.add_variables(2 * P); // border variables on R
    auto w_expr = [&](int p) {
        conic::LinExpr e = conic::LinExpr::var(wb + 2 * p);
        e.add(wb + 2 * p + 1, conic::cplx(0, 1));
        return e;
    };

    const HermitianVar z11 = prog.add_hermitian_variable(L);
    std::vector<conic::LinExpr> border(static_cast<std::size_t>(L), conic::LinExpr(0.0));
    for (int p = 0; p < P; ++p)
        border[static_cast<std::size_t>(obs.positions[static_cast<std::size_t>(p)])] =
            w_expr(p);
    bordered_psd_block(prog, z11, border, conic::LinExpr(0.5), "ast");

    for (int k = 0; k < L; ++k)
        prog.add_equality(herm_diagonal_sum(z11, k), k == 0 ? conic::cplx(0.5) : conic::cplx(0.0),
                          "diag");

    conic::LinExpr obj;
    for (int p = 0; p < P; ++p) {
        obj.add(wb + 2 * p, 2.0 * obs.values[static_cast<std::size_t>(p)].real());
        obj.add(wb + 2 * p + 1, 2.0 * obs.values[static_cast<std::size_t>(p)].imag());
    }
    if (mu > 0) {
        const int lam = prog.add_variable();
        std::vector<conic::LinExpr> soc;
        soc.push_back(conic::LinExpr::var(lam));
        for (int p = 0; p < P; ++p) {
            soc.push_back(conic::cplx(2.0) * conic::LinExpr::var(wb + 2 * p));
            soc.push_back(conic::cplx(2.0) * conic::LinExpr::var(wb + 2 * p + 1));
        }
        prog.add_soc_block(std::move(soc), "fit");
        obj.add(lam, std::sqrt(mu));
    }
    prog.set_objective(obj);

    const auto sol = conic::solve(prog, tolerance, max_iterations);
    if (sol.status != conic::SolveStatus::optimal)
        throw solver_error(std::string("solve_ast: solver status ") +
                           conic::to_string(sol.status));

    // The primal SDP variables are the multiplier of the bordered PSD
    // constraint; the dual normalization above puts it at half scale.
    const conic::MatrixXcd slackmat = 2.0 * sol.psd_duals[0];
    AstSolution out;
    out.mu = mu;
    out.toeplitz = slackmat.topLeftCorner(L, L);
    // exact Toeplitz structure: average the diagonals
    for (int k = 0; k < L; ++k) {
        std::complex<double> acc = diagonal_sum(out.toeplitz, k) / double(L - k);
        for (int i = 0; i + k < L; ++i) {
            out.toeplitz(i, i + k) = acc;
            out.toeplitz(i + k, i) = std::conj(acc);
        }
    }
    out.denoised.resize(static_cast<std::size_t>(L));
    for (int n = 0; n < L; ++n)
        out.denoised[static_cast<std::size_t>(n)] = slackmat(n, L);
    out.slack = slackmat(L, L).real();
    out.residuals = sol.kkt_residuals;
    out.iterations = sol.iterations;
    return out;
}

/// Objective value (1/(2L)) tr(T) + t/2 of a solution.
inline double ast_objective(const AstSolution& s) {
    const auto L = s.toeplitz.rows();
    return s.toeplitz.trace().real() / (2.0 * double(L)) + 0.5 * s.slack;
}

/// Roots of a complex polynomial via the companion matrix; coefficients in
/// ascending order, near-zero edges trimmed.
inline std::vector<std::complex<double>> polynomial_roots(
    std::vector<std::complex<double>> coeffs) {
    double peak = 0;
    for (const auto& c : coeffs) peak = std::max(peak, std::abs(c));
    if (peak == 0) return {};
    const double tol = 1e-12 * peak;
    while (!coeffs.empty() && std::abs(coeffs.back()) < tol) coeffs.pop_back();
    std::size_t low = 0;
    while (low < coeffs.size() && std::abs(coeffs[low]) < tol) ++low;
    if (coeffs.size() - low < 2) return {};
    const auto deg = static_cast<Eigen::Index>(coeffs.size() - low - 1);
    conic::MatrixXcd companion = conic::MatrixXcd::Zero(deg, deg);
    const std::complex<double> lead = coeffs.back();
    for (Eigen::Index i = 0; i + 1 < deg; ++i) companion(i + 1, i) = 1.0;
    for (Eigen::Index i = 0; i < deg; ++i)
        companion(i, deg - 1) = -coeffs[low + static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<conic::MatrixXcd> es(companion);
    std::vector<std::complex<double>> roots(es.eigenvalues().data(),
                                            es.eigenvalues().data() + deg);
    return roots;
}

/// Noise-subspace polynomial rooting on a Hermitian Toeplitz factor: model
/// order from the relative eigenvalue gap, frequencies from the roots nearest
/// the unit circle.  Returns frequencies sorted ascending in [0, 1).
inline std::vector<double> toeplitz_frequencies(const conic::MatrixXcd& toeplitz,
                                                double rank_tolerance = 1e-4) {
    const Eigen::Index L = toeplitz.rows();
    Eigen::SelfAdjointEigenSolver<conic::MatrixXcd> es(toeplitz);
    const Eigen::VectorXd ev = es.eigenvalues(); // ascending
    const double lmax = ev[L - 1];
    if (!(lmax > 0)) return {};
    Eigen::Index order = 0;
    for (Eigen::Index i = 0; i < L; ++i)
        if (ev[i] > rank_tolerance * lmax) ++order;
    if (order == 0) return {};
    if (order == L)
        throw estimation_error("toeplitz_frequencies: no eigenvalue gap (white spectrum)");

    const conic::MatrixXcd noise = es.eigenvectors().leftCols(L - order);
    const conic::MatrixXcd c = noise * noise.adjoint();
    // a(f)* C a(f) = sum_k gamma_k z^k with z = e^{j 2 pi f}
    std::vector<std::complex<double>> coeffs;
    coeffs.reserve(static_cast<std::size_t>(2 * L - 1));
    for (Eigen::Index k = -(L - 1); k <= L - 1; ++k) coeffs.push_back(diagonal_sum(c, -k));
    auto roots = polynomial_roots(coeffs);

    // keep roots inside the closed unit disk, nearest the circle first
    std::erase_if(roots, [](const std::complex<double>& z) { return std::abs(z) > 1.0 + 1e-9; });
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        return std::abs(1.0 - std::abs(a)) < std::abs(1.0 - std::abs(b));
    });
    std::vector<double> freqs;
    for (const auto& z : roots) {
        if (static_cast<Eigen::Index>(freqs.size()) == order) break;
        double f = std::arg(z) / (2.0 * std::numbers::pi);
        if (f < 0) f += 1.0;
        // conjugate-reciprocal pairs collapse to one frequency
        bool dup = false;
        for (const double g : freqs)
            if (torus_distance(f, g) < 1e-7) dup = true;
        if (!dup) freqs.push_back(f);
    }
    std::sort(freqs.begin(), freqs.end());
    return freqs;
}

inline std::vector<double> toeplitz_frequencies(const AstSolution& sol,
                                                double rank_tolerance = 1e-4) {
    return toeplitz_frequencies(sol.toeplitz, rank_tolerance);
}

} // namespace anchor

#endif
