// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <numbers>

#include "anchor/conic/solver.hpp"
#include "anchor/rng.hpp"
#include "anchor/trig_poly.hpp"

using namespace anchor;
using Catch::Approx;
using conic::cplx;
using conic::MatrixXcd;
using conic::VectorXcd;

namespace {

// Q(f) = sum_n q_n e^{+j 2 pi f n}
cplx eval_poly(const VectorXcd& q, double f) {
    cplx acc(0, 0);
    for (Eigen::Index n = 0; n < q.size(); ++n)
        acc += q[n] * std::polar(1.0, 2.0 * std::numbers::pi * f * double(n));
    return acc;
}

} // namespace

TEST_CASE("band coefficients match scalar evaluation") {
    const auto b = band_coefficients(0.15, 0.30);
    CHECK(b.alpha == Approx(0.509525).epsilon(1e-5));
    CHECK(b.beta == Approx(1.376382).epsilon(1e-5));
    CHECK(b.d0 == Approx(-0.850651).epsilon(1e-5));
    CHECK(b.d1.real() == Approx(0.074674).epsilon(1e-4));
    CHECK(b.d1.imag() == Approx(0.471477).epsilon(1e-5));

    // branch above f = 0.5 wraps to negative angles
    const auto b2 = band_coefficients(0.70, 0.85);
    CHECK(b2.omega_low == Approx(2.0 * std::numbers::pi * (0.70 - 1.0)));
    CHECK(b2.alpha == Approx(-1.376382).epsilon(1e-5));
}

TEST_CASE("reflected band negates and swaps the tangent pair") {
    const auto b = band_coefficients(0.15, 0.30);
    const auto r = band_coefficients(1.0 - 0.30, 1.0 - 0.15);
    CHECK(r.alpha == Approx(-b.beta));
    CHECK(r.beta == Approx(-b.alpha));
    CHECK(r.d0 == Approx(b.d0));
}

TEST_CASE("tangent singularity at one half is rejected") {
    CHECK_THROWS_AS(band_coefficients(0.5, 0.7), band_error);
    CHECK_THROWS_AS(band_coefficients(0.3, 0.5 + 1e-12), band_error);
    const auto pieces = split_band(0.4, 0.7);
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].second == Approx(0.5 - 1e-6));
    CHECK(pieces[1].first == Approx(0.5 + 1e-6));
    CHECK(split_band(0.1, 0.3).size() == 1);
}

TEST_CASE("trace functional on reference Gram pairs") {
    const Eigen::Index L = 6;
    const auto band = band_coefficients(0.15, 0.30);
    GramPair pair;
    pair.g1 = MatrixXcd::Identity(L, L);
    pair.g2 = MatrixXcd::Zero(L - 1, L - 1);
    CHECK(trace_functional(0, band, pair).real() == Approx(double(L)));
    CHECK(std::abs(trace_functional(1, band, pair)) == Approx(0.0).margin(1e-15));

    pair.g1.setZero();
    pair.g2 = MatrixXcd::Identity(L - 1, L - 1);
    CHECK(trace_functional(0, band, pair).real() == Approx(band.d0 * double(L - 1)));
}

TEST_CASE("elementary Toeplitz trace extracts diagonals") {
    Rng rng(17);
    const Eigen::Index L = 7;
    MatrixXcd a(L, L);
    for (Eigen::Index i = 0; i < L; ++i)
        for (Eigen::Index j = 0; j < L; ++j) a(i, j) = cplx(rng.normal(), rng.normal());
    for (Eigen::Index k = -(L - 1); k < L; ++k) {
        const Eigen::MatrixXd th = ElementaryToeplitz{L, k}.matrix();
        const cplx direct = (th.cast<cplx>() * a).trace();
        // tr(Theta_k A) sums the diagonal with column - row = -k of A when
        // multiplying on the left; compare against the definition instead.
        cplx bydef(0, 0);
        for (Eigen::Index m = 0; m < L; ++m) {
            const Eigen::Index n = m + k;
            if (n >= 0 && n < L) bydef += a(n, m);
        }
        CHECK(std::abs(direct - bydef) == Approx(0.0).margin(1e-12));
        CHECK(std::abs(diagonal_sum(a, k) - diagonal_sum(a.transpose(), -k)) ==
              Approx(0.0).margin(1e-12));
    }
    CHECK(ElementaryToeplitz{L, 0}.matrix().isIdentity(0.0));
}

TEST_CASE("bundle structure counts") {
    {
        conic::ConicProgram prog;
        std::vector<LinExpr> q(4, LinExpr(0.0));
        const int qv = prog.add_variables(2);
        q[1] = LinExpr::var(qv);
        q[2] = LinExpr::var(qv + 1);
        const auto bundle = band_lmi_constraints(prog, q, 0.15, 0.30, 1.0);
        CHECK(prog.equality_count() == 4); // one record per k
        CHECK(prog.psd_block_count() == 2);
        CHECK(prog.psd_block(bundle.schur_block).order == 5);
        CHECK(prog.psd_block(bundle.g2_block).order == 3);
        const auto low = prog.lower();
        CHECK(low.cones.blocks[0].order == 10); // embedded orders
        CHECK(low.cones.blocks[1].order == 6);
    }
    {
        conic::ConicProgram prog;
        std::vector<LinExpr> q(4, LinExpr(0.0));
        q[0] = LinExpr::var(prog.add_variable());
        const auto bundle = band_lmi_constraints(prog, q, 0.0, 1.0, 1.0);
        CHECK_FALSE(bundle.banded);
        CHECK(prog.psd_block_count() == 1);
        CHECK(prog.equality_count() == 4);
    }
}

TEST_CASE("zero polynomial admits the identity Gram certificate") {
    const Eigen::Index L = 8;
    const auto band = band_coefficients(0.15, 0.30);
    GramPair pair;
    pair.g1 = MatrixXcd::Identity(L, L) / double(L);
    pair.g2 = MatrixXcd::Zero(L - 1, L - 1);
    CHECK(trace_functional(0, band, pair).real() == Approx(1.0));
    for (Eigen::Index k = 1; k < L; ++k)
        CHECK(std::abs(trace_functional(k, band, pair)) == Approx(0.0).margin(1e-15));

    // and the solver finds a feasible point for the q = 0 bundle
    conic::ConicProgram prog;
    std::vector<LinExpr> q(static_cast<std::size_t>(L), LinExpr(0.0));
    auto bundle = band_lmi_constraints(prog, q, 0.15, 0.30, 1.0);
    LinExpr obj = bundle.g1.entry(0, 0); // any bounded objective
    prog.set_objective(obj);
    const auto sol = conic::solve(prog, 1e-8);
    CHECK(sol.status == conic::SolveStatus::optimal);
}

TEST_CASE("certificate soundness: solved polynomials respect the band bound") {
    // Maximize Re Q(f0) for f0 inside the band subject to the bundle with
    // weight D: the optimum is D and the sampled sup over the band stays
    // within D (1 + 1e-6).
    const Eigen::Index L = 8;
    const double f0 = 0.22, D = 1.0;
    conic::ConicProgram prog;
    const int qb = prog.add_variables(static_cast<int>(2 * L));
    std::vector<LinExpr> q;
    for (Eigen::Index n = 0; n < L; ++n) {
        LinExpr e = LinExpr::var(qb + 2 * static_cast<int>(n));
        e.add(qb + 2 * static_cast<int>(n) + 1, cplx(0, 1));
        q.push_back(e);
    }
    band_lmi_constraints(prog, q, 0.15, 0.30, D);
    // objective: -Re Q(f0) = -sum_n (cos * q_re - sin * q_im)
    LinExpr obj;
    for (Eigen::Index n = 0; n < L; ++n) {
        const double ang = 2.0 * std::numbers::pi * f0 * double(n);
        obj.add(qb + 2 * static_cast<int>(n), -std::cos(ang));
        obj.add(qb + 2 * static_cast<int>(n) + 1, std::sin(ang));
    }
    prog.set_objective(obj);
    const auto sol = conic::solve(prog, 1e-8);
    REQUIRE(sol.status == conic::SolveStatus::optimal);
    CHECK(-sol.objective_value == Approx(D).epsilon(1e-6));

    VectorXcd qv(L);
    for (Eigen::Index n = 0; n < L; ++n)
        qv[n] = cplx(sol.primal_values[qb + 2 * n], sol.primal_values[qb + 2 * n + 1]);
    double sup = 0;
    for (int g = 0; g <= 10000; ++g) {
        const double f = 0.15 + (0.30 - 0.15) * g / 10000.0;
        sup = std::max(sup, std::abs(eval_poly(qv, f)));
    }
    CHECK(sup <= D * (1.0 + 1e-6));
    CHECK(std::abs(eval_poly(qv, f0)) == Approx(D).epsilon(1e-5));
}
