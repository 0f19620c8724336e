// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include "anchor/atomsr.hpp"
#include "anchor/rng.hpp"

using namespace anchor;
using Catch::Approx;
using conic::MatrixXcd;
using std::complex;

namespace {

MatrixXcd atom_outer(int L, double f, double c) {
    Eigen::VectorXcd a(L);
    for (int n = 0; n < L; ++n) a[n] = std::polar(1.0, -2.0 * std::numbers::pi * f * n);
    return c * a * a.adjoint();
}

PilotObservation atoms_observation(int L, const std::vector<double>& freqs,
                                   const std::vector<complex<double>>& coeffs) {
    PilotObservation obs;
    obs.grid_size = L;
    obs.noise_variance = 0;
    for (int n = 0; n < L; ++n) {
        obs.positions.push_back(n);
        complex<double> v(0, 0);
        for (std::size_t r = 0; r < freqs.size(); ++r)
            v += coeffs[r] * std::polar(1.0, -2.0 * std::numbers::pi * freqs[r] * n);
        obs.values.push_back(v);
    }
    return obs;
}

} // namespace

TEST_CASE("mu heuristic") {
    CHECK(choose_mu(0.0, 64) == 0.0);
    CHECK(choose_mu(0.01, 64) == Approx(2.307).epsilon(1e-3));
    CHECK(choose_mu(4.0 * 0.01, 64) == Approx(2.0 * choose_mu(0.01, 64)));
}

TEST_CASE("noiseless interpolation at full pilots") {
    const int L = 16;
    const auto obs = atoms_observation(L, {0.2}, {{1.0, 0.0}});
    const auto sol = solve_ast(obs, 0.0);
    for (int n = 0; n < L; ++n)
        CHECK(std::abs(sol.denoised[static_cast<std::size_t>(n)] -
                       obs.values[static_cast<std::size_t>(n)]) < 1e-6);
    // numerical rank one
    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sol.toeplitz);
    const auto ev = es.eigenvalues();
    CHECK(ev[L - 1] == Approx(double(L)).epsilon(1e-4)); // |c| a a* with |c| = 1
    CHECK(ev[L - 2] <= 1e-6 * ev[L - 1]);
    // objective equals the coefficient mass
    CHECK(ast_objective(sol) == Approx(1.0).epsilon(1e-4));
}

TEST_CASE("zero data gives the zero solution") {
    PilotObservation obs;
    obs.grid_size = 8;
    obs.positions = {0, 2, 5};
    obs.values.assign(3, {0.0, 0.0});
    const auto sol = solve_ast(obs, 0.0);
    CHECK(sol.toeplitz.norm() < 1e-6);
    CHECK(sol.slack == Approx(0.0).margin(1e-6));
    CHECK(ast_objective(sol) == Approx(0.0).margin(1e-6));
}

TEST_CASE("atomic objective equals the coefficient l1 mass") {
    const int L = 16;
    const std::vector<double> freqs{0.15, 0.45, 0.8};
    const std::vector<complex<double>> coeffs{{0.9, 0.4}, {-0.2, 1.1}, {0.5, -0.6}};
    const auto obs = atoms_observation(L, freqs, coeffs);
    const auto sol = solve_ast(obs, 0.0);
    double mass = 0;
    for (const auto& c : coeffs) mass += std::abs(c);
    CHECK(ast_objective(sol) == Approx(mass).epsilon(1e-4));

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sol.toeplitz);
    const auto ev = es.eigenvalues();
    CHECK(ev[L - 4] <= 1e-5 * ev[L - 1]); // numerical rank three
}

TEST_CASE("toeplitz frequency extraction") {
    const int L = 12;
    {
        const auto f = toeplitz_frequencies(atom_outer(L, 0.3, 1.0));
        REQUIRE(f.size() == 1);
        CHECK(f[0] == Approx(0.3).margin(1e-6));
    }
    { CHECK_THROWS_AS(toeplitz_frequencies(MatrixXcd::Identity(L, L)), estimation_error); }
    {
        Rng rng(5);
        const std::vector<double> truth{0.12, 0.37, 0.71};
        MatrixXcd t = MatrixXcd::Zero(L, L);
        for (const double f : truth) t += atom_outer(L, f, 0.5 + rng.uniform01());
        const auto f = toeplitz_frequencies(t);
        REQUIRE(f.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) CHECK(f[i] == Approx(truth[i]).margin(1e-5));
    }
    {
        // round trip across random separated sets
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            Rng rng(seed);
            std::vector<double> truth;
            while (truth.size() < 3) {
                const double f = rng.uniform01();
                bool ok = true;
                for (const double g : truth)
                    if (torus_distance(f, g) < 0.08) ok = false;
                if (ok) truth.push_back(f);
            }
            std::sort(truth.begin(), truth.end());
            MatrixXcd t = MatrixXcd::Zero(L, L);
            for (const double f : truth) t += atom_outer(L, f, 0.5 + rng.uniform01());
            const auto got = toeplitz_frequencies(t);
            REQUIRE(got.size() == truth.size());
            for (std::size_t i = 0; i < truth.size(); ++i)
                CHECK(got[i] == Approx(truth[i]).margin(1e-5));
        }
    }
}

TEST_CASE("end to end frequency recovery from the SDP factor") {
    const int L = 16;
    const std::vector<double> freqs{0.2, 0.55};
    const auto obs = atoms_observation(L, freqs, {{1.0, 0.2}, {0.3, -0.8}});
    const auto sol = solve_ast(obs, 0.0);
    const auto got = toeplitz_frequencies(sol);
    REQUIRE(got.size() == 2);
    CHECK(got[0] == Approx(0.2).margin(1e-4));
    CHECK(got[1] == Approx(0.55).margin(1e-4));
}
