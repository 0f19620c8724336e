// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_TESTS_RANDOM_PROGRAMS_HPP
#define ANCHOR_TESTS_RANDOM_PROGRAMS_HPP

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "anchor/conic/program.hpp"
#include "anchor/rng.hpp"
#include "support/pgd_oracle.hpp"

namespace anchor_tests {

using anchor::Rng;
using anchor::conic::ConicProgram;
using anchor::conic::LinExpr;

inline MatrixXd random_symmetric(Rng& rng, int m) {
    MatrixXd a(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal() / std::sqrt(double(m));
    return a;
}

inline MatrixXd random_spd(Rng& rng, int m, double lo = 0.5, double hi = 2.0) {
    MatrixXd q = MatrixXd::Identity(m, m);
    // random orthogonal via QR of a Gaussian matrix
    MatrixXd g(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) g(i, j) = rng.normal();
    q = Eigen::HouseholderQR<MatrixXd>(g).householderQ();
    VectorXd d(m);
    for (int i = 0; i < m; ++i) d[i] = rng.uniform(lo, hi);
    return q * d.asDiagonal() * q.transpose();
}

/// Strictly feasible, bounded inequality-form SDP: min c'x, F0 + sum x_i Fi >= 0.
/// Primal Slater point is recorded; c is built from a PD dual multiplier so the
/// optimum is finite and strong duality holds.
inline SmallSdp random_bounded_sdp(Rng& rng, int n_vars, int order) {
    SmallSdp p;
    p.fi.reserve(static_cast<std::size_t>(n_vars));
    for (int i = 0; i < n_vars; ++i) p.fi.push_back(random_symmetric(rng, order));
    VectorXd xstar(n_vars);
    for (int i = 0; i < n_vars; ++i) xstar[i] = rng.uniform(-1.0, 1.0);
    p.f0 = random_spd(rng, order);
    for (int i = 0; i < n_vars; ++i) p.f0 -= xstar[i] * p.fi[static_cast<std::size_t>(i)];
    const MatrixXd zstar = random_spd(rng, order);
    p.c.resize(n_vars);
    for (int i = 0; i < n_vars; ++i)
        p.c[i] = (p.fi[static_cast<std::size_t>(i)] * zstar).trace();
    p.strictly_feasible = xstar;
    return p;
}

/// The same SDP expressed through the modeling container.
inline ConicProgram to_program(const SmallSdp& p) {
    ConicProgram prog;
    const int n = static_cast<int>(p.c.size());
    const int base = prog.add_variables(n);
    const Eigen::Index order = p.f0.rows();
    std::vector<ConicProgram::PsdEntry> entries;
    for (Eigen::Index c = 0; c < order; ++c)
        for (Eigen::Index r = 0; r <= c; ++r) {
            LinExpr e(p.f0(r, c));
            for (int i = 0; i < n; ++i) {
                const double a = p.fi[static_cast<std::size_t>(i)](r, c);
                if (a != 0.0) e.add(base + i, a);
            }
            entries.push_back({r, c, e});
        }
    prog.add_psd_block(order, std::move(entries), false);
    LinExpr obj;
    for (int i = 0; i < n; ++i) obj.add(base + i, p.c[i]);
    prog.set_objective(obj);
    return prog;
}

/// min_x ||B x + b||_2 as an SOC program; exact optimum via least squares.
struct SocInstance {
    ConicProgram prog;
    double oracle_value;
};

inline SocInstance random_soc_instance(Rng& rng, int n_vars, int rows) {
    MatrixXd B(rows, n_vars);
    VectorXd b(rows);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < n_vars; ++j) B(i, j) = rng.normal();
        b[i] = rng.normal();
    }
    SocInstance out;
    const int t = out.prog.add_variable();
    const int xb = out.prog.add_variables(n_vars);
    std::vector<LinExpr> coords;
    coords.push_back(LinExpr::var(t));
    for (int i = 0; i < rows; ++i) {
        LinExpr e(b[i]);
        for (int j = 0; j < n_vars; ++j) e.add(xb + j, B(i, j));
        coords.push_back(e);
    }
    out.prog.add_soc_block(std::move(coords));
    out.prog.set_objective(LinExpr::var(t));
    const VectorXd xls = B.colPivHouseholderQr().solve(-b);
    out.oracle_value = (B * xls + b).norm();
    return out;
}

} // namespace anchor_tests

#endif
