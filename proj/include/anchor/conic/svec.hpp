// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_CONIC_SVEC_HPP
#define ANCHOR_CONIC_SVEC_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>

#include "anchor/errors.hpp"

namespace anchor::conic {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

/// Real symmetric embedding of a Hermitian matrix: H = A + jB maps to
/// [[A, -B], [B, A]].  The embedding is linear, preserves positive
/// semidefiniteness, and doubles every eigenvalue's multiplicity.
inline MatrixXd hermitian_embed(const MatrixXcd& h, double herm_tol = 1e-12) {
    if (h.rows() != h.cols()) throw shape_error("hermitian_embed: matrix must be square");
    const double scale = std::max(1.0, h.norm());
    if ((h - h.adjoint()).norm() > herm_tol * scale)
        throw shape_error("hermitian_embed: input is not Hermitian within tolerance");
    const Eigen::Index n = h.rows();
    MatrixXd out(2 * n, 2 * n);
    const MatrixXd re = h.real();
    const MatrixXd im = h.imag();
    out.topLeftCorner(n, n) = re;
    out.bottomRightCorner(n, n) = re;
    out.topRightCorner(n, n) = -im;
    out.bottomLeftCorner(n, n) = im;
    return out;
}

/// Inverse of hermitian_embed with J-symmetrization: a general 2n x 2n real
/// symmetric S is projected onto the embedded-Hermitian subspace by averaging
/// the two diagonal copies and antisymmetrizing the off-diagonal copies.
inline MatrixXcd hermitian_extract(const MatrixXd& s) {
    const Eigen::Index n2 = s.rows();
    if (n2 % 2 != 0 || s.cols() != n2) throw shape_error("hermitian_extract: bad dimensions");
    const Eigen::Index n = n2 / 2;
    MatrixXd a = 0.5 * (s.topLeftCorner(n, n) + s.bottomRightCorner(n, n));
    MatrixXd b = 0.5 * (s.bottomLeftCorner(n, n) - s.topRightCorner(n, n));
    a = 0.5 * (a + a.transpose()).eval();
    b = 0.5 * (b - b.transpose()).eval();
    return a + std::complex<double>(0, 1) * b;
}

/// Dimension of the packed symmetric vectorization of an n x n matrix.
constexpr Eigen::Index svec_dim(Eigen::Index n) { return n * (n + 1) / 2; }

/// Packed symmetric vectorization: diagonal entries unchanged, off-diagonal
/// entries scaled by sqrt(2) so that <svec(A), svec(B)> = tr(AB).
inline VectorXd svec(const MatrixXd& a) {
    const Eigen::Index n = a.rows();
    VectorXd v(svec_dim(n));
    const double rt2 = std::numbers::sqrt2;
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) v[k++] = rt2 * 0.5 * (a(i, j) + a(j, i));
        v[k++] = a(j, j);
    }
    return v;
}

inline MatrixXd smat(const VectorXd& v, Eigen::Index n) {
    if (v.size() != svec_dim(n)) throw shape_error("smat: size mismatch");
    MatrixXd a(n, n);
    const double inv_rt2 = 1.0 / std::numbers::sqrt2;
    Eigen::Index k = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < j; ++i) {
            const double x = v[k++] * inv_rt2;
            a(i, j) = x;
            a(j, i) = x;
        }
        a(j, j) = v[k++];
    }
    return a;
}

/// svec index of entry (i, j), i <= j, in the column-major upper packing.
constexpr Eigen::Index svec_index(Eigen::Index i, Eigen::Index j) {
    return j * (j + 1) / 2 + i;
}

} // namespace anchor::conic

#endif
