// SPDX-License-Identifier: Apache-2.0
//
// Brute-force penalized gradient-descent oracle for small inequality-form
// SDPs.  Deliberately independent of the interior-point code path: it touches
// only Eigen and evaluates min c'x s.t. F0 + sum_i x_i Fi >= 0 by eigenvalue
// penalties with rho-continuation.  Accuracy is adequate for testing solver
// objectives at ~1e-5 relative on well-conditioned instances of order <= 6.
#ifndef ANCHOR_TESTS_PGD_ORACLE_HPP
#define ANCHOR_TESTS_PGD_ORACLE_HPP

#include <Eigen/Dense>
#include <vector>

namespace anchor_tests {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SmallSdp {
    VectorXd c;                 // objective, minimize c'x
    MatrixXd f0;                // constant block
    std::vector<MatrixXd> fi;   // per-variable blocks
    VectorXd strictly_feasible; // a point with F(x) > 0 (generator guarantee)
};

inline MatrixXd sdp_eval(const SmallSdp& p, const VectorXd& x) {
    MatrixXd f = p.f0;
    for (int i = 0; i < x.size(); ++i) f += x[i] * p.fi[static_cast<std::size_t>(i)];
    return f;
}

/// min c'x + rho * sum_j max(0, -lambda_j(F(x)))^2 by gradient descent with
/// backtracking, warm-started across a rho ladder.
inline double pgd_sdp_objective(const SmallSdp& p, double* x_out = nullptr) {
    const int n = static_cast<int>(p.c.size());
    VectorXd x = p.strictly_feasible;
    auto penalty_and_grad = [&](const VectorXd& pt, double rho, VectorXd& grad) {
        const MatrixXd f = sdp_eval(p, pt);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(f);
        const VectorXd ev = es.eigenvalues();
        const MatrixXd v = es.eigenvectors();
        double pen = 0.0;
        grad = p.c;
        for (int j = 0; j < ev.size(); ++j) {
            if (ev[j] >= 0) continue;
            pen += ev[j] * ev[j];
            for (int i = 0; i < n; ++i) {
                const double sens =
                    v.col(j).dot(p.fi[static_cast<std::size_t>(i)] * v.col(j));
                grad[i] += rho * 2.0 * ev[j] * sens;
            }
        }
        return p.c.dot(pt) + rho * pen;
    };

    for (double rho = 1.0; rho <= 1e9; rho *= 10.0) {
        double step = 1.0;
        for (int it = 0; it < 4000; ++it) {
            VectorXd grad;
            const double val = penalty_and_grad(x, rho, grad);
            if (grad.norm() < 1e-12 * (1.0 + std::abs(val))) break;
            // backtracking line search
            double t = step;
            VectorXd xn;
            double vn = 0;
            bool moved = false;
            for (int ls = 0; ls < 60; ++ls) {
                xn = x - t * grad;
                VectorXd gdummy;
                vn = penalty_and_grad(xn, rho, gdummy);
                if (vn < val - 0.25 * t * grad.squaredNorm()) {
                    moved = true;
                    break;
                }
                t *= 0.5;
            }
            if (!moved) break;
            x = xn;
            step = std::min(1.0, t * 2.0);
        }
    }
    if (x_out)
        for (int i = 0; i < n; ++i) x_out[i] = x[i];
    return p.c.dot(x);
}

} // namespace anchor_tests

#endif
