// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_CONIC_SOLVER_HPP
#define ANCHOR_CONIC_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "anchor/conic/cones.hpp"
#include "anchor/conic/program.hpp"
#include "anchor/conic/svec.hpp"
#include "anchor/errors.hpp"

namespace anchor::conic {

enum class SolveStatus { optimal, infeasible, unbounded, max_iterations, numerical_failure };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::max_iterations: return "max_iterations";
        case SolveStatus::numerical_failure: return "numerical_failure";
    }
    return "?";
}

struct IterStat {
    double pobj, dobj, gap, pres, dres, step, mu;
};

struct KktResiduals {
    double primal = std::numeric_limits<double>::quiet_NaN();
    double dual = std::numeric_limits<double>::quiet_NaN();
    double gap = std::numeric_limits<double>::quiet_NaN();
};

struct ConicSolution {
    SolveStatus status = SolveStatus::numerical_failure;
    VectorXd primal_values;  // values of the program's scalar variables
    double objective_value = std::numeric_limits<double>::quiet_NaN();
    KktResiduals kkt_residuals;
    int iterations = 0;
    std::vector<IterStat> trace;
    std::vector<MatrixXcd> psd_values; // constrained matrix expressions at the solution
    std::vector<MatrixXcd> psd_duals;  // multipliers of the PSD constraints
    std::vector<VectorXd> soc_values;
};

namespace detail {

inline double vnorm(const VectorXd& v) { return v.size() ? v.norm() : 0.0; }
inline double vdot(const VectorXd& a, const VectorXd& b) { return a.size() ? a.dot(b) : 0.0; }

/// Internal standard form: min <Ccone, X> + cfree' f  s.t. rows(X, f) = rhs,
/// X in product cone, f free.  Solved through its homogeneous self-dual
/// embedding; the multipliers x of the rows form the small dense KKT system.
struct Standard {
    ConeLayout cones;
    Eigen::Index n = 0; // rows
    Eigen::Index p = 0; // free variables
    // Per cone block, per row: merged coefficient triplets.
    std::vector<std::vector<std::vector<ConicProgram::BlockCoeff>>> cols_by_block;
    MatrixXd A;  // p x n free-variable coefficients
    VectorXd c;  // = -rhs
    VectorXd h;  // stacked svec cost (the "C" matrices)
    VectorXd b;  // free costs

    static Standard build(const ConicProgram::Lowered& low) {
        Standard sd;
        sd.cones = low.cones;
        sd.n = static_cast<Eigen::Index>(low.rows.size());
        sd.p = low.n_free;
        sd.c = -low.rhs;
        sd.h = low.cost_cone;
        sd.b = low.cost_free;
        sd.A = MatrixXd::Zero(sd.p, sd.n);
        for (Eigen::Index j = 0; j < sd.n; ++j)
            for (const auto& [f, v] : low.row_free[static_cast<std::size_t>(j)])
                sd.A(f, j) += v;
        const auto nblocks = sd.cones.blocks.size();
        sd.cols_by_block.resize(nblocks);
        for (auto& cb : sd.cols_by_block)
            cb.resize(static_cast<std::size_t>(sd.n));
        for (Eigen::Index j = 0; j < sd.n; ++j) {
            for (std::size_t bi = 0; bi < nblocks; ++bi) {
                const auto& coeffs = low.rows[static_cast<std::size_t>(j)][bi];
                if (coeffs.empty()) continue;
                // merge duplicate positions
                auto merged = coeffs;
                std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) {
                    return std::pair(a.r, a.c) < std::pair(b.r, b.c);
                });
                std::vector<ConicProgram::BlockCoeff> out;
                for (const auto& t : merged) {
                    if (!out.empty() && out.back().r == t.r && out.back().c == t.c)
                        out.back().v += t.v;
                    else
                        out.push_back(t);
                }
                std::erase_if(out, [](const auto& t) { return t.v == 0.0; });
                sd.cols_by_block[bi][static_cast<std::size_t>(j)] = std::move(out);
            }
        }
        return sd;
    }

    /// u += alpha * (column j as a stacked cone vector).
    void col_axpy(Eigen::Index j, double alpha, VectorXd& u) const {
        for (std::size_t bi = 0; bi < cones.blocks.size(); ++bi) {
            const auto& blk = cones.blocks[bi];
            for (const auto& t : cols_by_block[bi][static_cast<std::size_t>(j)]) {
                if (blk.type == BlockType::soc) {
                    u[blk.offset + t.r] += alpha * t.v;
                } else {
                    const double sc = (t.r == t.c) ? 1.0 : std::numbers::sqrt2;
                    u[blk.offset + svec_index(t.r, t.c)] += alpha * t.v * sc;
                }
            }
        }
    }

    double col_dot(Eigen::Index j, const VectorXd& u) const {
        double acc = 0;
        for (std::size_t bi = 0; bi < cones.blocks.size(); ++bi) {
            const auto& blk = cones.blocks[bi];
            for (const auto& t : cols_by_block[bi][static_cast<std::size_t>(j)]) {
                if (blk.type == BlockType::soc) {
                    acc += t.v * u[blk.offset + t.r];
                } else {
                    const double sc = (t.r == t.c) ? 1.0 : std::numbers::sqrt2;
                    acc += t.v * sc * u[blk.offset + svec_index(t.r, t.c)];
                }
            }
        }
        return acc;
    }

    VectorXd G_apply(const VectorXd& x) const {
        VectorXd u = VectorXd::Zero(cones.total);
        for (Eigen::Index j = 0; j < n; ++j)
            if (x[j] != 0.0) col_axpy(j, x[j], u);
        return u;
    }

    VectorXd Gt_apply(const VectorXd& u) const {
        VectorXd r(n);
        for (Eigen::Index j = 0; j < n; ++j) r[j] = col_dot(j, u);
        return r;
    }
};

struct EmbeddingState {
    VectorXd x, y, s, z;
    double tau = 1.0, kappa = 1.0;
};

/// Dense KKT factorization of [[H, A'], [A, 0]] with H = G'(W'W)^{-1}G.
class KktFactor {
public:
    bool factor(const Standard& sd, const ConeOps& ops) {
        const Eigen::Index n = sd.n;
        MatrixXd H = MatrixXd::Zero(n, n);
        for (std::size_t bi = 0; bi < sd.cones.blocks.size(); ++bi) {
            const auto& blk = sd.cones.blocks[bi];
            const auto& cols = sd.cols_by_block[bi];
            std::vector<Eigen::Index> present;
            for (Eigen::Index j = 0; j < n; ++j)
                if (!cols[static_cast<std::size_t>(j)].empty()) present.push_back(j);
            if (present.empty()) continue;
            if (blk.type == BlockType::psd) {
                const MatrixXd& Tinv = ops.scaling(bi).Tinv;
                const Eigen::Index d = blk.order;
                MatrixXd V(d, d);
                for (std::size_t jj = 0; jj < present.size(); ++jj) {
                    const Eigen::Index j = present[jj];
                    const auto& trips = cols[static_cast<std::size_t>(j)];
                    // V = Tinv * M_j * Tinv using only the nonzero rows of M_j
                    std::vector<Eigen::Index> rows;
                    for (const auto& t : trips) {
                        rows.push_back(t.r);
                        if (t.r != t.c) rows.push_back(t.c);
                    }
                    std::sort(rows.begin(), rows.end());
                    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
                    MatrixXd B = MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), d);
                    auto pos = [&](Eigen::Index r) {
                        return std::distance(rows.begin(),
                                             std::lower_bound(rows.begin(), rows.end(), r));
                    };
                    for (const auto& t : trips) {
                        B.row(pos(t.r)) += t.v * Tinv.row(t.c);
                        if (t.r != t.c) B.row(pos(t.c)) += t.v * Tinv.row(t.r);
                    }
                    MatrixXd Tcols(d, static_cast<Eigen::Index>(rows.size()));
                    for (std::size_t k = 0; k < rows.size(); ++k)
                        Tcols.col(static_cast<Eigen::Index>(k)) = Tinv.col(rows[k]);
                    V.noalias() = Tcols * B;
                    for (std::size_t kk = 0; kk <= jj; ++kk) {
                        const Eigen::Index k = present[kk];
                        double acc = 0;
                        for (const auto& t : cols[static_cast<std::size_t>(k)])
                            acc += (t.r == t.c) ? t.v * V(t.r, t.r)
                                                : t.v * (V(t.r, t.c) + V(t.c, t.r));
                        H(k, j) += acc;
                        if (k != j) H(j, k) += acc;
                    }
                }
            } else {
                MatrixXd U(blk.size, static_cast<Eigen::Index>(present.size()));
                VectorXd g = VectorXd::Zero(blk.size);
                const auto& w = ops.scaling(bi);
                const VectorXd jv = detail::soc_apply_J(w.v);
                for (std::size_t jj = 0; jj < present.size(); ++jj) {
                    g.setZero();
                    for (const auto& t : cols[static_cast<std::size_t>(present[jj])])
                        g[t.r] += t.v;
                    U.col(static_cast<Eigen::Index>(jj)) =
                        (2.0 * jv * jv.dot(g) - detail::soc_apply_J(g)) / w.eta;
                }
                MatrixXd Hsub = U.transpose() * U;
                for (std::size_t jj = 0; jj < present.size(); ++jj)
                    for (std::size_t kk = 0; kk < present.size(); ++kk)
                        H(present[jj], present[kk]) +=
                            Hsub(static_cast<Eigen::Index>(jj), static_cast<Eigen::Index>(kk));
            }
        }
        // Static regularization with escalation; iterative refinement in the
        // solve recovers the accuracy the ridge costs.
        if (n > 0) {
            const double base = std::max(1.0, H.diagonal().maxCoeff());
            bool ok = false;
            for (const double ridge : {1e-14, 1e-11, 1e-8}) {
                MatrixXd Hr = H;
                Hr.diagonal().array() += ridge * base;
                hldlt_.compute(Hr);
                if (hldlt_.info() == Eigen::Success && hldlt_.isPositive()) {
                    ok = true;
                    break;
                }
            }
            if (!ok) return false;
        }
        if (sd.p > 0) {
            const MatrixXd HiAt = hldlt_.solve(sd.A.transpose());
            MatrixXd S = sd.A * HiAt;
            S.diagonal().array() += 1e-14 * std::max(1.0, S.diagonal().maxCoeff());
            sldlt_.compute(S);
            if (sldlt_.info() != Eigen::Success) return false;
        }
        return true;
    }

    /// Solve [[H, A'],[A, 0]] [ux; uy] = [r1; r2].
    void solve_aug(const Standard& sd, const VectorXd& r1, const VectorXd& r2, VectorXd& ux,
                   VectorXd& uy) const {
        if (sd.n == 0) {
            ux.resize(0);
            uy.resize(0);
            return;
        }
        if (sd.p == 0) {
            ux = hldlt_.solve(r1);
            uy.resize(0);
            return;
        }
        const VectorXd Hir1 = hldlt_.solve(r1);
        uy = sldlt_.solve(sd.A * Hir1 - r2);
        ux = hldlt_.solve(r1 - sd.A.transpose() * uy);
    }

private:
    Eigen::LDLT<MatrixXd> hldlt_, sldlt_;
};

struct RawResult {
    SolveStatus status = SolveStatus::numerical_failure;
    VectorXd x, y, s, z; // tau-normalized on optimal exit
    double pobj = 0, dobj = 0;
    KktResiduals res;
    int iterations = 0;
    std::vector<IterStat> trace;
};

/// Homogeneous self-dual interior-point method (NT scaling, Mehrotra
/// predictor-corrector) for the conelp problem
///   min c'x  s.t.  Gx + s = h, Ax = b, s in K.
inline RawResult conelp(const Standard& sd, double tol, int max_iter) {
    RawResult out;
    ConeOps ops(sd.cones);
    const Eigen::Index n = sd.n, p = sd.p, m = sd.cones.total;
    if (m == 0) throw shape_error("conelp: no cone constraints");

    EmbeddingState st;
    st.x = VectorXd::Zero(n);
    st.y = VectorXd::Zero(p);
    st.s = sd.cones.identity();
    st.z = st.s;

    // Least-squares initialization (W = I): a point satisfying the primal
    // and dual equations exactly, shifted into the cone interior.
    {
        ConeOps init_ops(sd.cones);
        VectorXd lam0;
        if (!init_ops.compute_scaling(st.s, st.z, lam0)) {
            out.status = SolveStatus::numerical_failure;
            return out;
        }
        KktFactor kkt0;
        if (kkt0.factor(sd, init_ops)) {
            const VectorXd e = sd.cones.identity();
            auto solve0 = [&](const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
                              VectorXd& ux, VectorXd& uy, VectorXd& uz) {
                const VectorXd r1 = bx + sd.Gt_apply(bz);
                kkt0.solve_aug(sd, r1, by, ux, uy);
                uz = sd.G_apply(ux) - bz;
            };
            VectorXd x0, ydum, uz0;
            solve0(VectorXd::Zero(n), sd.b, sd.h, x0, ydum, uz0);
            VectorXd s0 = -uz0; // h - G x0
            const double ts = cone_violation(sd.cones, s0);
            if (ts >= 0) s0 += (1.0 + ts) * e;
            VectorXd xdum, y0, z0;
            solve0(-sd.c, VectorXd::Zero(p), VectorXd::Zero(m), xdum, y0, z0);
            const double tz = cone_violation(sd.cones, z0);
            if (tz >= 0) z0 += (1.0 + tz) * e;
            st.x = x0;
            st.y = y0;
            st.s = s0;
            st.z = z0;
        }
    }

    const double normb = std::max(1.0, vnorm(sd.b));
    const double normh = std::max(1.0, vnorm(sd.h));
    const double normc = std::max(1.0, vnorm(sd.c));
    const double degree = sd.cones.degree + 1.0;

    KktFactor kkt;
    VectorXd lambda;

    auto kkt_solve3 = [&](const VectorXd& bx, const VectorXd& by, const VectorXd& bz,
                          VectorXd& ux, VectorXd& uy, VectorXd& uz) {
        // [0 A' G'; A 0 0; G 0 -W'W](ux,uy,uz) = (bx,by,bz)
        VectorXd t = ops.apply_WinvT(bz);
        t = ops.apply_Winv(t); // (W'W)^{-1} bz
        const VectorXd r1 = bx + sd.Gt_apply(t);
        kkt.solve_aug(sd, r1, by, ux, uy);
        VectorXd gz = sd.G_apply(ux) - bz;
        gz = ops.apply_WinvT(gz);
        uz = ops.apply_Winv(gz);
        // iterative refinement on the 3x3 system
        for (int ref = 0; ref < 2; ++ref) {
            VectorXd rx = bx - (sd.A.transpose() * uy + sd.Gt_apply(uz));
            VectorXd ry = by - sd.A * ux;
            VectorXd rz = bz - (sd.G_apply(ux) - ops.apply_Wt(ops.apply_W(uz)));
            VectorXd dx, dy, dz;
            VectorXd t2 = ops.apply_Winv(ops.apply_WinvT(rz));
            const VectorXd r1b = rx + sd.Gt_apply(t2);
            kkt.solve_aug(sd, r1b, ry, dx, dy);
            VectorXd gz2 = sd.G_apply(dx) - rz;
            gz2 = ops.apply_WinvT(gz2);
            ux += dx;
            uy += dy;
            uz += ops.apply_Winv(gz2);
        }
    };

    double best_score = std::numeric_limits<double>::infinity();
    double best_progress = std::numeric_limits<double>::infinity();
    int stalled = 0;

    for (int it = 0; it <= max_iter; ++it) {
        // residuals of the homogeneous system
        VectorXd resx = sd.Gt_apply(st.z) + sd.c * st.tau;
        if (p > 0) resx += sd.A.transpose() * st.y;
        const VectorXd resy = sd.A * st.x - sd.b * st.tau;
        const VectorXd resz = sd.G_apply(st.x) + st.s - sd.h * st.tau;
        const double cx = vdot(sd.c, st.x), by = vdot(sd.b, st.y), hz = sd.h.dot(st.z);
        const double rest = cx + by + hz + st.kappa;
        const double gap = st.s.dot(st.z);
        const double mu = (gap + st.tau * st.kappa) / degree;

        const double pobj = cx / st.tau;
        const double dobj = -(hz + by) / st.tau;
        const double pres = std::max(vnorm(resy) / normb, resz.norm() / normh) / st.tau;
        const double dres = vnorm(resx) / normc / st.tau;
        const double relgap = (gap / (st.tau * st.tau)) /
                              std::max(1.0, 0.5 * (std::abs(pobj) + std::abs(dobj)));
        out.trace.push_back({pobj, dobj, gap / (st.tau * st.tau), pres, dres, 0.0, mu});
        out.iterations = it;

        const double score = std::max({pres, dres, relgap});
        if (!std::isfinite(score)) {
            out.status = SolveStatus::numerical_failure;
            return out;
        }
        if (score < best_score) {
            best_score = score;
            out.x = st.x / st.tau;
            out.y = st.y / st.tau;
            out.s = st.s / st.tau;
            out.z = st.z / st.tau;
            out.pobj = pobj;
            out.dobj = dobj;
            out.res = {pres, dres, relgap};
        }

        if (pres <= tol && dres <= tol && relgap <= tol) {
            out.status = SolveStatus::optimal;
            return out;
        }
        // infeasibility certificates
        const double hzby = hz + by;
        double cert_score = std::numeric_limits<double>::infinity();
        if (hzby < 0) {
            const VectorXd cert = resx - sd.c * st.tau; // A'y + G'z
            const double pinfres = vnorm(cert) / normc / (-hzby);
            cert_score = std::min(cert_score, pinfres);
            if (pinfres <= tol) {
                out.status = SolveStatus::infeasible;
                out.y = st.y / (-hzby);
                out.z = st.z / (-hzby);
                return out;
            }
        }
        if (cx < 0) {
            const double nr = std::max(vnorm(sd.A * st.x) / normb,
                                       (sd.G_apply(st.x) + st.s).norm() / normh);
            const double dinfres = nr / (-cx);
            cert_score = std::min(cert_score, dinfres);
            if (dinfres <= tol) {
                out.status = SolveStatus::unbounded;
                out.x = st.x / (-cx);
                out.s = st.s / (-cx);
                return out;
            }
        }
        // Progress toward either optimality or an infeasibility certificate
        // resets the stall counter.
        const double progress = std::min(score, cert_score);
        if (progress < best_progress) {
            best_progress = progress;
            stalled = 0;
        } else if (progress > 2.0 * best_progress) {
            ++stalled;
        }
        if (it == max_iter) {
            out.status = SolveStatus::max_iterations;
            return out;
        }

        if (!ops.compute_scaling(st.s, st.z, lambda)) {
            out.status = SolveStatus::numerical_failure;
            return out;
        }
        if (!kkt.factor(sd, ops)) {
            out.status = SolveStatus::numerical_failure;
            return out;
        }

        VectorXd x1, y1, z1;
        kkt_solve3(-sd.c, sd.b, sd.h, x1, y1, z1);
        const double cdot1 = vdot(sd.c, x1) + vdot(sd.b, y1) + sd.h.dot(z1);
        const double denom = cdot1 - st.kappa / st.tau;
        if (!std::isfinite(denom) || std::abs(denom) < 1e-300) {
            out.status = SolveStatus::numerical_failure;
            return out;
        }

        auto direction = [&](double eta, const VectorXd& rho, double dkap_rhs, VectorXd& dx,
                             VectorXd& dy, VectorXd& dz, VectorXd& ds, double& dtau,
                             double& dkappa) {
            const VectorXd bz = -eta * resz - ops.apply_Wt(rho);
            VectorXd x2, y2, z2;
            kkt_solve3(-eta * resx, -eta * resy, bz, x2, y2, z2);
            const double cdot2 = vdot(sd.c, x2) + vdot(sd.b, y2) + sd.h.dot(z2);
            dtau = (-eta * rest - cdot2 - dkap_rhs / st.tau) / denom;
            dx = x2 + dtau * x1;
            dy = y2 + dtau * y1;
            dz = z2 + dtau * z1;
            ds = ops.apply_Wt(rho - ops.apply_W(dz));
            dkappa = (dkap_rhs - st.kappa * dtau) / st.tau;
        };

        // predictor (affine) direction: rho = lambda^{-1} o (-lambda o lambda)
        VectorXd dxa, dya, dza, dsa;
        double dtaua, dkappaa;
        direction(1.0, -lambda, -st.tau * st.kappa, dxa, dya, dza, dsa, dtaua, dkappaa);

        const VectorXd dza_sc = ops.apply_W(dza);
        const VectorXd dsa_sc = -lambda - dza_sc; // W^{-T} ds = rho - W dz
        double alpha = std::min(1.0, ops.max_step(lambda, dsa_sc));
        alpha = std::min(alpha, ops.max_step(lambda, dza_sc));
        if (dtaua < 0) alpha = std::min(alpha, -st.tau / dtaua);
        if (dkappaa < 0) alpha = std::min(alpha, -st.kappa / dkappaa);
        const double sigma = std::pow(std::clamp(1.0 - alpha, 0.0, 1.0), 3.0);

        // corrector
        const VectorXd comp =
            -ops.jordan(lambda, lambda) - ops.jordan(dsa_sc, dza_sc) +
            sigma * mu * sd.cones.identity();
        const VectorXd rho = ops.jordan_solve_lambda(lambda, comp);
        const double dkap_rhs = -st.tau * st.kappa - dtaua * dkappaa + sigma * mu;
        const double eta = 1.0 - sigma;

        VectorXd dx, dy, dz, ds;
        double dtau, dkappa;
        direction(eta, rho, dkap_rhs, dx, dy, dz, ds, dtau, dkappa);

        const VectorXd dz_sc = ops.apply_W(dz);
        const VectorXd ds_sc = rho - dz_sc;
        double step = std::min(1.0, 0.99 * ops.max_step(lambda, ds_sc));
        step = std::min(step, 0.99 * ops.max_step(lambda, dz_sc));
        if (dtau < 0) step = std::min(step, -0.99 * st.tau / dtau);
        if (dkappa < 0) step = std::min(step, -0.99 * st.kappa / dkappa);
        out.trace.back().step = step;
        if (!(step > 1e-10) || stalled > 8) {
            out.status = SolveStatus::max_iterations;
            return out;
        }

        st.x += step * dx;
        st.y += step * dy;
        st.z += step * dz;
        st.s += step * ds;
        st.tau += step * dtau;
        st.kappa += step * dkappa;
        if (!(st.tau > 0) || !(st.kappa > 0)) {
            out.status = SolveStatus::numerical_failure;
            return out;
        }
    }
    out.status = SolveStatus::max_iterations;
    return out;
}

} // namespace detail

/// Solve a ConicProgram.  On status == optimal all reported KKT residuals are
/// at most `tolerance`.
inline ConicSolution solve(const ConicProgram& prog, double tolerance = 1e-7,
                           int max_iterations = 200) {
    const auto low = prog.lower();
    const auto sd = detail::Standard::build(low);
    auto raw = detail::conelp(sd, tolerance, max_iterations);

    ConicSolution sol;
    // Status mapping: the program was fed as the dual of the internal conelp
    // problem, so the infeasible/unbounded certificates swap roles.
    switch (raw.status) {
        case SolveStatus::optimal: sol.status = SolveStatus::optimal; break;
        case SolveStatus::infeasible: sol.status = SolveStatus::unbounded; break;
        case SolveStatus::unbounded: sol.status = SolveStatus::infeasible; break;
        default: sol.status = raw.status; break;
    }
    sol.iterations = raw.iterations;
    sol.trace = std::move(raw.trace);
    sol.kkt_residuals = {raw.res.dual, raw.res.primal, raw.res.gap};

    if (sol.status != SolveStatus::optimal && sol.status != SolveStatus::max_iterations)
        return sol;

    // Scalar variable readout: cone side (z) carries the matrix variables and
    // aliased scalars; free scalars come from the multiplier vector y.
    const auto pattern_value = [&](const ConicProgram::Lowered::VarReadout& vr) {
        const auto& blk = sd.cones.blocks[static_cast<std::size_t>(vr.cone_block)];
        double acc = 0;
        for (const auto& bc : vr.pattern) {
            if (blk.type == BlockType::soc) {
                acc += bc.v * raw.z[blk.offset + bc.r];
            } else {
                const double sc = (bc.r == bc.c) ? 1.0 : std::numbers::sqrt2;
                acc += bc.v * sc * raw.z[blk.offset + svec_index(bc.r, bc.c)];
            }
        }
        return acc;
    };
    sol.primal_values.resize(prog.variable_count());
    for (int v = 0; v < prog.variable_count(); ++v) {
        const auto& vr = low.vars[static_cast<std::size_t>(v)];
        sol.primal_values[v] =
            vr.aliased ? pattern_value(vr) * vr.inv_scale : raw.y[vr.free_index];
    }
    sol.objective_value =
        low.cost_constant + low.cost_cone.dot(raw.z) + detail::vdot(low.cost_free, raw.y);

    for (Eigen::Index pi = 0; pi < prog.psd_block_count(); ++pi) {
        const auto bi = low.psd_cone[static_cast<std::size_t>(pi)];
        const auto& blk = sd.cones.blocks[static_cast<std::size_t>(bi)];
        const MatrixXd Zb = smat(raw.z.segment(blk.offset, blk.size), blk.order);
        const MatrixXd Sb = smat(raw.s.segment(blk.offset, blk.size), blk.order);
        if (prog.psd_block(static_cast<int>(pi)).complex_block) {
            sol.psd_values.push_back(hermitian_extract(Zb));
            sol.psd_duals.push_back(hermitian_extract(Sb));
        } else {
            sol.psd_values.push_back(Zb.cast<cplx>());
            sol.psd_duals.push_back(Sb.cast<cplx>());
        }
    }
    for (std::size_t si = 0; si < low.soc_cone.size(); ++si) {
        const auto bi = low.soc_cone[si];
        const auto& blk = sd.cones.blocks[static_cast<std::size_t>(bi)];
        sol.soc_values.push_back(raw.z.segment(blk.offset, blk.size));
    }
    return sol;
}

} // namespace anchor::conic

#endif
