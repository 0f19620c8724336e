// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_CONIC_CONES_HPP
#define ANCHOR_CONIC_CONES_HPP

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "anchor/conic/svec.hpp"

namespace anchor::conic {

enum class BlockType { soc, psd };

/// One cone block in the product cone.  SOC blocks live in R^dim with the
/// first coordinate as the cone axis; PSD blocks are real symmetric matrices
/// of the given order stored in packed svec form.
struct ConeBlock {
    BlockType type;
    Eigen::Index order;  // SOC: vector dimension (>= 1); PSD: matrix order
    Eigen::Index offset; // start in the stacked cone vector
    Eigen::Index size;   // SOC: order; PSD: order*(order+1)/2
};

struct ConeLayout {
    std::vector<ConeBlock> blocks;
    Eigen::Index total = 0;
    double degree = 0; // complementarity normalization: dim per SOC, order per PSD

    Eigen::Index add_soc(Eigen::Index dim) {
        blocks.push_back({BlockType::soc, dim, total, dim});
        total += dim;
        degree += static_cast<double>(dim);
        return static_cast<Eigen::Index>(blocks.size()) - 1;
    }
    Eigen::Index add_psd(Eigen::Index order) {
        blocks.push_back({BlockType::psd, order, total, svec_dim(order)});
        total += svec_dim(order);
        degree += static_cast<double>(order);
        return static_cast<Eigen::Index>(blocks.size()) - 1;
    }

    /// Cone identity element (interior point used for initialization).
    VectorXd identity() const {
        VectorXd e = VectorXd::Zero(total);
        for (const auto& b : blocks) {
            if (b.type == BlockType::soc) {
                e[b.offset] = 1.0;
            } else {
                e.segment(b.offset, b.size) = svec(MatrixXd::Identity(b.order, b.order));
            }
        }
        return e;
    }
};

/// Nesterov-Todd scaling state for one block.
struct BlockScaling {
    // SOC: W = eta (2 v v' - J), J = diag(1, -I); v'Jv = 1.
    VectorXd v;
    double eta = 1.0;
    // PSD: R and R^{-T}; lambda = R' Z R = R^{-1} S R^{-T} is diagonal.
    MatrixXd R, Rti, Tinv; // Tinv = Rti Rti'
    VectorXd eigs;         // PSD: diagonal of lambda
};

namespace detail {

inline double soc_residual(const Eigen::Ref<const VectorXd>& u) {
    return u[0] * u[0] - u.tail(u.size() - 1).squaredNorm();
}

inline VectorXd soc_apply_J(const Eigen::Ref<const VectorXd>& u) {
    VectorXd r = -u;
    r[0] = u[0];
    return r;
}

} // namespace detail

/// Smallest t such that x + t*e lies in the cone; x is strictly interior
/// iff the result is negative.
inline double cone_violation(const ConeLayout& lay, const VectorXd& x) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& b : lay.blocks) {
        const auto xb = x.segment(b.offset, b.size);
        if (b.type == BlockType::soc) {
            worst = std::max(worst, xb.tail(b.size - 1).norm() - xb[0]);
        } else {
            Eigen::SelfAdjointEigenSolver<MatrixXd> es(smat(xb, b.order),
                                                       Eigen::EigenvaluesOnly);
            worst = std::max(worst, -es.eigenvalues().minCoeff());
        }
    }
    return worst;
}

/// Scaling and Jordan-algebra operations over the whole product cone.
class ConeOps {
public:
    explicit ConeOps(const ConeLayout& layout) : lay_(layout) {}

    const ConeLayout& layout() const { return lay_; }

    /// Compute NT scalings from strictly feasible (s, z); also returns the
    /// scaled point lambda = W z = W^{-T} s.
    bool compute_scaling(const VectorXd& s, const VectorXd& z, VectorXd& lambda) {
        scal_.resize(lay_.blocks.size());
        lambda.resize(lay_.total);
        for (std::size_t bi = 0; bi < lay_.blocks.size(); ++bi) {
            const auto& b = lay_.blocks[bi];
            auto& w = scal_[bi];
            if (b.type == BlockType::soc) {
                VectorXd sb = s.segment(b.offset, b.size);
                VectorXd zb = z.segment(b.offset, b.size);
                if (!(sb[0] > 0) || !(zb[0] > 0)) return false;
                // near-boundary points are nudged inward so the scaling stays
                // finite in the endgame
                auto clip = [](VectorXd& u) {
                    const double res = detail::soc_residual(u);
                    const double floor_res = 1e-14 * u[0] * u[0];
                    if (res < floor_res) {
                        const double tail = u.tail(u.size() - 1).norm();
                        if (tail > 0)
                            u.tail(u.size() - 1) *=
                                std::sqrt(1.0 - 1e-14) * u[0] / tail;
                    }
                };
                clip(sb);
                clip(zb);
                const double sres = detail::soc_residual(sb);
                const double zres = detail::soc_residual(zb);
                if (!(sres > 0) || !(zres > 0)) return false;
                VectorXd shat = sb / std::sqrt(sres);
                VectorXd zhat = zb / std::sqrt(zres);
                const double gamma = std::sqrt((1.0 + shat.dot(zhat)) / 2.0);
                if (!(gamma > 0)) return false;
                // Hyperbolic Householder representation: W = eta (2 v v' - J)
                // with v = (wbar + e) / sqrt(2 (wbar0 + 1)).
                VectorXd wbar = (shat + detail::soc_apply_J(zhat)) / (2.0 * gamma);
                wbar[0] += 1.0;
                w.v = wbar / std::sqrt(2.0 * wbar[0]);
                w.eta = std::pow(sres / zres, 0.25);
                VectorXd lam = w.eta * (2.0 * w.v * w.v.dot(zb) - detail::soc_apply_J(zb));
                lambda.segment(b.offset, b.size) = lam;
            } else {
                const MatrixXd S = smat(s.segment(b.offset, b.size), b.order);
                const MatrixXd Z = smat(z.segment(b.offset, b.size), b.order);
                // any square factor S = F F' works for the NT recipe; fall
                // back to a clipped symmetric square root near the boundary
                auto factor = [](const MatrixXd& m, MatrixXd& f) {
                    Eigen::LLT<MatrixXd> llt(m);
                    if (llt.info() == Eigen::Success) {
                        f = llt.matrixL();
                        return true;
                    }
                    Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
                    if (es.info() != Eigen::Success) return false;
                    VectorXd ev = es.eigenvalues();
                    const double floor_ev = 1e-14 * std::max(1.0, ev.maxCoeff());
                    if (ev.maxCoeff() <= 0) return false;
                    for (Eigen::Index i = 0; i < ev.size(); ++i)
                        ev[i] = std::max(ev[i], floor_ev);
                    f = es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
                        es.eigenvectors().transpose();
                    return true;
                };
                MatrixXd Ls, Lz;
                if (!factor(S, Ls) || !factor(Z, Lz)) return false;
                Eigen::BDCSVD<MatrixXd> svd(Lz.transpose() * Ls,
                                            Eigen::ComputeFullU | Eigen::ComputeFullV);
                const VectorXd sig = svd.singularValues();
                if (sig.minCoeff() <= 0) return false;
                const VectorXd isq = sig.cwiseSqrt().cwiseInverse();
                w.R = Ls * svd.matrixV() * isq.asDiagonal();
                w.Rti = Lz * svd.matrixU() * isq.asDiagonal();
                w.Tinv.noalias() = w.Rti * w.Rti.transpose();
                w.eigs = sig;
                lambda.segment(b.offset, b.size) = svec(MatrixXd(sig.asDiagonal()));
            }
        }
        return true;
    }

    const BlockScaling& scaling(std::size_t bi) const { return scal_[bi]; }

    /// u := W x (z-side scaling).
    VectorXd apply_W(const VectorXd& x) const {
        return apply_impl(x, [](const BlockScaling& w, const ConeBlock& b, const VectorXd& xb) {
            if (b.type == BlockType::soc)
                return VectorXd(w.eta * (2.0 * w.v * w.v.dot(xb) - detail::soc_apply_J(xb)));
            const MatrixXd X = smat(xb, b.order);
            return VectorXd(svec(w.R.transpose() * X * w.R));
        });
    }

    /// u := W' x.
    VectorXd apply_Wt(const VectorXd& x) const {
        return apply_impl(x, [](const BlockScaling& w, const ConeBlock& b, const VectorXd& xb) {
            if (b.type == BlockType::soc)
                return VectorXd(w.eta * (2.0 * w.v * w.v.dot(xb) - detail::soc_apply_J(xb)));
            const MatrixXd X = smat(xb, b.order);
            return VectorXd(svec(w.R * X * w.R.transpose()));
        });
    }

    /// u := W^{-T} x (maps s to lambda).
    VectorXd apply_WinvT(const VectorXd& x) const {
        return apply_impl(x, [](const BlockScaling& w, const ConeBlock& b, const VectorXd& xb) {
            if (b.type == BlockType::soc) {
                const VectorXd jv = detail::soc_apply_J(w.v);
                return VectorXd((2.0 * jv * jv.dot(xb) - detail::soc_apply_J(xb)) / w.eta);
            }
            const MatrixXd X = smat(xb, b.order);
            return VectorXd(svec(w.Rti.transpose() * X * w.Rti));
        });
    }

    /// u := W^{-1} x.
    VectorXd apply_Winv(const VectorXd& x) const {
        return apply_impl(x, [](const BlockScaling& w, const ConeBlock& b, const VectorXd& xb) {
            if (b.type == BlockType::soc) {
                const VectorXd jv = detail::soc_apply_J(w.v);
                return VectorXd((2.0 * jv * jv.dot(xb) - detail::soc_apply_J(xb)) / w.eta);
            }
            const MatrixXd X = smat(xb, b.order);
            return VectorXd(svec(w.Rti * X * w.Rti.transpose()));
        });
    }

    /// Jordan product u o v over the product cone.
    VectorXd jordan(const VectorXd& u, const VectorXd& v) const {
        VectorXd r(lay_.total);
        for (const auto& b : lay_.blocks) {
            const auto ub = u.segment(b.offset, b.size);
            const auto vb = v.segment(b.offset, b.size);
            if (b.type == BlockType::soc) {
                VectorXd rb(b.size);
                rb[0] = ub.dot(vb);
                rb.tail(b.size - 1) =
                    ub[0] * vb.tail(b.size - 1) + vb[0] * ub.tail(b.size - 1);
                r.segment(b.offset, b.size) = rb;
            } else {
                const MatrixXd U = smat(ub, b.order);
                const MatrixXd V = smat(vb, b.order);
                MatrixXd P = U * V;
                P = 0.5 * (P + P.transpose()).eval();
                r.segment(b.offset, b.size) = svec(P);
            }
        }
        return r;
    }

    /// Solve lambda o u = v for u, where lambda is the current scaled point.
    VectorXd jordan_solve_lambda(const VectorXd& lambda, const VectorXd& v) const {
        VectorXd r(lay_.total);
        for (std::size_t bi = 0; bi < lay_.blocks.size(); ++bi) {
            const auto& b = lay_.blocks[bi];
            const auto lb = lambda.segment(b.offset, b.size);
            const auto vb = v.segment(b.offset, b.size);
            if (b.type == BlockType::soc) {
                const Eigen::Index d = b.size;
                const double det = detail::soc_residual(lb);
                VectorXd rb(d);
                rb[0] = (lb[0] * vb[0] - lb.tail(d - 1).dot(vb.tail(d - 1))) / det;
                rb.tail(d - 1) = (vb.tail(d - 1) - rb[0] * lb.tail(d - 1)) / lb[0];
                r.segment(b.offset, b.size) = rb;
            } else {
                const VectorXd& sig = scal_[bi].eigs;
                MatrixXd V = smat(vb, b.order);
                for (Eigen::Index i = 0; i < b.order; ++i)
                    for (Eigen::Index j = 0; j < b.order; ++j)
                        V(i, j) *= 2.0 / (sig[i] + sig[j]);
                r.segment(b.offset, b.size) = svec(V);
            }
        }
        return r;
    }

    /// Largest step a such that lambda + a d stays in the cone (possibly inf).
    double max_step(const VectorXd& lambda, const VectorXd& d) const {
        constexpr double inf = std::numeric_limits<double>::infinity();
        double amax = inf;
        for (std::size_t bi = 0; bi < lay_.blocks.size(); ++bi) {
            const auto& b = lay_.blocks[bi];
            const auto lb = lambda.segment(b.offset, b.size);
            const auto db = d.segment(b.offset, b.size);
            double a = inf;
            if (b.type == BlockType::soc) {
                const Eigen::Index n1 = b.size - 1;
                const double qa = db[0] * db[0] - db.tail(n1).squaredNorm();
                const double qb = 2.0 * (lb[0] * db[0] - lb.tail(n1).dot(db.tail(n1)));
                const double qc = detail::soc_residual(lb); // > 0 strictly inside
                a = smallest_positive_root(qa, qb, qc);
            } else {
                const VectorXd& sig = scal_[bi].eigs;
                MatrixXd D = smat(db, b.order);
                const VectorXd is = sig.cwiseSqrt().cwiseInverse();
                D = is.asDiagonal() * D * is.asDiagonal();
                Eigen::SelfAdjointEigenSolver<MatrixXd> es(D, Eigen::EigenvaluesOnly);
                const double lmin = es.eigenvalues().minCoeff();
                if (lmin < 0) a = -1.0 / lmin;
            }
            amax = std::min(amax, a);
        }
        return amax;
    }

private:
    template <typename F>
    VectorXd apply_impl(const VectorXd& x, F&& f) const {
        VectorXd r(lay_.total);
        for (std::size_t bi = 0; bi < lay_.blocks.size(); ++bi) {
            const auto& b = lay_.blocks[bi];
            r.segment(b.offset, b.size) =
                f(scal_[bi], b, VectorXd(x.segment(b.offset, b.size)));
        }
        return r;
    }

    /// Smallest positive root of qa a^2 + qb a + qc = 0 with qc > 0, or inf.
    static double smallest_positive_root(double qa, double qb, double qc) {
        constexpr double inf = std::numeric_limits<double>::infinity();
        if (std::abs(qa) < 1e-300) {
            if (qb >= 0) return inf;
            return -qc / qb;
        }
        const double disc = qb * qb - 4.0 * qa * qc;
        if (qa > 0 && disc <= 0) return inf;
        const double sq = std::sqrt(std::max(0.0, disc));
        // Stable quadratic roots.
        const double q = -0.5 * (qb + (qb >= 0 ? sq : -sq));
        double r1 = q / qa;
        double r2 = (q != 0.0) ? qc / q : inf;
        if (r1 > r2) std::swap(r1, r2);
        if (r1 > 0) return r1;
        if (r2 > 0) return r2;
        return inf;
    }

    ConeLayout lay_;
    std::vector<BlockScaling> scal_;
};

} // namespace anchor::conic

#endif
