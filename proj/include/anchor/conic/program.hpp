// SPDX-License-Identifier: Apache-2.0
#ifndef ANCHOR_CONIC_PROGRAM_HPP
#define ANCHOR_CONIC_PROGRAM_HPP

#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "anchor/conic/cones.hpp"
#include "anchor/conic/svec.hpp"
#include "anchor/errors.hpp"

namespace anchor::conic {

using cplx = std::complex<double>;

/// Affine expression over the program's real scalar variables, with complex
/// coefficients: constant + sum coeff_t * x_t.
struct LinExpr {
    cplx constant{0.0, 0.0};
    std::vector<std::pair<int, cplx>> terms;

    LinExpr() = default;
    /*implicit*/ LinExpr(double c) : constant(c) {}
    /*implicit*/ LinExpr(cplx c) : constant(c) {}

    static LinExpr var(int v, cplx coeff = 1.0) {
        LinExpr e;
        e.terms.emplace_back(v, coeff);
        return e;
    }
    LinExpr& add(int v, cplx coeff) {
        terms.emplace_back(v, coeff);
        return *this;
    }
    LinExpr& operator+=(const LinExpr& o) {
        constant += o.constant;
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        return *this;
    }
    friend LinExpr operator*(cplx a, LinExpr e) {
        e.constant *= a;
        for (auto& t : e.terms) t.second *= a;
        return e;
    }
};

/// Handle to an n x n Hermitian matrix variable backed by n^2 scalar
/// variables (diagonal entries real, off-diagonal split into re/im).
struct HermitianVar {
    Eigen::Index order = 0;
    int base = -1; // first scalar variable index

    // Layout per column-major upper triangle: diag j stores 1 var, entry
    // (i, j) with i < j stores (re, im).
    int re_index(Eigen::Index i, Eigen::Index j) const {
        return base + 2 * static_cast<int>(svec_index(i, j)) - static_cast<int>(j);
    }
    int diag_index(Eigen::Index j) const { return re_index(j, j); }

    /// Expression for entry (i, j); entries below the diagonal are the
    /// conjugates of their mirror.
    LinExpr entry(Eigen::Index i, Eigen::Index j) const {
        const bool conj = i > j;
        if (conj) std::swap(i, j);
        if (i == j) return LinExpr::var(diag_index(j));
        LinExpr e = LinExpr::var(re_index(i, j));
        e.add(re_index(i, j) + 1, cplx(0.0, conj ? -1.0 : 1.0));
        return e;
    }
};

/// A small structured conic modeling container: real scalar variables,
/// Hermitian matrix variables, linear equalities, PSD constraints on affine
/// Hermitian (or real symmetric) matrix expressions, and second-order cone
/// constraints on affine real vectors.  Lowered to a primal-standard conic
/// form where matrix variables become cone variables and every scalar
/// variable either aliases one cone entry or stays free.
class ConicProgram {
public:
    struct PsdEntry {
        Eigen::Index row, col; // row <= col
        LinExpr expr;
    };
    struct PsdBlock {
        Eigen::Index order;
        bool complex_block;
        std::vector<PsdEntry> entries; // unspecified entries are zero
        std::string tag;
    };
    struct SocBlock {
        std::vector<LinExpr> coords; // coords[0] >= norm(coords[1:]); all real-valued
        std::string tag;
    };
    struct Equality {
        LinExpr expr;
        cplx rhs;
        std::string tag;
    };

    int add_variable() { return n_vars_++; }
    int add_variables(int k) {
        const int base = n_vars_;
        n_vars_ += k;
        return base;
    }

    HermitianVar add_hermitian_variable(Eigen::Index order) {
        HermitianVar h;
        h.order = order;
        h.base = add_variables(static_cast<int>(order * order));
        return h;
    }

    /// PSD constraint on a Hermitian affine expression given by its upper
    /// triangle entries.  Returns a block handle for solution readout.
    int add_psd_block(Eigen::Index order, std::vector<PsdEntry> entries,
                      bool complex_block = true, std::string tag = {}) {
        for (const auto& e : entries)
            if (e.row > e.col || e.col >= order)
                throw shape_error("add_psd_block: entry outside upper triangle");
        psd_.push_back({order, complex_block, std::move(entries), std::move(tag)});
        return static_cast<int>(psd_.size()) - 1;
    }

    /// Convenience: constrain a whole Hermitian matrix variable to be PSD.
    int add_psd_block(const HermitianVar& h, std::string tag = {}) {
        std::vector<PsdEntry> entries;
        entries.reserve(static_cast<std::size_t>(svec_dim(h.order)));
        for (Eigen::Index j = 0; j < h.order; ++j)
            for (Eigen::Index i = 0; i <= j; ++i) entries.push_back({i, j, h.entry(i, j)});
        return add_psd_block(h.order, std::move(entries), true, std::move(tag));
    }

    int add_soc_block(std::vector<LinExpr> coords, std::string tag = {}) {
        if (coords.empty()) throw shape_error("add_soc_block: empty block");
        soc_.push_back({std::move(coords), std::move(tag)});
        return static_cast<int>(soc_.size()) - 1;
    }

    void add_equality(LinExpr expr, cplx rhs, std::string tag = {}) {
        eq_.push_back({std::move(expr), rhs, std::move(tag)});
    }

    /// Objective: minimize expr (must be real-valued).
    void set_objective(LinExpr expr) { objective_ = std::move(expr); }

    int variable_count() const { return n_vars_; }
    Eigen::Index psd_block_count() const { return static_cast<Eigen::Index>(psd_.size()); }
    Eigen::Index soc_block_count() const { return static_cast<Eigen::Index>(soc_.size()); }
    Eigen::Index equality_count() const { return static_cast<Eigen::Index>(eq_.size()); }
    const PsdBlock& psd_block(int i) const { return psd_[static_cast<std::size_t>(i)]; }

    // ---- lowering to the primal-standard conic form ----

    /// One coefficient of a constraint row or the cost on a cone block:
    /// a symmetric-matrix triplet (r <= c) for PSD blocks, or a coordinate
    /// for SOC blocks.
    struct BlockCoeff {
        Eigen::Index r, c; // SOC: r = coordinate index, c unused
        double v;
    };

    struct Lowered {
        ConeLayout cones;                     // one block per psd/soc constraint
        std::vector<Eigen::Index> psd_cone;   // program psd index -> cone block
        std::vector<Eigen::Index> soc_cone;   // program soc index -> cone block
        // rows[j][bi] = coefficients of row j on cone block bi
        std::vector<std::vector<std::vector<BlockCoeff>>> rows;
        std::vector<std::vector<std::pair<int, double>>> row_free; // (free idx, coeff)
        VectorXd rhs;
        VectorXd cost_cone; // stacked svec cost (the "C" matrices)
        VectorXd cost_free;
        double cost_constant = 0;
        // scalar variable readout: either an alias into a cone block or a
        // free-variable slot
        struct VarReadout {
            bool aliased = false;
            Eigen::Index cone_block = 0;
            std::vector<BlockCoeff> pattern; // <pattern, X> * inv_scale = value
            double inv_scale = 1.0;
            int free_index = -1;
        };
        std::vector<VarReadout> vars;
        int n_free = 0;
    };

    Lowered lower() const;

private:
    struct RealTerm {
        int var;
        double coeff;
    };
    struct RealExpr {
        double constant = 0;
        std::vector<RealTerm> terms;
    };

    static RealExpr real_part(const LinExpr& e, bool imag) {
        RealExpr r;
        r.constant = imag ? e.constant.imag() : e.constant.real();
        for (const auto& [v, c] : e.terms) {
            const double a = imag ? c.imag() : c.real();
            if (a != 0.0) r.terms.push_back({v, a});
        }
        return r;
    }

    int n_vars_ = 0;
    std::vector<PsdBlock> psd_;
    std::vector<SocBlock> soc_;
    std::vector<Equality> eq_;
    LinExpr objective_;
};

inline ConicProgram::Lowered ConicProgram::lower() const {
    Lowered out;
    if (n_vars_ == 0) throw shape_error("ConicProgram: no variables");

    // Cone layout: PSD blocks (complex ones embedded), then SOC blocks.
    out.psd_cone.reserve(psd_.size());
    for (const auto& blk : psd_)
        out.psd_cone.push_back(out.cones.add_psd(blk.complex_block ? 2 * blk.order : blk.order));
    out.soc_cone.reserve(soc_.size());
    for (const auto& blk : soc_)
        out.soc_cone.push_back(out.cones.add_soc(static_cast<Eigen::Index>(blk.coords.size())));

    // The pattern associated with one real "slot": a matrix entry part for
    // PSD blocks or a coordinate for SOC blocks.
    struct Slot {
        Eigen::Index cone_block;
        std::vector<BlockCoeff> pattern;
        RealExpr expr;
    };
    std::vector<Slot> slots;

    auto psd_pattern = [](const PsdBlock& blk, Eigen::Index r, Eigen::Index c,
                          bool imag) -> std::vector<BlockCoeff> {
        const Eigen::Index n = blk.order;
        if (!blk.complex_block) {
            if (imag) return {};
            return r == c ? std::vector<BlockCoeff>{{r, r, 1.0}}
                          : std::vector<BlockCoeff>{{r, c, 0.5}};
        }
        if (r == c) return {{r, r, 0.5}, {n + r, n + r, 0.5}};
        if (!imag) return {{r, c, 0.25}, {n + r, n + c, 0.25}};
        return {{r, n + c, -0.25}, {c, n + r, 0.25}};
    };

    for (std::size_t pi = 0; pi < psd_.size(); ++pi) {
        const auto& blk = psd_[pi];
        std::vector<char> listed(static_cast<std::size_t>(svec_dim(blk.order)), 0);
        for (const auto& e : blk.entries) {
            auto& seen = listed[static_cast<std::size_t>(svec_index(e.row, e.col))];
            if (seen) throw shape_error("add_psd_block: duplicate entry");
            seen = 1;
            const RealExpr im = real_part(e.expr, true);
            if (e.row == e.col && (im.constant != 0.0 || !im.terms.empty()))
                throw shape_error("PSD block: diagonal entry must be real-valued");
            slots.push_back({out.psd_cone[pi], psd_pattern(blk, e.row, e.col, false),
                             real_part(e.expr, false)});
            if (blk.complex_block && e.row != e.col)
                slots.push_back({out.psd_cone[pi], psd_pattern(blk, e.row, e.col, true), im});
        }
        // Unlisted entries are structurally zero.
        for (Eigen::Index c = 0; c < blk.order; ++c)
            for (Eigen::Index r = 0; r <= c; ++r) {
                if (listed[static_cast<std::size_t>(svec_index(r, c))]) continue;
                slots.push_back({out.psd_cone[pi], psd_pattern(blk, r, c, false), {}});
                if (blk.complex_block && r != c)
                    slots.push_back({out.psd_cone[pi], psd_pattern(blk, r, c, true), {}});
            }
    }
    for (std::size_t si = 0; si < soc_.size(); ++si) {
        const auto& blk = soc_[si];
        for (std::size_t k = 0; k < blk.coords.size(); ++k) {
            const RealExpr im = real_part(blk.coords[k], true);
            if (im.constant != 0.0 || !im.terms.empty())
                throw shape_error("SOC block: coordinates must be real-valued");
            slots.push_back({out.soc_cone[si],
                             {{static_cast<Eigen::Index>(k), 0, 1.0}},
                             real_part(blk.coords[k], false)});
        }
    }

    // Claiming pass: a slot whose expression is exactly alpha * x_v for an
    // unclaimed variable defines that variable; everything else becomes an
    // equality row after substitution.
    out.vars.resize(static_cast<std::size_t>(n_vars_));
    std::vector<char> used(static_cast<std::size_t>(n_vars_), 0);
    std::vector<int> claimed_by(static_cast<std::size_t>(n_vars_), -1);
    for (std::size_t si = 0; si < slots.size(); ++si) {
        const auto& sl = slots[si];
        if (sl.expr.terms.size() == 1 && sl.expr.constant == 0.0) {
            const auto [v, a] = std::pair(sl.expr.terms[0].var, sl.expr.terms[0].coeff);
            used[static_cast<std::size_t>(v)] = 1;
            if (claimed_by[static_cast<std::size_t>(v)] < 0 && std::abs(a) > 1e-14) {
                claimed_by[static_cast<std::size_t>(v)] = static_cast<int>(si);
                auto& vr = out.vars[static_cast<std::size_t>(v)];
                vr.aliased = true;
                vr.cone_block = sl.cone_block;
                vr.pattern = sl.pattern;
                vr.inv_scale = 1.0 / a;
            }
        } else {
            for (const auto& t : sl.expr.terms) used[static_cast<std::size_t>(t.var)] = 1;
        }
    }
    for (const auto& eq : eq_)
        for (const auto& [v, c] : eq.expr.terms)
            if (c != 0.0) used[static_cast<std::size_t>(v)] = 1;
    for (const auto& [v, c] : objective_.terms)
        if (c != 0.0) used[static_cast<std::size_t>(v)] = 1;

    for (int v = 0; v < n_vars_; ++v) {
        if (!used[static_cast<std::size_t>(v)])
            throw shape_error("ConicProgram: variable never used");
        if (!out.vars[static_cast<std::size_t>(v)].aliased) {
            out.vars[static_cast<std::size_t>(v)].free_index = out.n_free++;
        }
    }

    // Row emission.
    std::vector<double> rhs;
    auto emit_row = [&](const std::vector<BlockCoeff>* self_pattern, Eigen::Index self_block,
                        const RealExpr& expr, double rhs_value) {
        std::vector<std::vector<BlockCoeff>> row(out.cones.blocks.size());
        std::vector<std::pair<int, double>> freec;
        if (self_pattern)
            for (const auto& bc : *self_pattern)
                row[static_cast<std::size_t>(self_block)].push_back(bc);
        for (const auto& t : expr.terms) {
            const auto& vr = out.vars[static_cast<std::size_t>(t.var)];
            const double sgn = self_pattern ? -1.0 : 1.0;
            if (vr.aliased) {
                for (const auto& bc : vr.pattern)
                    row[static_cast<std::size_t>(vr.cone_block)].push_back(
                        {bc.r, bc.c, sgn * t.coeff * vr.inv_scale * bc.v});
            } else {
                freec.emplace_back(vr.free_index, sgn * t.coeff);
            }
        }
        // Slot rows read <pattern, X> - sum(terms) = const; equality rows read
        // sum(terms) = rhs - const.
        const double r = self_pattern ? expr.constant : rhs_value - expr.constant;
        out.rows.push_back(std::move(row));
        out.row_free.push_back(std::move(freec));
        rhs.push_back(r);
    };

    for (std::size_t si = 0; si < slots.size(); ++si) {
        const auto& sl = slots[si];
        const bool is_claim_site =
            sl.expr.terms.size() == 1 && sl.expr.constant == 0.0 &&
            claimed_by[static_cast<std::size_t>(sl.expr.terms[0].var)] == static_cast<int>(si);
        if (is_claim_site) continue;
        emit_row(&sl.pattern, sl.cone_block, sl.expr, 0.0);
    }
    for (const auto& eq : eq_) {
        emit_row(nullptr, 0, real_part(eq.expr, false), eq.rhs.real());
        const RealExpr im = real_part(eq.expr, true);
        if (!im.terms.empty() || eq.rhs.imag() != 0.0)
            emit_row(nullptr, 0, im, eq.rhs.imag());
    }

    out.rhs = Eigen::Map<const VectorXd>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

    // Objective.
    out.cost_cone = VectorXd::Zero(out.cones.total);
    out.cost_free = VectorXd::Zero(out.n_free);
    out.cost_constant = objective_.constant.real();
    auto add_cost_pattern = [&](Eigen::Index block, const std::vector<BlockCoeff>& pat,
                                double w) {
        const auto& cb = out.cones.blocks[static_cast<std::size_t>(block)];
        for (const auto& bc : pat) {
            if (cb.type == BlockType::soc) {
                out.cost_cone[cb.offset + bc.r] += w * bc.v;
            } else {
                const double sc = (bc.r == bc.c) ? 1.0 : std::numbers::sqrt2;
                out.cost_cone[cb.offset + svec_index(bc.r, bc.c)] += w * bc.v * sc;
            }
        }
    };
    for (const auto& [v, c] : objective_.terms) {
        if (c.imag() != 0.0) throw shape_error("objective must be real-valued");
        const auto& vr = out.vars[static_cast<std::size_t>(v)];
        if (vr.aliased)
            add_cost_pattern(vr.cone_block, vr.pattern, c.real() * vr.inv_scale);
        else
            out.cost_free[vr.free_index] += c.real();
    }
    return out;
}

} // namespace anchor::conic

#endif
