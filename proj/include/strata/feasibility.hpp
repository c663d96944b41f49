/**
 * Exact feasibility for homogeneous systems of strict inequalities and
 * equations: find y with a_i . y > 0 / a_i . y = 0, or decide none exists.
 *
 * Equations are eliminated by substituting a kernel basis; the strict cone
 * is homogeneous, so a . y > 0 is equivalent to a . y >= 1 and the rest is
 * textbook Fourier-Motzkin with duplicate rows dropped between rounds.
 * Witnesses come from interval midpoints during back-substitution and are
 * returned as found (callers normalize to primitive rays when they care).
 */
#ifndef STRATA_FEASIBILITY_HPP
#define STRATA_FEASIBILITY_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "strata/linalg.hpp"
#include "strata/rational.hpp"

namespace strata {

enum class Rel { GT, EQ };  // a . y > 0  /  a . y = 0

struct Constraint {
    RatVec a;
    Rel rel;
};

namespace detail {

// One inequality sum_j c[j] z_j >= c.back() after the homogenization step.
using IneqRow = RatVec;

inline IneqRow normalize_row(IneqRow r) {
    // Scale so the first nonzero coefficient is +-1; keeps dedup effective.
    for (const Rat& x : r) {
        if (x != 0) {
            Rat s = abs(x);
            for (Rat& y : r) y /= s;
            break;
        }
    }
    return r;
}

inline std::optional<RatVec> fm_solve(std::vector<IneqRow> rows, std::size_t nvars) {
    // Eliminate variables from the back; reconstruct values in reverse.
    std::vector<std::vector<IneqRow>> levels;
    for (std::size_t v = nvars; v-- > 0;) {
        std::vector<IneqRow> lower, upper, rest;
        for (IneqRow& r : rows) {
            if (r[v] > 0) lower.push_back(r);       // z_v >= (rhs - others)/coef
            else if (r[v] < 0) upper.push_back(r);  // z_v <= ...
            else rest.push_back(r);
        }
        levels.push_back(rows);
        std::set<IneqRow> next;
        for (IneqRow& r : rest) next.insert(normalize_row(r));
        for (const IneqRow& lo : lower)
            for (const IneqRow& up : upper) {
                // coef_lo > 0 > coef_up: combine to cancel z_v.
                IneqRow comb(nvars + 1, Rat(0));
                for (std::size_t j = 0; j <= nvars; ++j) comb[j] = lo[j] * (-up[v]) + up[j] * lo[v];
                next.insert(normalize_row(comb));
            }
        rows.assign(next.begin(), next.end());
    }
    for (const IneqRow& r : rows)
        if (r[nvars] > 0) return std::nullopt;  // 0 >= positive

    RatVec z(nvars, Rat(0));
    for (std::size_t v = 0; v < nvars; ++v) {
        const std::vector<IneqRow>& lv = levels[nvars - 1 - v];
        bool has_lo = false, has_up = false;
        Rat lo = 0, up = 0;
        for (const IneqRow& r : lv) {
            if (r[v] == 0) continue;
            Rat bound = r[nvars];
            for (std::size_t j = 0; j < nvars; ++j)
                if (j != v) bound -= r[j] * z[j];
            bound /= r[v];
            if (r[v] > 0) {
                if (!has_lo || bound > lo) lo = bound;
                has_lo = true;
            } else {
                if (!has_up || bound < up) up = bound;
                has_up = true;
            }
        }
        if (has_lo && has_up) z[v] = (lo + up) / 2;
        else if (has_lo) z[v] = lo + 1;
        else if (has_up) z[v] = up - 1;
    }
    return z;
}

}  // namespace detail

/**
 * Returns a point satisfying every constraint strictly, or nullopt.  The
 * result is deterministic for a fixed constraint list.
 */
inline std::optional<RatVec> feasible_strict(const std::vector<Constraint>& cons, std::size_t dim) {
    // Substitute out the equations: y = N z with N a kernel basis.
    std::vector<const RatVec*> eqs;
    for (const Constraint& c : cons)
        if (c.rel == Rel::EQ) eqs.push_back(&c.a);
    RatMat nmat;  // columns span the equality solution space
    std::size_t zdim;
    if (eqs.empty()) {
        nmat = RatMat::identity(dim);
        zdim = dim;
    } else {
        RatMat e(eqs.size(), dim);
        for (std::size_t i = 0; i < eqs.size(); ++i)
            for (std::size_t j = 0; j < dim; ++j) e(i, j) = (*eqs[i])[j];
        std::vector<RatVec> kb = kernel_basis(e);
        zdim = kb.size();
        nmat = RatMat(dim, zdim);
        for (std::size_t j = 0; j < zdim; ++j) nmat.set_col(j, kb[j]);
    }

    std::vector<detail::IneqRow> rows;
    for (const Constraint& c : cons) {
        if (c.rel != Rel::GT) continue;
        detail::IneqRow r(zdim + 1, Rat(0));
        for (std::size_t j = 0; j < zdim; ++j)
            for (std::size_t i = 0; i < dim; ++i) r[j] += c.a[i] * nmat(i, j);
        bool all_zero = true;
        for (std::size_t j = 0; j < zdim; ++j)
            if (r[j] != 0) all_zero = false;
        if (all_zero) return std::nullopt;  // constraint is identically 0 > 0
        r[zdim] = 1;                        // homogeneous: > 0 iff >= 1 reachable
        rows.push_back(std::move(r));
    }
    if (zdim == 0) return rows.empty() ? std::optional<RatVec>(RatVec(dim, Rat(0))) : std::nullopt;

    std::optional<RatVec> z = detail::fm_solve(std::move(rows), zdim);
    if (!z) return std::nullopt;
    return nmat * *z;
}

}  // namespace strata

#endif
