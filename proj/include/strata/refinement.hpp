/**
 * Chain maps along refinements of sphere stratifications.
 *
 * For a refinement pair chi < chi' the top-degree comparison sends each top
 * cell of chi to a chosen top cell of chi' inside it, with the orientation
 * transport sign.  The lower degrees are solved one slot at a time going
 * down, each unknown constrained to the entries allowed by star closure
 * containment; solvability at each step is the acyclicity of the star
 * difference sets, which has its own checker below.
 */
#ifndef STRATA_REFINEMENT_HPP
#define STRATA_REFINEMENT_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strata/arrangement.hpp"
#include "strata/complex.hpp"
#include "strata/linalg.hpp"
#include "strata/orientation.hpp"

namespace strata {

enum class PsiRule { LexSmallest, LexLargest };

/// For each top cell of the coarse stratification, the chosen top cell of
/// the fine one inside it (by canonical cell order).  Indexed by the
/// coarse top-slot basis order.
inline std::vector<int> choose_psi(const Stratification& coarse, const Stratification& fine,
                                   PsiRule rule = PsiRule::LexSmallest) {
    std::vector<int> psi;
    for (int sigma = 0; sigma < coarse.cell_count(); ++sigma) {
        if (coarse.cell(sigma).dim != coarse.top_dim()) continue;
        int chosen = -1;
        for (int c = 0; c < fine.cell_count(); ++c) {
            if (fine.cell(c).dim != fine.top_dim()) continue;
            auto owner = containing_cell(fine, c, coarse);
            if (!owner || *owner != sigma) continue;
            if (chosen < 0) chosen = c;
            else if (rule == PsiRule::LexSmallest ? c < chosen : c > chosen) chosen = c;
        }
        if (chosen < 0) throw std::logic_error("coarse top cell contains no fine top cell");
        psi.push_back(chosen);
    }
    return psi;
}

/// Closure of the fine cell's star inside the closure of the coarse cell's
/// star.  Via the half-space description of stars this reduces to a closed
/// sign test on the interior point of every star member.
inline bool star_closure_contained(const Stratification& fine, int tau, const Stratification& coarse,
                                   int sigma) {
    auto form = coarse.star_halfspace_form(sigma);
    if (!form) return true;  // a kernel point's star is everything
    for (int member : fine.star_members(tau)) {
        const RatVec& p = fine.cell(member).interior;
        for (auto [i, s] : *form)
            if (sgn(dot(coarse.normals()[i], p)) * s < 0) return false;
    }
    return true;
}

struct InfeasibleLift : std::runtime_error {
    int slot;  // complex slot whose unknown could not be solved
    InfeasibleLift(int slot_, const std::string& what) : std::runtime_error(what), slot(slot_) {}
};

/// The full ladder of slot maps theta[i] : slot_i(chi) -> slot_i(chi'),
/// i = 0 (ambient) through m (top cells); the augmentation slot map is the
/// identity and is checked rather than stored.
struct ThetaLadder {
    GradedComplex coarse_gc, fine_gc;
    std::vector<RatMat> theta;
};

/// Hook for negative controls: a test can blank out the support of one
/// slot's unknown and watch the solve fail.
struct ThetaOptions {
    PsiRule rule = PsiRule::LexSmallest;
    int blank_mask_slot = -1;  // force an empty support mask at this slot
};

inline ThetaLadder build_theta(const Stratification& coarse, const Stratification& fine,
                               const ThetaOptions& opts = {}) {
    if (!is_refinement(coarse, fine))
        throw std::invalid_argument("build_theta needs a refinement pair");
    ThetaLadder lad{build_complex(coarse, StalkContext::at_m()),
                    build_complex(fine, StalkContext::at_m()),
                    {}};
    int m = coarse.m();
    lad.theta.assign(static_cast<std::size_t>(m) + 1, RatMat(0, 0));

    // Top slot: the chosen refinement representatives with their
    // orientation transport signs.
    std::vector<int> psi = choose_psi(coarse, fine, opts.rule);
    const auto& coarse_top = lad.coarse_gc.bases[static_cast<std::size_t>(m - 1)];
    const auto& fine_top = lad.fine_gc.bases[static_cast<std::size_t>(m - 1)];
    RatMat theta_top(fine_top.size(), coarse_top.size());
    for (std::size_t c = 0; c < coarse_top.size(); ++c) {
        int target = psi[c];
        std::size_t r = 0;
        while (fine_top[r] != target) ++r;
        theta_top(r, c) = incidence_same_dim(coarse, coarse_top[c], fine, target);
    }
    lad.theta[static_cast<std::size_t>(m)] = std::move(theta_top);

    // Remaining slots, descending: solve d_fine * X = theta_above * d_coarse
    // with the star-containment support mask.
    for (int slot = m - 1; slot >= 0; --slot) {
        const RatMat& a = lad.fine_gc.d[static_cast<std::size_t>(slot)];
        RatMat b = lad.theta[static_cast<std::size_t>(slot) + 1] *
                   lad.coarse_gc.d[static_cast<std::size_t>(slot)];
        std::optional<std::vector<std::vector<bool>>> mask;
        if (slot > 0) {
            const auto& cols = lad.coarse_gc.bases[static_cast<std::size_t>(slot - 1)];
            const auto& rows = lad.fine_gc.bases[static_cast<std::size_t>(slot - 1)];
            mask.emplace(cols.size(), std::vector<bool>(rows.size(), false));
            if (opts.blank_mask_slot != slot)
                for (std::size_t c = 0; c < cols.size(); ++c)
                    for (std::size_t r = 0; r < rows.size(); ++r)
                        (*mask)[c][r] = star_closure_contained(fine, rows[r], coarse, cols[c]);
        } else if (opts.blank_mask_slot == 0) {
            mask.emplace(1, std::vector<bool>(1, false));
        }
        try {
            lad.theta[static_cast<std::size_t>(slot)] =
                solve_particular(a, b, mask ? &*mask : nullptr);
        } catch (const Infeasible& e) {
            throw InfeasibleLift(slot, std::string("chain map lift failed at slot ") +
                                           std::to_string(slot) + ": " + e.what());
        }
    }
    return lad;
}

/// Exact commutation of every square, including the augmentation row.
inline bool ladder_commutes(const ThetaLadder& lad) {
    std::size_t m = lad.theta.size() - 1;
    for (std::size_t i = 0; i < m; ++i) {
        if (lad.fine_gc.d[i] * lad.theta[i] != lad.theta[i + 1] * lad.coarse_gc.d[i]) return false;
    }
    if (lad.coarse_gc.augmented && lad.fine_gc.augmented) {
        // a-row of the fine complex composed with the top map equals the
        // coarse a-row: the augmentation slot map is the identity.
        if (lad.fine_gc.d[m] * lad.theta[m] != lad.coarse_gc.d[m]) return false;
    }
    return true;
}

namespace detail {

/// Reduced rational homology of the order complex of a finite poset given
/// by a strict-chain generator; returns true when every reduced Betti
/// number vanishes (the empty poset counts as acyclic here: the callers
/// treat an empty difference set as no obstruction).
inline bool order_complex_acyclic(int n, const std::vector<std::vector<bool>>& less) {
    if (n == 0) return true;
    std::vector<std::vector<std::vector<int>>> chains;  // chains[k]: k-simplices
    chains.push_back({});
    for (int v = 0; v < n; ++v) chains[0].push_back({v});
    while (true) {
        const auto& prev = chains.back();
        std::vector<std::vector<int>> next;
        for (const auto& ch : prev)
            for (int v = 0; v < n; ++v)
                if (less[ch.back()][v]) {
                    std::vector<int> ext = ch;
                    ext.push_back(v);
                    next.push_back(std::move(ext));
                }
        if (next.empty()) break;
        chains.push_back(std::move(next));
    }
    std::vector<std::map<std::vector<int>, std::size_t>> index(chains.size());
    for (std::size_t k = 0; k < chains.size(); ++k)
        for (std::size_t i = 0; i < chains[k].size(); ++i) index[k][chains[k][i]] = i;
    // Boundary ranks; the augmentation counts as the rank-one map below
    // degree zero.
    std::vector<std::size_t> ranks(chains.size() + 1, 0);
    ranks[0] = 1;  // augmentation C_0 -> Q is onto for a nonempty complex
    for (std::size_t k = 1; k < chains.size(); ++k) {
        RatMat bd(chains[k - 1].size(), chains[k].size());
        for (std::size_t c = 0; c < chains[k].size(); ++c) {
            const auto& ch = chains[k][c];
            int sign = 1;
            for (std::size_t drop = 0; drop < ch.size(); ++drop) {
                std::vector<int> fc;
                for (std::size_t i = 0; i < ch.size(); ++i)
                    if (i != drop) fc.push_back(ch[i]);
                bd(index[k - 1][fc], c) += sign;
                sign = -sign;
            }
        }
        ranks[k] = rank(bd);
    }
    for (std::size_t k = 0; k < chains.size(); ++k) {
        std::size_t betti = chains[k].size() - ranks[k] - ranks[k + 1];
        if (betti != 0) return false;
    }
    return true;
}

}  // namespace detail

/// Star members of tau in the fine stratification that do not lie wholly
/// inside the open star of sigma in the coarse one.  A cell cut by one of
/// the star's walls straddles the region and is kept in the difference.
inline std::vector<int> star_difference(const Stratification& fine, int tau,
                                        const Stratification& coarse, int sigma) {
    auto form = coarse.star_halfspace_form(sigma);
    std::vector<int> diff;
    if (!form) return diff;  // the star of a kernel point is everything
    for (int member : fine.star_members(tau)) {
        const RatVec& p = fine.cell(member).interior;
        bool inside = true;
        for (auto [i, s] : *form)
            if (sgn(dot(coarse.normals()[i], p)) * s <= 0) inside = false;
        if (inside)
            for (auto [i, s] : *form)
                if (fine.cuts(member, coarse.normals()[i])) inside = false;
        if (!inside) diff.push_back(member);
    }
    return diff;
}

/// The obstruction to lifting through this pair vanishes exactly when the
/// star difference is acyclic (or empty).
inline bool difference_acyclic(const Stratification& fine, int tau, const Stratification& coarse,
                               int sigma) {
    std::vector<int> diff = star_difference(fine, tau, coarse, sigma);
    int n = static_cast<int>(diff.size());
    std::vector<std::vector<bool>> less(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            if (a != b && fine.face(diff[a], diff[b])) less[a][b] = true;
    return detail::order_complex_acyclic(n, less);
}

}  // namespace strata

#endif
