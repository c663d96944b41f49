/**
 * Locally constant sheaf models over the stratified sphere, with rational
 * coefficients.
 *
 * Two kinds are supported: the constant sheaf of any rank, and (on the
 * circle) a local system given by an invertible monodromy matrix.  The
 * local system is realized geometrically: sections are flat away from a
 * movable cut ray, and continuing a flat value counterclockwise across the
 * cut multiplies it by the monodromy.  Section spaces over open connected
 * regions get explicit coordinates (the flat value just counterclockwise
 * of the cut when the region contains it, the constant flat value
 * otherwise; kernel coordinates on the full circle), and restriction maps
 * between nested regions are exact matrices in these coordinates.
 *
 * The presentation matrix of a stratification pairs top cells against
 * cells one dimension down, weighting each restriction by the incidence
 * number; its cokernel is the local cohomology model the main theorem
 * speaks about.
 */
#ifndef STRATA_SHEAF_HPP
#define STRATA_SHEAF_HPP

#include <optional>
#include <stdexcept>
#include <vector>

#include "strata/arrangement.hpp"
#include "strata/complex.hpp"
#include "strata/linalg.hpp"
#include "strata/orientation.hpp"

namespace strata {

struct SheafModel {
    std::size_t r = 1;
    bool twisted = false;
    RatMat monodromy;  // r x r, invertible; twisted only
    RatVec cut;        // cut ray direction on the circle; twisted only
};

inline SheafModel constant_sheaf(std::size_t r) {
    if (r == 0) throw std::invalid_argument("sheaf rank must be positive");
    return {r, false, RatMat(0, 0), {}};
}

inline SheafModel local_system(const RatMat& monodromy, RatVec cut = {Rat(-1), Rat(0)}) {
    if (monodromy.rows() == 0 || monodromy.rows() != monodromy.cols())
        throw std::invalid_argument("monodromy must be square and nonempty");
    if (rank(monodromy) != monodromy.rows())
        throw std::invalid_argument("monodromy must be invertible");
    if (cut.size() != 2 || is_zero_vec(cut))
        throw std::invalid_argument("cut must be a nonzero direction in the plane");
    return {monodromy.rows(), true, monodromy, primitive_ray(cut)};
}

/// Basis of the monodromy-invariant vectors, as columns; the coordinates
/// of sections over the full circle.
inline RatMat invariant_basis(const SheafModel& model) {
    RatMat a = model.monodromy;
    for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) -= 1;
    std::vector<RatVec> kb = kernel_basis(a);
    RatMat k(model.r, kb.size());
    for (std::size_t c = 0; c < kb.size(); ++c)
        for (std::size_t r = 0; r < model.r; ++r) k(r, c) = kb[c][r];
    return k;
}

/// An open connected subset of the circle: everything, the complement of a
/// single ray (start == end), or the open arc swept counterclockwise from
/// start to end.  Regions of spheres of other dimensions only occur under
/// the constant sheaf, where the descriptor is irrelevant; they use the
/// `full` form.
struct Region {
    bool full = true;
    RatVec start, end;
};

namespace detail {

inline Rat cross2(const RatVec& a, const RatVec& b) { return a[0] * b[1] - a[1] * b[0]; }

inline bool same_ray(const RatVec& a, const RatVec& b) {
    return cross2(a, b) == 0 && dot(a, b) > 0;
}

/// A ray infinitesimally rotated: v + eps * dv with eps > 0 arbitrarily
/// small.  Sign queries resolve ties lexicographically.
struct PerturbedRay {
    RatVec v, dv;
};

inline PerturbedRay just_ccw(const RatVec& v) { return {v, {-v[1], v[0]}}; }

inline int sgn_cross_left(const RatVec& a, const PerturbedRay& x) {
    int s = sgn(cross2(a, x.v));
    return s != 0 ? s : sgn(cross2(a, x.dv));
}

inline int sgn_cross_right(const PerturbedRay& x, const RatVec& b) {
    int s = sgn(cross2(x.v, b));
    return s != 0 ? s : sgn(cross2(x.dv, b));
}

inline int sgn_dot(const RatVec& a, const PerturbedRay& x) {
    int s = sgn(dot(a, x.v));
    return s != 0 ? s : sgn(dot(a, x.dv));
}

}  // namespace detail

/// Is the ray x strictly inside the open arc swept counterclockwise from a
/// to b?  Exact, with the usual convexity case split on the arc length.
inline bool ccw_strictly_between(const RatVec& a, const RatVec& x, const RatVec& b) {
    using detail::cross2;
    Rat ab = cross2(a, b);
    Rat ax = cross2(a, x);
    Rat xb = cross2(x, b);
    if (ab > 0) return ax > 0 && xb > 0;
    if (ab < 0) return ax > 0 || xb > 0;
    if (dot(a, b) > 0) return !detail::same_ray(a, x);  // full circle minus the ray
    return ax > 0;                                      // half turn
}

/// Same predicate for an infinitesimally perturbed query ray.
inline bool ccw_strictly_between(const RatVec& a, const detail::PerturbedRay& x, const RatVec& b) {
    using namespace detail;
    Rat ab = cross2(a, b);
    int ax = sgn_cross_left(a, x);
    int xb = sgn_cross_right(x, b);
    if (ab > 0) return ax > 0 && xb > 0;
    if (ab < 0) return ax > 0 || xb > 0;
    if (dot(a, b) > 0) return !(ax == 0 && sgn_dot(a, x) > 0);
    return ax > 0;
}

inline bool region_contains_ray(const Region& reg, const RatVec& x) {
    if (reg.full) return true;
    if (detail::same_ray(reg.start, reg.end)) return !detail::same_ray(x, reg.start);
    return ccw_strictly_between(reg.start, x, reg.end);
}

inline bool region_contains_ray(const Region& reg, const detail::PerturbedRay& x) {
    if (reg.full) return true;
    if (detail::same_ray(reg.start, reg.end))
        return !(detail::sgn_cross_left(reg.start, x) == 0 && detail::sgn_dot(reg.start, x) > 0);
    return ccw_strictly_between(reg.start, x, reg.end);
}

/// The open region covered by a union of circle cells, as an arc
/// descriptor.  Returns nullopt when the union is not connected (or not
/// describable as a single arc), which the callers treat as invalid input
/// for section spaces.
inline std::optional<Region> region_of(const Stratification& s, const std::vector<int>& members) {
    if (s.m() != 2) throw std::invalid_argument("arc regions live on the circle");
    auto is_member = [&](int c) {
        return std::find(members.begin(), members.end(), c) != members.end();
    };
    std::vector<int> boundary;
    for (int d = 0; d < s.cell_count(); ++d) {
        if (s.cell(d).dim != 0 || is_member(d)) continue;
        bool touches = false;
        for (int t : members)
            if (s.face(d, t)) touches = true;
        if (touches) boundary.push_back(d);
    }
    std::vector<Region> trials;
    if (boundary.empty()) {
        trials.push_back({true, {}, {}});
    } else if (boundary.size() == 1) {
        const RatVec& p = s.cell(boundary[0]).interior;
        trials.push_back({false, p, p});
    } else if (boundary.size() == 2) {
        const RatVec& p = s.cell(boundary[0]).interior;
        const RatVec& q = s.cell(boundary[1]).interior;
        trials.push_back({false, p, q});
        trials.push_back({false, q, p});
    } else {
        return std::nullopt;
    }
    for (const Region& reg : trials) {
        bool ok = true;
        for (int c = 0; c < s.cell_count() && ok; ++c) {
            bool inside = region_contains_ray(reg, s.cell(c).interior);
            if (inside != is_member(c)) ok = false;
        }
        if (ok) return reg;
    }
    return std::nullopt;
}

/// The open star of a cell as a region of the circle.
inline Region star_region(const Stratification& s, int sigma) {
    auto reg = region_of(s, s.star_members(sigma));
    if (!reg) throw std::logic_error("a star region must be a connected arc");
    return *reg;
}

/// Dimension of the section space over a region.
inline std::size_t section_dim(const SheafModel& model, const Region& reg) {
    if (!model.twisted) return model.r;
    if (reg.full) return invariant_basis(model).cols();
    return model.r;
}

/**
 * Restriction map between section coordinate spaces of nested regions
 * (small inside big; containment is the caller's invariant).  For the
 * constant sheaf this is the identity.  For a local system the anchored
 * coordinates transform by the identity when both regions see the cut or
 * neither does, by the inverse monodromy when the smaller region sits
 * clockwise of the cut inside the bigger one, and by the invariant basis
 * when restricting from the full circle.
 */
inline RatMat restriction_between(const SheafModel& model, const Region& big, const Region& small) {
    if (!model.twisted) return RatMat::identity(model.r);
    if (big.full) {
        RatMat k = invariant_basis(model);
        if (small.full) return RatMat::identity(k.cols());
        return k;
    }
    if (small.full) throw std::invalid_argument("a proper arc cannot contain the full circle");
    if (!region_contains_ray(big, model.cut)) return RatMat::identity(model.r);
    if (region_contains_ray(small, model.cut)) return RatMat::identity(model.r);
    // The small arc avoids the cut: decide which side of it the arc lies
    // on.  A point just counterclockwise of its start ray is inside the
    // open arc, so test that point against the span from the cut to the
    // counterclockwise end of the big region.
    detail::PerturbedRay probe = detail::just_ccw(small.start);
    const RatVec& ccw_end = detail::same_ray(big.start, big.end) ? big.start : big.end;
    bool ccw_side = detail::same_ray(model.cut, ccw_end)
                        ? false
                        : ccw_strictly_between(model.cut, probe, ccw_end);
    if (ccw_side) return RatMat::identity(model.r);
    return inverse(model.monodromy);
}

/**
 * The presentation of the stalk cohomology model over a stratification:
 * rows grouped by top cells, columns by cells one dimension down (or by
 * the global section space when the sphere is S^0), each block the
 * incidence-weighted restriction between star section spaces.
 */
struct Presentation {
    std::vector<int> target_cells;  // top cells, canonical order
    std::vector<int> source_cells;  // (m-2)-cells; empty when m == 1
    std::vector<std::size_t> target_offsets;
    std::vector<std::size_t> source_offsets;
    RatMat p;
    Cokernel ck;

    std::size_t target_dim() const { return p.rows(); }
    std::size_t coker_dim() const { return ck.dim; }
};

inline Presentation assemble_presentation(const Stratification& s, const SheafModel& model) {
    if (!s.essential())
        throw std::invalid_argument("the presentation needs an essential arrangement");
    if (model.twisted && s.m() != 2)
        throw std::invalid_argument("local systems are supported on the circle only");
    Presentation pr;
    pr.target_cells = s.cells_of_dim(s.top_dim());

    std::vector<Region> target_regions;
    std::vector<std::size_t> target_dims;
    for (int sigma : pr.target_cells) {
        Region reg = model.twisted ? star_region(s, sigma) : Region{true, {}, {}};
        target_regions.push_back(reg);
        target_dims.push_back(section_dim(model, reg));
    }
    std::size_t row_total = 0;
    for (std::size_t i = 0; i < pr.target_cells.size(); ++i) {
        pr.target_offsets.push_back(row_total);
        row_total += target_dims[i];
    }

    if (s.m() == 1) {
        // Source: global sections over the ambient space, restricted plainly
        // into both points' stalks.
        pr.source_offsets.push_back(0);
        pr.p = RatMat(row_total, model.r);
        for (std::size_t i = 0; i < pr.target_cells.size(); ++i)
            for (std::size_t d = 0; d < model.r; ++d) pr.p(pr.target_offsets[i] + d, d) = 1;
        pr.ck = cokernel_basis(pr.p);
        return pr;
    }

    pr.source_cells = s.cells_of_dim(s.top_dim() - 1);
    std::vector<Region> source_regions;
    std::vector<std::size_t> source_dims;
    for (int tau : pr.source_cells) {
        Region reg = model.twisted ? star_region(s, tau) : Region{true, {}, {}};
        source_regions.push_back(reg);
        source_dims.push_back(section_dim(model, reg));
    }
    std::size_t col_total = 0;
    for (std::size_t j = 0; j < pr.source_cells.size(); ++j) {
        pr.source_offsets.push_back(col_total);
        col_total += source_dims[j];
    }

    pr.p = RatMat(row_total, col_total);
    for (std::size_t j = 0; j < pr.source_cells.size(); ++j) {
        for (std::size_t i = 0; i < pr.target_cells.size(); ++i) {
            if (!s.face(pr.source_cells[j], pr.target_cells[i])) continue;
            int inc = incidence_coface(s, pr.source_cells[j], pr.target_cells[i]);
            RatMat res = restriction_between(model, source_regions[j], target_regions[i]);
            for (std::size_t r = 0; r < res.rows(); ++r)
                for (std::size_t c = 0; c < res.cols(); ++c)
                    pr.p(pr.target_offsets[i] + r, pr.source_offsets[j] + c) = inc * res(r, c);
        }
    }
    pr.ck = cokernel_basis(pr.p);
    return pr;
}

}  // namespace strata

#endif
