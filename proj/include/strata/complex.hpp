/**
 * The oriented cochain complex attached to a sphere stratification.
 *
 * Slots run from the ambient rank-one space through the cell spaces in
 * increasing dimension, optionally ending in a rank-one augmentation slot:
 *
 *   C_X -> D_0 -> D_1 -> ... -> D_{m-1} [ -> C_M ]
 *
 * where D_k is spanned by the k-cells visible in the chosen stalk context.
 * The first map is the all-ones inclusion, the middle maps carry incidence
 * numbers, and the augmentation row carries the ambient orientation of the
 * top cells.  Exactness of these complexes is the local statement the rest
 * of the library builds on, so the verifier reports failures as located
 * matrix entries rather than a single boolean.
 */
#ifndef STRATA_COMPLEX_HPP
#define STRATA_COMPLEX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "strata/arrangement.hpp"
#include "strata/linalg.hpp"
#include "strata/orientation.hpp"

namespace strata {

enum class ContextKind { AtM, AtCell };

/// Where the stalk is taken: at the singular locus (all cells visible) or
/// at a point of a specific cell (only the closed star of that cell).
struct StalkContext {
    ContextKind kind = ContextKind::AtM;
    int cell = -1;          // used when kind == AtCell
    bool augmented = true;  // append the rank-one top slot (AtM only)

    static StalkContext at_m(bool with_augmentation = true) {
        return {ContextKind::AtM, -1, with_augmentation};
    }
    static StalkContext at_cell(int delta) { return {ContextKind::AtCell, delta, false}; }
};

/// Cells whose closed star contains the given cell; by the sign test this
/// is symmetric, so it equally lists the cells visible from a point of
/// delta.  Two cells see each other exactly when no normal separates them
/// with strictly opposite signs.
inline std::vector<int> restricted_cells(const Stratification& s, int delta) {
    const Cell& d = s.cell(delta);
    std::vector<int> out;
    for (int t = 0; t < s.cell_count(); ++t) {
        const Cell& c = s.cell(t);
        bool compatible = true;
        for (std::size_t i = 0; i < s.normals().size() && compatible; ++i)
            if (d.signs[i] != 0 && c.signs[i] != 0 && c.signs[i] != d.signs[i]) compatible = false;
        if (compatible) out.push_back(t);
    }
    return out;
}

struct GradedComplex {
    int m = 0;
    bool augmented = false;
    std::vector<std::vector<int>> bases;  // bases[k]: cell indices spanning D_k
    std::vector<RatMat> d;                // d[i] maps slot i to slot i+1
    std::vector<std::size_t> slot_dims;   // 1, |D_0|, ..., |D_{m-1}| [, 1]

    std::size_t slot_count() const { return slot_dims.size(); }
    int degree_of_slot(std::size_t i) const { return static_cast<int>(i) - m; }
};

inline GradedComplex build_complex(const Stratification& s, const StalkContext& ctx) {
    if (!s.essential())
        throw std::invalid_argument("cochain complexes need an essential arrangement");
    GradedComplex gc;
    gc.m = s.m();
    gc.augmented = ctx.kind == ContextKind::AtM && ctx.augmented;

    std::vector<int> visible;
    if (ctx.kind == ContextKind::AtM) {
        for (int t = 0; t < s.cell_count(); ++t) visible.push_back(t);
    } else {
        visible = restricted_cells(s, ctx.cell);
    }
    gc.bases.assign(static_cast<std::size_t>(s.m()), {});
    for (int t : visible) gc.bases[static_cast<std::size_t>(s.cell(t).dim)].push_back(t);

    gc.slot_dims.push_back(1);
    for (const auto& b : gc.bases) gc.slot_dims.push_back(b.size());
    if (gc.augmented) gc.slot_dims.push_back(1);

    // C_X -> D_0: every 0-cell sees the ambient section with coefficient 1.
    RatMat d0(gc.bases[0].size(), 1);
    for (std::size_t r = 0; r < gc.bases[0].size(); ++r) d0(r, 0) = 1;
    gc.d.push_back(std::move(d0));

    for (int k = 0; k + 1 < s.m(); ++k) {
        const auto& src = gc.bases[static_cast<std::size_t>(k)];
        const auto& dst = gc.bases[static_cast<std::size_t>(k + 1)];
        RatMat dk(dst.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c)
            for (std::size_t r = 0; r < dst.size(); ++r)
                if (s.face(src[c], dst[r])) dk(r, c) = incidence_coface(s, src[c], dst[r]);
        gc.d.push_back(std::move(dk));
    }

    if (gc.augmented) {
        const auto& top = gc.bases[static_cast<std::size_t>(s.m() - 1)];
        RatMat da(1, top.size());
        for (std::size_t c = 0; c < top.size(); ++c) da(0, c) = a_one(s, top[c]);
        gc.d.push_back(std::move(da));
    }
    return gc;
}

/// A nonzero entry of a composite d[i+1] * d[i], located for reporting.
struct ComplexFailure {
    std::size_t matrix_index;  // the i of the offending composite
    std::size_t row, col;
    Rat value;
};

inline std::vector<ComplexFailure> verify_complex(const GradedComplex& gc) {
    std::vector<ComplexFailure> bad;
    for (std::size_t i = 0; i + 1 < gc.d.size(); ++i) {
        RatMat prod = gc.d[i + 1] * gc.d[i];
        for (std::size_t r = 0; r < prod.rows(); ++r)
            for (std::size_t c = 0; c < prod.cols(); ++c)
                if (prod(r, c) != 0) bad.push_back({i, r, c, prod(r, c)});
    }
    return bad;
}

/// Cohomology dimension at every slot, by rank bookkeeping:
/// dim ker(out) - rank(in), with zero maps off both ends.
inline std::vector<std::size_t> cohomology_dims(const GradedComplex& gc) {
    std::vector<std::size_t> ranks(gc.d.size());
    for (std::size_t i = 0; i < gc.d.size(); ++i) ranks[i] = rank(gc.d[i]);
    std::vector<std::size_t> h(gc.slot_count());
    for (std::size_t i = 0; i < gc.slot_count(); ++i) {
        std::size_t rank_out = i < gc.d.size() ? ranks[i] : 0;
        std::size_t rank_in = i > 0 ? ranks[i - 1] : 0;
        h[i] = gc.slot_dims[i] - rank_out - rank_in;
    }
    return h;
}

/// The chain-level boundary operators, assembled independently by walking
/// faces downward.  del[k] maps k-chains to (k-1)-chains over the same
/// bases as the cochain complex.
inline std::vector<RatMat> build_boundaries(const Stratification& s, const GradedComplex& gc) {
    std::vector<RatMat> del;
    for (int k = 1; k < s.m(); ++k) {
        const auto& src = gc.bases[static_cast<std::size_t>(k)];
        const auto& dst = gc.bases[static_cast<std::size_t>(k - 1)];
        RatMat bk(dst.size(), src.size());
        for (std::size_t c = 0; c < src.size(); ++c) {
            // faces of src[c] one dimension down, restricted to the context
            for (std::size_t r = 0; r < dst.size(); ++r)
                if (s.face(dst[r], src[c])) bk(r, c) = incidence_coface(s, dst[r], src[c]);
        }
        del.push_back(std::move(bk));
    }
    return del;
}

/// The coboundary between cell slots must be the transpose of the chain
/// boundary: d[k+1] (slot map D_{k-1} -> D_k) == del[k-1]^T.
inline bool duality_holds(const GradedComplex& gc, const std::vector<RatMat>& del) {
    for (std::size_t k = 0; k < del.size(); ++k)
        if (gc.d[k + 1] != del[k].transpose()) return false;
    return true;
}

}  // namespace strata

#endif
