/**
 * Orientations and incidence numbers for stratification cells.
 *
 * Each cell carries the orientation of a canonical frame: the interior ray
 * first, completed to a basis of the cell's linear span by standard basis
 * vectors where possible and by echelon kernel vectors of the zero-sign
 * normal matrix otherwise.  Incidence numbers between a cell and a
 * codimension-one coface are determinant signs computed in a common
 * completion of the coface span, which makes them independent of the
 * completion choice: changing it rescales both determinants by the same
 * factor.
 */
#ifndef STRATA_ORIENTATION_HPP
#define STRATA_ORIENTATION_HPP

#include <stdexcept>
#include <vector>

#include "strata/arrangement.hpp"
#include "strata/linalg.hpp"

namespace strata {

namespace detail {

inline RatMat rows_to_matrix(const std::vector<RatVec>& rows, std::size_t cols) {
    RatMat m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    return m;
}

/// Greedily appends candidate vectors that grow the rank until it reaches
/// the target.  Throws if the candidates cannot complete the set.
inline void complete_by(std::vector<RatVec>& vecs, const std::vector<RatVec>& candidates,
                        std::size_t dim, std::size_t target_rank) {
    for (const RatVec& c : candidates) {
        if (vecs.size() == target_rank) return;
        std::vector<RatVec> trial = vecs;
        trial.push_back(c);
        if (rank(rows_to_matrix(trial, dim)) == trial.size()) vecs.push_back(c);
    }
    if (vecs.size() != target_rank) throw std::logic_error("candidate set cannot complete the frame");
}

}  // namespace detail

/// Basis of the linear span of the closed cone over a cell: the kernel of
/// the matrix of normals with zero sign there.
inline std::vector<RatVec> span_basis(const Stratification& s, int idx) {
    const Cell& c = s.cell(idx);
    std::vector<RatVec> zero_normals;
    for (std::size_t i = 0; i < s.normals().size(); ++i)
        if (c.signs[i] == 0) zero_normals.push_back(s.normals()[i]);
    RatMat z = detail::rows_to_matrix(zero_normals, s.m());
    return kernel_basis(z);
}

/// Canonical positively oriented frame of a cell: interior ray first, then
/// standard basis vectors lying in the span, then echelon kernel vectors.
inline std::vector<RatVec> canonical_frame(const Stratification& s, int idx) {
    const Cell& c = s.cell(idx);
    std::vector<RatVec> span = span_basis(s, idx);
    std::size_t dim_span = span.size();
    std::vector<RatVec> frame = {c.interior};
    std::vector<RatVec> candidates;
    // Standard basis vectors inside the span: e_j is in the kernel of the
    // zero-sign normals exactly when their j-th coordinates all vanish.
    for (int j = 0; j < s.m(); ++j) {
        bool inside = true;
        for (std::size_t i = 0; i < s.normals().size() && inside; ++i)
            if (c.signs[i] == 0 && s.normals()[i][j] != 0) inside = false;
        if (!inside) continue;
        RatVec e(s.m(), Rat(0));
        e[j] = 1;
        candidates.push_back(std::move(e));
    }
    for (const RatVec& v : span) candidates.push_back(v);
    detail::complete_by(frame, candidates, s.m(), dim_span);
    return frame;
}

/// Completes a spanning set of a subspace to a basis of the ambient space
/// with standard basis vectors.
inline std::vector<RatVec> ambient_completion(const std::vector<RatVec>& span, int m) {
    std::vector<RatVec> full = span;
    std::vector<RatVec> std_basis;
    for (int j = 0; j < m; ++j) {
        RatVec e(m, Rat(0));
        e[j] = 1;
        std_basis.push_back(std::move(e));
    }
    detail::complete_by(full, std_basis, m, static_cast<std::size_t>(m));
    return std::vector<RatVec>(full.begin() + static_cast<std::ptrdiff_t>(span.size()), full.end());
}

namespace detail {

inline int sign_det_rows(const std::vector<RatVec>& rows, int m) {
    RatMat a = rows_to_matrix(rows, m);
    return sgn(determinant(a));
}

}  // namespace detail

/// Orientation of a top cell against the ambient orientation: the sign of
/// the determinant of its canonical frame.
inline int a_one(const Stratification& s, int idx) {
    const Cell& c = s.cell(idx);
    if (c.dim != s.top_dim()) throw std::invalid_argument("a_one needs a top cell");
    std::vector<RatVec> frame = canonical_frame(s, idx);
    int d = detail::sign_det_rows(frame, s.m());
    if (d == 0) throw std::logic_error("degenerate frame");
    return d;
}

/// Incidence number between a cell and a coface one dimension up.  The
/// coface's span is oriented two ways: by its own frame and by the outward
/// vector at sigma followed by sigma's frame; the incidence number compares
/// them, evaluated in a shared ambient completion W of the coface span.
inline int incidence_coface(const Stratification& s, int sigma, int tau) {
    const Cell& cs = s.cell(sigma);
    const Cell& ct = s.cell(tau);
    if (ct.dim != cs.dim + 1 || !s.face(sigma, tau))
        throw std::invalid_argument("incidence_coface needs a codimension-one face pair");
    std::vector<RatVec> frame_sigma = canonical_frame(s, sigma);
    std::vector<RatVec> frame_tau = canonical_frame(s, tau);
    RatVec v_out(s.m());
    for (int j = 0; j < s.m(); ++j) v_out[j] = cs.interior[j] - ct.interior[j];
    std::vector<RatVec> w = ambient_completion(frame_tau, s.m());
    std::vector<RatVec> left = {v_out};
    left.insert(left.end(), frame_sigma.begin(), frame_sigma.end());
    left.insert(left.end(), w.begin(), w.end());
    std::vector<RatVec> right = frame_tau;
    right.insert(right.end(), w.begin(), w.end());
    int dl = detail::sign_det_rows(left, s.m());
    int dr = detail::sign_det_rows(right, s.m());
    if (dl == 0 || dr == 0) throw std::logic_error("degenerate incidence frames");
    return dl * dr;
}

/// Orientation comparison of two cells with the same linear span, possibly
/// from different stratifications (used when a refinement cell sits inside
/// a coarser cell of equal dimension).
inline int incidence_same_dim(const Stratification& sa, int a, const Stratification& sb, int b) {
    if (sa.m() != sb.m()) throw std::invalid_argument("dimension mismatch");
    std::vector<RatVec> fa = canonical_frame(sa, a);
    std::vector<RatVec> fb = canonical_frame(sb, b);
    if (fa.size() != fb.size()) throw std::invalid_argument("cells of different dimension");
    // Equal spans: stacking either frame on the other must not grow rank.
    std::vector<RatVec> stack = fa;
    stack.insert(stack.end(), fb.begin(), fb.end());
    if (rank(detail::rows_to_matrix(stack, sa.m())) != fa.size())
        throw std::invalid_argument("cells span different subspaces");
    std::vector<RatVec> w = ambient_completion(fa, sa.m());
    std::vector<RatVec> left = fa;
    left.insert(left.end(), w.begin(), w.end());
    std::vector<RatVec> right = fb;
    right.insert(right.end(), w.begin(), w.end());
    int dl = detail::sign_det_rows(left, sa.m());
    int dr = detail::sign_det_rows(right, sa.m());
    if (dl == 0 || dr == 0) throw std::logic_error("degenerate frames");
    return dl * dr;
}

}  // namespace strata

#endif
