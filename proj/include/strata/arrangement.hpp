/**
 * Central hyperplane arrangements and the cell stratification they induce
 * on the unit sphere S^{m-1}.
 *
 * A cell is a sign vector over the normals: the set of unit directions y
 * with sgn(a_i . y) prescribed per hyperplane.  Every class with at least
 * one nonzero sign is a relatively open convex spherical cell.  The all-zero
 * class is the common kernel of the normals intersected with the sphere:
 * empty when the arrangement is essential, a pair of antipodal points when
 * the kernel is a line (stored as two 0-cells tagged +/-), and rejected
 * outright when the kernel is larger, because the class would then be a
 * positive-dimensional sphere rather than a cell.
 *
 * All geometry is exact: interior points are primitive integer rays
 * produced by the strict-feasibility solver, and face/star/meet/refinement
 * queries reduce to sign comparisons and feasibility checks.
 */
#ifndef STRATA_ARRANGEMENT_HPP
#define STRATA_ARRANGEMENT_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "strata/feasibility.hpp"
#include "strata/linalg.hpp"
#include "strata/rational.hpp"

namespace strata {

struct Cell {
    std::vector<int> signs;  // -1 / 0 / +1 per normal
    int tag = 0;             // +-1 for the two kernel points, else 0
    int dim = -1;
    RatVec interior;  // primitive integer ray in the relative interior
};

/// Canonical form for a normal: primitive integer ray whose first nonzero
/// entry is positive.  Two normals are the same hyperplane iff their
/// canonical forms coincide.
inline RatVec canonical_normal(const RatVec& v) {
    RatVec p = primitive_ray(v);
    for (const Rat& x : p) {
        if (x == 0) continue;
        if (x < 0)
            for (Rat& y : p) y = -y;
        break;
    }
    return p;
}

class Stratification {
  public:
    Stratification(int m, std::vector<RatVec> normals) : m_(m) {
        if (m <= 0) throw std::invalid_argument("ambient dimension must be positive");
        for (RatVec& n : normals) {
            if (n.size() != static_cast<std::size_t>(m))
                throw std::invalid_argument("normal has wrong dimension");
            if (is_zero_vec(n)) throw std::invalid_argument("zero normal");
            n = canonical_normal(n);
            for (const RatVec& seen : normals_)
                if (seen == n) throw std::invalid_argument("duplicate hyperplane (up to sign)");
            normals_.push_back(std::move(n));
        }
        compute_kernel();
        check_expressibility();
        enumerate();
    }

    int m() const { return m_; }
    const std::vector<RatVec>& normals() const { return normals_; }
    const std::vector<Cell>& cells() const { return cells_; }
    const Cell& cell(int i) const { return cells_[static_cast<std::size_t>(i)]; }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    bool essential() const { return kernel_dir_.empty(); }
    const RatVec& kernel_dir() const { return kernel_dir_; }

    /// Cells of a given dimension, in canonical order.
    std::vector<int> cells_of_dim(int k) const {
        std::vector<int> out;
        for (int i = 0; i < cell_count(); ++i)
            if (cells_[i].dim == k) out.push_back(i);
        return out;
    }

    int top_dim() const { return m_ - 1; }

    int index_of(const std::vector<int>& signs, int tag) const {
        auto it = index_.find({signs, tag});
        return it == index_.end() ? -1 : it->second;
    }

    /// sigma lies in the closure of tau.  For ordinary cells this is the
    /// componentwise test sign_sigma(i) in {0, sign_tau(i)}; the kernel
    /// points additionally compare tags against each other (each kernel
    /// point lies in every cell closure, but not in the other point's).
    bool face(int sigma, int tau) const {
        const Cell& s = cells_[sigma];
        const Cell& t = cells_[tau];
        if (s.tag != 0 && t.tag != 0) return s.tag == t.tag;
        if (s.tag != 0) return true;  // kernel line lies in every closed cone
        if (t.tag != 0) return false;
        for (std::size_t i = 0; i < normals_.size(); ++i)
            if (s.signs[i] != 0 && s.signs[i] != t.signs[i]) return false;
        return true;
    }

    /// Open star: all cells whose closure contains sigma (sigma included).
    std::vector<int> star_members(int sigma) const {
        std::vector<int> out;
        for (int t = 0; t < cell_count(); ++t)
            if (face(sigma, t)) out.push_back(t);
        return out;
    }

    /// Star as an intersection of open half-spaces: (normal index, sign)
    /// pairs.  Valid for cells with a nonzero sign; the kernel points have
    /// no such form and return nullopt.
    std::optional<std::vector<std::pair<int, int>>> star_halfspace_form(int sigma) const {
        const Cell& s = cells_[sigma];
        if (s.tag != 0) return std::nullopt;
        std::vector<std::pair<int, int>> form;
        for (std::size_t i = 0; i < normals_.size(); ++i)
            if (s.signs[i] != 0) form.push_back({static_cast<int>(i), s.signs[i]});
        return form;
    }

    /// Strict constraint system cutting out the open cone over a cell.
    std::vector<Constraint> cell_constraints(int idx) const {
        const Cell& c = cells_[idx];
        std::vector<Constraint> cons;
        for (std::size_t i = 0; i < normals_.size(); ++i) {
            if (c.signs[i] == 0) cons.push_back({normals_[i], Rel::EQ});
            else if (c.signs[i] > 0) cons.push_back({normals_[i], Rel::GT});
            else cons.push_back({negate(normals_[i]), Rel::GT});
        }
        if (c.tag != 0) {
            RatVec f = kernel_dir_;
            if (c.tag < 0) f = negate(f);
            cons.push_back({f, Rel::GT});
        }
        return cons;
    }

    /// Does the hyperplane with the given normal separate points of the
    /// cell?  (Both open sides meet its cone.)
    bool cuts(int idx, const RatVec& a) const {
        std::vector<Constraint> cons = cell_constraints(idx);
        cons.push_back({a, Rel::GT});
        if (!feasible_strict(cons, m_)) return false;
        cons.back().a = negate(a);
        return feasible_strict(cons, m_).has_value();
    }

    /// Index of the cell containing a nonzero point (as a ray).
    int cell_containing(const RatVec& p) const {
        std::vector<int> signs(normals_.size());
        bool all_zero = true;
        for (std::size_t i = 0; i < normals_.size(); ++i) {
            signs[i] = sgn(dot(normals_[i], p));
            if (signs[i] != 0) all_zero = false;
        }
        int tag = 0;
        if (all_zero && !kernel_dir_.empty()) tag = sgn(dot(kernel_dir_, p));
        int idx = index_of(signs, tag);
        if (idx < 0) throw std::invalid_argument("point lies in no cell (zero vector?)");
        return idx;
    }

    /// Greatest common face: the cell whose closure is the intersection of
    /// the two closures, nullopt when the intersection is not a single
    /// closed cell, and -1 (the empty-cell sentinel) when it is empty.
    std::optional<int> meet(int sigma, int tau) const {
        std::vector<int> common;
        for (int d = 0; d < cell_count(); ++d)
            if (face(d, sigma) && face(d, tau)) common.push_back(d);
        if (common.empty()) return -1;  // closures meet only at the origin
        int best = common[0];
        for (int d : common)
            if (cells_[d].dim > cells_[best].dim) best = d;
        for (int d : common)
            if (!face(d, best)) return std::nullopt;
        return best;
    }

    static RatVec negate(RatVec v) {
        for (Rat& x : v) x = -x;
        return v;
    }

  private:
    void compute_kernel() {
        if (normals_.empty()) {
            if (m_ == 1) {
                kernel_dir_ = {Rat(1)};
                return;
            }
            throw std::invalid_argument("empty arrangement leaves a sphere stratum, not cells");
        }
        RatMat nm(normals_.size(), m_);
        for (std::size_t i = 0; i < normals_.size(); ++i)
            for (int j = 0; j < m_; ++j) nm(i, j) = normals_[i][j];
        std::vector<RatVec> kb = kernel_basis(nm);
        if (kb.size() >= 2)
            throw std::invalid_argument(
                "normals leave a common kernel of dimension >= 2; the zero stratum "
                "would be a sphere, not a cell");
        if (kb.size() == 1) kernel_dir_ = primitive_ray(kb[0]);
    }

    /// Every top cell must be expressible as an intersection of kept open
    /// half-spaces with the sphere; a hyperplane contributing to no such
    /// description would be redundant.  For central arrangements every
    /// distinct hyperplane is load-bearing, so this is a validation pass
    /// rather than an actual pruning step.
    void check_expressibility() const {
        // Deferred to enumerate(): needs the cells.  See validate_minimal().
    }

    void validate_minimal() const {
        for (std::size_t i = 0; i < normals_.size(); ++i) {
            bool needed = false;
            for (int c = 0; c < cell_count() && !needed; ++c) {
                const Cell& cell = cells_[c];
                if (cell.dim != m_ - 1 || cell.signs[i] == 0) continue;
                std::vector<Constraint> cons;
                for (std::size_t j = 0; j < normals_.size(); ++j) {
                    if (j == i || cell.signs[j] == 0) continue;
                    cons.push_back({cell.signs[j] > 0 ? normals_[j] : negate(normals_[j]), Rel::GT});
                }
                cons.push_back({cell.signs[i] > 0 ? negate(normals_[i]) : normals_[i], Rel::GT});
                if (feasible_strict(cons, m_)) needed = true;
            }
            if (!needed)
                throw std::invalid_argument("hyperplane " + std::to_string(i) +
                                            " does not bound any top cell (redundant input)");
        }
    }

    void enumerate() {
        std::vector<int> signs(normals_.size(), 0);
        dfs(0, signs);
        if (!kernel_dir_.empty()) {
            for (int tag : {+1, -1}) {
                Cell c;
                c.signs.assign(normals_.size(), 0);
                c.tag = tag;
                c.dim = 0;
                c.interior = tag > 0 ? kernel_dir_ : negate(kernel_dir_);
                cells_.push_back(std::move(c));
            }
        }
        std::sort(cells_.begin(), cells_.end(), [](const Cell& a, const Cell& b) {
            if (a.dim != b.dim) return a.dim < b.dim;
            if (a.signs != b.signs) return a.signs < b.signs;
            return a.tag < b.tag;
        });
        for (int i = 0; i < cell_count(); ++i) index_[{cells_[i].signs, cells_[i].tag}] = i;
        validate_minimal();
    }

    void dfs(std::size_t i, std::vector<int>& signs) {
        if (i == normals_.size()) {
            bool all_zero = std::all_of(signs.begin(), signs.end(), [](int s) { return s == 0; });
            if (all_zero) return;  // kernel stratum handled separately
            std::vector<Constraint> cons = prefix_constraints(signs, i);
            std::optional<RatVec> w = feasible_strict(cons, m_);
            if (!w) return;
            Cell c;
            c.signs = signs;
            RatMat zm = zero_normal_matrix(signs);
            c.dim = m_ - static_cast<int>(rank(zm)) - 1;
            c.interior = primitive_ray(*w);
            cells_.push_back(std::move(c));
            return;
        }
        for (int s : {0, 1, -1}) {
            signs[i] = s;
            if (feasible_strict(prefix_constraints(signs, i + 1), m_)) dfs(i + 1, signs);
        }
        signs[i] = 0;
    }

    std::vector<Constraint> prefix_constraints(const std::vector<int>& signs, std::size_t upto) const {
        std::vector<Constraint> cons;
        for (std::size_t j = 0; j < upto; ++j) {
            if (signs[j] == 0) cons.push_back({normals_[j], Rel::EQ});
            else if (signs[j] > 0) cons.push_back({normals_[j], Rel::GT});
            else cons.push_back({negate(normals_[j]), Rel::GT});
        }
        return cons;
    }

    RatMat zero_normal_matrix(const std::vector<int>& signs) const {
        std::vector<std::size_t> zero;
        for (std::size_t j = 0; j < signs.size(); ++j)
            if (signs[j] == 0) zero.push_back(j);
        RatMat zm(zero.size(), m_);
        for (std::size_t r = 0; r < zero.size(); ++r)
            for (int j = 0; j < m_; ++j) zm(r, j) = normals_[zero[r]][j];
        return zm;
    }

    int m_;
    std::vector<RatVec> normals_;
    RatVec kernel_dir_;  // empty when essential
    std::vector<Cell> cells_;
    std::map<std::pair<std::vector<int>, int>, int> index_;
};

/// |inner| is contained in |outer-cell|: the interior ray lands in the
/// outer cell and no outer hyperplane separates the inner cell.
inline bool cell_inside(const Stratification& fine, int inner, const Stratification& coarse,
                        int outer) {
    const Cell& c = fine.cell(inner);
    const Cell& d = coarse.cell(outer);
    const RatVec& p = c.interior;
    for (std::size_t i = 0; i < coarse.normals().size(); ++i) {
        int s = sgn(dot(coarse.normals()[i], p));
        if (s != d.signs[i]) return false;
    }
    if (d.tag != 0 && sgn(dot(coarse.kernel_dir(), p)) != d.tag) return false;
    for (const RatVec& a : coarse.normals())
        if (fine.cuts(inner, a)) return false;
    return true;
}

/// The coarse cell containing the fine cell, or nullopt if the fine cell
/// straddles a coarse hyperplane (i.e. the pair is not a refinement there).
inline std::optional<int> containing_cell(const Stratification& fine, int inner,
                                          const Stratification& coarse) {
    for (const RatVec& a : coarse.normals())
        if (fine.cuts(inner, a)) return std::nullopt;
    int idx = coarse.cell_containing(fine.cell(inner).interior);
    return idx;
}

/// chi < chi': every cell of the finer stratification lies inside a single
/// cell of the coarser one.
inline bool is_refinement(const Stratification& coarse, const Stratification& fine) {
    if (coarse.m() != fine.m()) return false;
    for (int c = 0; c < fine.cell_count(); ++c)
        if (!containing_cell(fine, c, coarse)) return false;
    return true;
}

/// Union arrangement: the coarse normals followed by the new ones.
inline Stratification common_refinement(const Stratification& a, const Stratification& b) {
    if (a.m() != b.m()) throw std::invalid_argument("dimension mismatch");
    std::vector<RatVec> normals = a.normals();
    for (const RatVec& n : b.normals())
        if (std::find(normals.begin(), normals.end(), n) == normals.end()) normals.push_back(n);
    return Stratification(a.m(), std::move(normals));
}

inline bool equal_stratification(const Stratification& a, const Stratification& b) {
    return a.m() == b.m() && a.cell_count() == b.cell_count() && is_refinement(a, b);
}

/// An open union of cells (the spherical part of a cone set M*K).
struct ConeSet {
    const Stratification* strat = nullptr;
    std::vector<int> members;  // sorted cell indices

    bool contains_cell(int idx) const {
        return std::binary_search(members.begin(), members.end(), idx);
    }
};

/// Validates openness: a union of cells is open iff it contains the star of
/// every member.
inline ConeSet cone_set(const Stratification& strat, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    ConeSet k{&strat, members};
    for (int s : members)
        for (int t : strat.star_members(s))
            if (!k.contains_cell(t))
                throw std::invalid_argument("cell set is not open: missing a star neighbor");
    return k;
}

/// Is the disk-coordinate point z inside the open cone M*K?  (0 < |z| < 1
/// and the ray through z lies in K.)
inline bool cone_member(const ConeSet& k, const RatVec& z) {
    Rat n2 = dot(z, z);
    if (n2 == 0 || n2 >= 1) return false;
    return k.contains_cell(k.strat->cell_containing(z));
}

/// Connected components of an arbitrary cell union, via face adjacency.
inline std::vector<std::vector<int>> components_of(const Stratification& strat,
                                                   const std::vector<int>& members) {
    std::vector<int> parent(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < members.size(); ++i)
        for (std::size_t j = i + 1; j < members.size(); ++j)
            if (strat.face(members[i], members[j]) || strat.face(members[j], members[i]))
                parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < members.size(); ++i) groups[find(static_cast<int>(i))].push_back(members[i]);
    std::vector<std::vector<int>> out;
    for (auto& [root, cells] : groups) out.push_back(std::move(cells));
    // Deterministic order: by smallest member index.
    std::sort(out.begin(), out.end(),
              [](const std::vector<int>& x, const std::vector<int>& y) { return x[0] < y[0]; });
    return out;
}

}  // namespace strata

#endif
