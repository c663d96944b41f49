/**
 * Wedge families and the quotient space they present: generators are
 * sections over each wedge, relations glue a section to its restriction
 * on every contained wedge.  Also the two combinatorial side conditions
 * a usable family must satisfy (a star witness inside each wedge, and
 * cone connectivity between any two witnesses).
 */
#ifndef STRATA_WEDGE_HPP
#define STRATA_WEDGE_HPP

#include <deque>
#include <optional>
#include <utility>

#include "strata/arrangement.hpp"
#include "strata/sheaf.hpp"

namespace strata {

/// Either the whole ambient space, or the open cone over a cell union of
/// some stratification (origin excluded).  The two kinds differ at the
/// origin even when the cell union is the entire sphere.
struct WedgeSet {
    bool full = false;
    std::optional<Stratification> strat;
    std::vector<int> cells;  // sorted, star-closed; empty for the full kind
};

inline WedgeSet full_wedge() { return WedgeSet{true, std::nullopt, {}}; }

inline WedgeSet cone_wedge(Stratification strat, std::vector<int> cells) {
    if (cells.empty()) throw std::invalid_argument("a cone wedge needs at least one cell");
    ConeSet k = cone_set(strat, std::move(cells));  // validates openness
    WedgeSet w;
    w.full = false;
    w.cells = std::move(k.members);
    w.strat = std::move(strat);
    return w;
}

/// Does the spherical part cover the whole sphere?
inline bool wedge_covers_sphere(const WedgeSet& w) {
    return w.full || static_cast<int>(w.cells.size()) == w.strat->cell_count();
}

/// For each cell of chi, whether its closure meets only the inside of w.
/// (A chi-cell counts as inside only when every piece of it is.)
inline std::vector<char> wedge_mask(const Stratification& chi, const WedgeSet& w) {
    std::vector<char> in(chi.cell_count(), 1);
    if (wedge_covers_sphere(w)) return in;
    if (chi.normals() == w.strat->normals()) {
        for (int c = 0; c < chi.cell_count(); ++c)
            in[c] = std::binary_search(w.cells.begin(), w.cells.end(), c) ? 1 : 0;
        return in;
    }
    Stratification rho = common_refinement(chi, *w.strat);
    for (int c = 0; c < rho.cell_count(); ++c) {
        auto oc = containing_cell(rho, c, chi);
        auto wc = containing_cell(rho, c, *w.strat);
        assert(oc && wc);
        if (!std::binary_search(w.cells.begin(), w.cells.end(), *wc)) in[*oc] = 0;
    }
    return in;
}

inline bool cell_in_wedge(const Stratification& chi, int sigma, const WedgeSet& w) {
    return wedge_mask(chi, w)[sigma] != 0;
}

/// Containment of spherical parts.  The full kind additionally contains
/// the origin, so it is never contained in a cone kind here.
inline bool wedge_contains(const WedgeSet& big, const WedgeSet& small) {
    if (small.full) return big.full || wedge_covers_sphere(big);
    if (wedge_covers_sphere(big)) return true;
    std::vector<char> in = wedge_mask(*small.strat, big);
    for (int c : small.cells)
        if (!in[c]) return false;
    return true;
}

inline bool wedge_equal(const WedgeSet& a, const WedgeSet& b) {
    if (a.full != b.full) return false;
    if (a.full) return true;
    return wedge_contains(a, b) && wedge_contains(b, a);
}

/// A finite working family: stratifications closed under pairwise common
/// refinement up to a depth, a wedge list, and the index of the reference
/// stratification (the one refining all seeds) used for presentations.
struct Framework {
    std::vector<Stratification> strats;
    std::vector<WedgeSet> wedges;
    int chi_ref = 0;
};

inline Framework make_framework(std::vector<Stratification> seeds, int depth,
                                bool auto_star_wedges, std::vector<WedgeSet> extra_wedges = {}) {
    if (seeds.empty()) throw std::invalid_argument("a framework needs at least one stratification");
    for (const Stratification& s : seeds)
        if (s.m() != seeds.front().m()) throw std::invalid_argument("mixed ambient dimensions");

    Framework fw;
    fw.strats = std::move(seeds);
    for (int round = 0; round < depth; ++round) {
        std::size_t before = fw.strats.size();
        for (std::size_t i = 0; i < before; ++i) {
            for (std::size_t j = i + 1; j < before; ++j) {
                Stratification r = common_refinement(fw.strats[i], fw.strats[j]);
                bool known = false;
                for (const Stratification& s : fw.strats)
                    if (equal_stratification(s, r)) known = true;
                if (!known) fw.strats.push_back(std::move(r));
            }
        }
        if (fw.strats.size() == before) break;
    }

    // The reference stratification refines every seed; append it when the
    // closure did not already produce it.
    Stratification ref = fw.strats.front();
    for (std::size_t i = 1; i < fw.strats.size(); ++i) ref = common_refinement(ref, fw.strats[i]);
    fw.chi_ref = -1;
    for (std::size_t i = 0; i < fw.strats.size(); ++i)
        if (equal_stratification(fw.strats[i], ref)) fw.chi_ref = static_cast<int>(i);
    if (fw.chi_ref < 0) {
        fw.chi_ref = static_cast<int>(fw.strats.size());
        fw.strats.push_back(std::move(ref));
    }

    for (WedgeSet& w : extra_wedges) {
        bool known = false;
        for (const WedgeSet& v : fw.wedges)
            if (wedge_equal(v, w)) known = true;
        if (!known) fw.wedges.push_back(std::move(w));
    }
    if (auto_star_wedges) {
        for (const Stratification& s : fw.strats) {
            for (int c = 0; c < s.cell_count(); ++c) {
                WedgeSet w = cone_wedge(s, s.star_members(c));
                bool known = false;
                for (const WedgeSet& v : fw.wedges)
                    if (wedge_equal(v, w)) known = true;
                if (!known) fw.wedges.push_back(std::move(w));
            }
        }
    }
    return fw;
}

/// Section coordinates over one wedge: one block per connected component
/// of the spherical part (a single block for the full kind).
struct WedgeSections {
    std::vector<std::vector<int>> components;  // empty for the full kind
    std::vector<Region> regions;               // one per block when the model is twisted
    std::vector<std::size_t> block_offset;
    std::vector<std::size_t> block_dim;
    std::size_t dim = 0;
};

inline WedgeSections wedge_sections(const SheafModel& model, const WedgeSet& w) {
    WedgeSections ws;
    std::size_t blocks;
    if (w.full) {
        blocks = 1;
        if (model.twisted) ws.regions.push_back(Region{true, {}, {}});
    } else {
        ws.components = components_of(*w.strat, w.cells);
        blocks = ws.components.size();
        if (model.twisted) {
            for (const std::vector<int>& comp : ws.components) {
                auto reg = region_of(*w.strat, comp);
                if (!reg) throw std::logic_error("a wedge component is not an arc");
                ws.regions.push_back(*reg);
            }
        }
    }
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t d = model.twisted ? section_dim(model, ws.regions[b]) : model.r;
        ws.block_offset.push_back(ws.dim);
        ws.block_dim.push_back(d);
        ws.dim += d;
    }
    return ws;
}

/// Restriction of wedge sections to a contained wedge, blockwise: each
/// component of the small wedge sits inside exactly one component of the
/// big one.
inline RatMat wedge_restriction(const SheafModel& model, const WedgeSet& big,
                                const WedgeSections& big_ws, const WedgeSet& small,
                                const WedgeSections& small_ws) {
    RatMat t(small_ws.dim, big_ws.dim);
    std::size_t small_blocks = small.full ? 1 : small_ws.components.size();
    for (std::size_t sb = 0; sb < small_blocks; ++sb) {
        std::size_t bb = 0;
        if (!big.full && !small.full) {
            const RatVec& p = small.strat->cell(small_ws.components[sb].front()).interior;
            int host = big.strat->cell_containing(p);
            bool found = false;
            for (std::size_t k = 0; k < big_ws.components.size() && !found; ++k) {
                if (std::binary_search(big_ws.components[k].begin(), big_ws.components[k].end(),
                                       host)) {
                    bb = k;
                    found = true;
                }
            }
            if (!found) throw std::logic_error("restriction between non-nested wedges");
        } else if (!big.full && small.full) {
            throw std::logic_error("restriction between non-nested wedges");
        }
        RatMat block;
        if (model.twisted) {
            block = restriction_between(model, big_ws.regions[bb], small_ws.regions[sb]);
        } else {
            block = RatMat::identity(model.r);
        }
        for (std::size_t r = 0; r < block.rows(); ++r)
            for (std::size_t c = 0; c < block.cols(); ++c)
                t(small_ws.block_offset[sb] + r, big_ws.block_offset[bb] + c) = block(r, c);
    }
    return t;
}

/// The quotient of the direct sum of all wedge sections by the gluing
/// relations f oplus -f|_small over every nested pair.
struct Quotient {
    std::vector<WedgeSections> sections;
    std::vector<std::size_t> offsets;
    std::size_t total = 0;
    RatMat relations;
    Cokernel ck;

    std::size_t dim() const { return ck.dim; }
};

inline Quotient build_quotient(const SheafModel& model, const Framework& fw) {
    Quotient q;
    for (const WedgeSet& w : fw.wedges) {
        q.offsets.push_back(q.total);
        q.sections.push_back(wedge_sections(model, w));
        q.total += q.sections.back().dim;
    }

    std::vector<RatVec> cols;
    for (std::size_t i = 0; i < fw.wedges.size(); ++i) {
        for (std::size_t j = 0; j < fw.wedges.size(); ++j) {
            if (i == j) continue;
            if (!wedge_contains(fw.wedges[i], fw.wedges[j])) continue;
            RatMat t = wedge_restriction(model, fw.wedges[i], q.sections[i], fw.wedges[j],
                                         q.sections[j]);
            for (std::size_t k = 0; k < q.sections[i].dim; ++k) {
                RatVec col(q.total, Rat(0));
                col[q.offsets[i] + k] = 1;
                for (std::size_t r = 0; r < q.sections[j].dim; ++r)
                    col[q.offsets[j] + r] -= t(r, k);
                cols.push_back(std::move(col));
            }
        }
    }
    q.relations = RatMat(q.total, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (std::size_t r = 0; r < q.total; ++r) q.relations(r, c) = cols[c][r];
    q.ck = cokernel_basis(q.relations);
    return q;
}

/// Quotient coordinates of a single-summand element.
inline RatVec class_of(const Quotient& q, std::size_t wedge_index, const RatVec& f) {
    if (wedge_index >= q.sections.size()) throw std::invalid_argument("unknown wedge");
    if (f.size() != q.sections[wedge_index].dim)
        throw std::invalid_argument("section size mismatch");
    RatVec amb(q.total, Rat(0));
    for (std::size_t k = 0; k < f.size(); ++k) amb[q.offsets[wedge_index] + k] = f[k];
    return q.ck.proj * amb;
}

/// A star witness for a wedge: a stratification of the family and a top
/// cell whose star (the cell itself) lies inside the wedge.  Returns the
/// first hit in family order, or nothing.
inline std::optional<std::pair<int, int>> check_W2(const Framework& fw, const WedgeSet& w) {
    for (std::size_t si = 0; si < fw.strats.size(); ++si) {
        const Stratification& s = fw.strats[si];
        std::vector<char> in = wedge_mask(s, w);
        for (int c : s.cells_of_dim(s.top_dim())) {
            if (s.cell(c).tag != 0) continue;
            if (in[c]) return std::make_pair(static_cast<int>(si), c);
        }
    }
    return std::nullopt;
}

/// A connecting chain of top cells between two witnesses inside a wedge.
struct ConeChain {
    Stratification chi;
    std::vector<int> cells;
};

/// Cone connectivity: in the common refinement of the two witness
/// stratifications, walk between the witnesses through top cells inside
/// the wedge, stepping only across pairs whose meet exists and whose
/// whole star stays inside the wedge.
inline std::optional<ConeChain> check_W3(const Framework& fw, const WedgeSet& w,
                                         std::pair<int, int> s1, std::pair<int, int> s2) {
    const Stratification& chi1 = fw.strats.at(s1.first);
    const Stratification& chi2 = fw.strats.at(s2.first);
    if (!cell_in_wedge(chi1, s1.second, w) || !cell_in_wedge(chi2, s2.second, w))
        throw std::invalid_argument("witness star is not inside the wedge");

    Stratification chi = common_refinement(chi1, chi2);
    std::vector<char> in = wedge_mask(chi, w);
    std::vector<int> tops;
    for (int c : chi.cells_of_dim(chi.top_dim()))
        if (chi.cell(c).tag == 0 && in[c]) tops.push_back(c);

    auto under = [&](int c, const Stratification& coarse, int target) {
        auto oc = containing_cell(chi, c, coarse);
        return oc && *oc == target;
    };

    std::map<int, int> parent;  // cell -> predecessor, -1 for roots
    std::deque<int> queue;
    for (int c : tops)
        if (under(c, chi1, s1.second)) {
            parent[c] = -1;
            queue.push_back(c);
        }
    while (!queue.empty()) {
        int c = queue.front();
        queue.pop_front();
        if (under(c, chi2, s2.second)) {
            std::vector<int> path;
            for (int at = c; at != -1; at = parent[at]) path.push_back(at);
            std::reverse(path.begin(), path.end());
            return ConeChain{std::move(chi), std::move(path)};
        }
        for (int d : tops) {
            if (parent.count(d)) continue;
            auto mt = chi.meet(c, d);
            if (!mt) continue;
            bool star_inside;
            if (*mt < 0) {
                // Closures touching only at the origin: the star of the
                // origin is the whole space, inside the full kind only.
                star_inside = w.full;
            } else {
                star_inside = true;
                for (int s : chi.star_members(*mt))
                    if (!in[s]) star_inside = false;
            }
            if (!star_inside) continue;
            parent[d] = c;
            queue.push_back(d);
        }
    }
    return std::nullopt;
}

}  // namespace strata

#endif
