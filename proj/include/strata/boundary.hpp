/**
 * The boundary-value map from wedge sections to the presentation
 * cokernel, its inverse built from star wedges, the map induced on
 * cokernels by a refinement chain ladder, and the report that checks the
 * two maps are mutually inverse over a working family.
 */
#ifndef STRATA_BOUNDARY_HPP
#define STRATA_BOUNDARY_HPP

#include "strata/refinement.hpp"
#include "strata/wedge.hpp"

namespace strata {

struct NoWitness : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Every (stratification index, top cell) pair of the family whose cell
/// lies inside the wedge, in family order.
inline std::vector<std::pair<int, int>> all_witnesses(const Framework& fw, const WedgeSet& w) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t si = 0; si < fw.strats.size(); ++si) {
        const Stratification& s = fw.strats[si];
        std::vector<char> in = wedge_mask(s, w);
        for (int c : s.cells_of_dim(s.top_dim()))
            if (s.cell(c).tag == 0 && in[c]) out.emplace_back(static_cast<int>(si), c);
    }
    return out;
}

/// Restriction of a section on one top-cell star to a top-cell star of a
/// finer stratification (identity for untwisted models).
inline RatMat star_restriction(const SheafModel& model, const Stratification& coarse, int sigma,
                               const Stratification& fine, int tau) {
    if (!model.twisted) return RatMat::identity(model.r);
    return restriction_between(model, star_region(coarse, sigma), star_region(fine, tau));
}

/// Boundary value through an explicit witness: the section on the witness
/// star is carried to a top cell of the reference stratification, twisted
/// by the orientation sign, and read off in cokernel coordinates.
inline RatVec boundary_from_witness(const Framework& fw, const SheafModel& model,
                                    const Presentation& pres, std::pair<int, int> witness,
                                    const RatVec& f) {
    const Stratification& chi = fw.strats.at(witness.first);
    const Stratification& ref = fw.strats.at(fw.chi_ref);
    if (chi.cell(witness.second).dim != chi.top_dim() || chi.cell(witness.second).tag != 0)
        throw std::invalid_argument("witness must be a top cell");
    if (f.size() != model.r) throw std::invalid_argument("section size mismatch");

    int sigma_ref = -1;
    for (int c : pres.target_cells)
        if (containing_cell(ref, c, chi) == witness.second) {
            sigma_ref = c;
            break;
        }
    if (sigma_ref < 0) throw std::logic_error("reference stratification does not refine the witness");

    RatVec g = star_restriction(model, chi, witness.second, ref, sigma_ref) * f;
    int sign = a_one(ref, sigma_ref);
    RatVec v(pres.target_dim(), Rat(0));
    std::size_t ti = 0;
    while (pres.target_cells[ti] != sigma_ref) ++ti;
    for (std::size_t k = 0; k < g.size(); ++k) v[pres.target_offsets[ti] + k] = sign * g[k];
    return pres.ck.proj * v;
}

/// Boundary value of a section given in the wedge's own coordinates.  The
/// witness is searched in family order unless one is supplied.
inline RatVec boundary_value(const Framework& fw, const SheafModel& model,
                             const Presentation& pres, const WedgeSet& w, const RatVec& f,
                             std::optional<std::pair<int, int>> witness = std::nullopt) {
    WedgeSections ws = wedge_sections(model, w);
    if (f.size() != ws.dim) throw std::invalid_argument("section size mismatch");
    if (!witness) witness = check_W2(fw, w);
    if (!witness) throw NoWitness("no stratification of the family has a star inside the wedge");
    const Stratification& chi = fw.strats.at(witness->first);
    int sigma = witness->second;

    RatVec on_sigma;
    if (w.full) {
        if (model.twisted) {
            on_sigma = restriction_between(model, Region{true, {}, {}}, star_region(chi, sigma)) * f;
        } else {
            on_sigma = f;
        }
    } else {
        const RatVec& p = chi.cell(sigma).interior;
        int host = w.strat->cell_containing(p);
        std::size_t blk = ws.components.size();
        for (std::size_t b = 0; b < ws.components.size(); ++b)
            if (std::binary_search(ws.components[b].begin(), ws.components[b].end(), host)) blk = b;
        if (blk == ws.components.size()) throw std::logic_error("witness outside the wedge");
        RatVec part(f.begin() + ws.block_offset[blk],
                    f.begin() + ws.block_offset[blk] + ws.block_dim[blk]);
        if (model.twisted) {
            on_sigma = restriction_between(model, ws.regions[blk], star_region(chi, sigma)) * part;
        } else {
            on_sigma = part;
        }
    }
    return boundary_from_witness(fw, model, pres, *witness, on_sigma);
}

namespace detail {

/// Index of the wedge equal to the star of the given cell, which the
/// family must contain for the inverse map to have somewhere to land.
inline std::size_t star_wedge_index(const Framework& fw, const Stratification& chi, int sigma) {
    WedgeSet star = cone_wedge(chi, chi.star_members(sigma));
    for (std::size_t i = 0; i < fw.wedges.size(); ++i)
        if (wedge_equal(fw.wedges[i], star)) return i;
    throw std::logic_error("the family is missing a star wedge of the stratification");
}

}  // namespace detail

/// The raw carrier of the inverse map: sections over top-cell blocks are
/// dropped, with the orientation sign, onto the matching star wedges.
/// Columns index the presentation target, rows the wedge direct sum.
inline RatMat rho_embedding(const Framework& fw, const SheafModel& model, const Quotient& q,
                            int strat_index, const Presentation& pres) {
    const Stratification& chi = fw.strats.at(strat_index);
    RatMat e(q.total, pres.target_dim());
    for (std::size_t ti = 0; ti < pres.target_cells.size(); ++ti) {
        std::size_t wi = detail::star_wedge_index(fw, chi, pres.target_cells[ti]);
        int sign = a_one(chi, pres.target_cells[ti]);
        for (std::size_t k = 0; k < model.r; ++k)
            e(q.offsets[wi] + k, pres.target_offsets[ti] + k) = sign;
    }
    return e;
}

/// Inverse map on coordinates: cokernel classes to quotient classes.
inline RatMat rho_matrix(const Framework& fw, const SheafModel& model, const Quotient& q,
                         int strat_index, const Presentation& pres) {
    return q.ck.proj * rho_embedding(fw, model, q, strat_index, pres) * pres.ck.sect;
}

/// Boundary values of every basis section of every wedge, lifted back to
/// the presentation target.  Columns index the wedge direct sum.
inline RatMat boundary_carrier(const Framework& fw, const SheafModel& model,
                               const Presentation& pres, const Quotient& q) {
    RatMat g(pres.target_dim(), q.total);
    for (std::size_t wi = 0; wi < fw.wedges.size(); ++wi) {
        auto wit = check_W2(fw, fw.wedges[wi]);
        if (!wit) throw NoWitness("wedge without a star witness");
        for (std::size_t k = 0; k < q.sections[wi].dim; ++k) {
            RatVec f(q.sections[wi].dim, Rat(0));
            f[k] = 1;
            RatVec c = boundary_value(fw, model, pres, fw.wedges[wi], f, wit);
            RatVec lift = pres.ck.sect * c;
            for (std::size_t r = 0; r < lift.size(); ++r) g(r, q.offsets[wi] + k) = lift[r];
        }
    }
    return g;
}

/// Boundary map on coordinates: quotient classes to cokernel classes.
inline RatMat boundary_matrix(const Framework& fw, const SheafModel& model,
                              const Presentation& pres, const Quotient& q) {
    return pres.ck.proj * boundary_carrier(fw, model, pres, q) * q.ck.sect;
}

/// The map induced on presentation cokernels by a refinement chain
/// ladder: restriction-weighted placement blocks, checked to descend.
inline RatMat induced_A0(const SheafModel& model, const Stratification& coarse,
                         const Presentation& pres_coarse, const Stratification& fine,
                         const Presentation& pres_fine, const ThetaLadder& lad) {
    std::size_t m = lad.theta.size() - 1;
    const RatMat& top = lad.theta[m];
    const auto& coarse_top = lad.coarse_gc.bases[m - 1];
    const auto& fine_top = lad.fine_gc.bases[m - 1];

    RatMat block(pres_fine.target_dim(), pres_coarse.target_dim());
    for (std::size_t ci = 0; ci < pres_coarse.target_cells.size(); ++ci) {
        std::size_t cpos = 0;
        while (coarse_top[cpos] != pres_coarse.target_cells[ci]) ++cpos;
        for (std::size_t fi = 0; fi < pres_fine.target_cells.size(); ++fi) {
            std::size_t fpos = 0;
            while (fine_top[fpos] != pres_fine.target_cells[fi]) ++fpos;
            if (top(fpos, cpos) == 0) continue;
            RatMat res = star_restriction(model, coarse, pres_coarse.target_cells[ci], fine,
                                          pres_fine.target_cells[fi]);
            for (std::size_t r = 0; r < model.r; ++r)
                for (std::size_t c = 0; c < model.r; ++c)
                    block(pres_fine.target_offsets[fi] + r, pres_coarse.target_offsets[ci] + c) =
                        top(fpos, cpos) * res(r, c);
        }
    }

    // Descent: the block map must carry relations into relations.
    RatMat pushed = block * pres_coarse.p;
    RatMat joint(pres_fine.p.rows(), pres_fine.p.cols() + pushed.cols());
    for (std::size_t r = 0; r < joint.rows(); ++r) {
        for (std::size_t c = 0; c < pres_fine.p.cols(); ++c) joint(r, c) = pres_fine.p(r, c);
        for (std::size_t c = 0; c < pushed.cols(); ++c)
            joint(r, pres_fine.p.cols() + c) = pushed(r, c);
    }
    if (rank(joint) != rank(pres_fine.p))
        throw std::logic_error("refinement map does not descend to cokernels");

    return pres_fine.ck.proj * block * pres_coarse.ck.sect;
}

/// Everything the equivalence theorem asserts about one model over one
/// working family, checked exactly.
struct TheoremReport {
    std::size_t coker_dim = 0;
    std::size_t quotient_dim = 0;
    std::vector<std::optional<std::pair<int, int>>> witnesses;
    bool witnesses_ok = false;
    bool chains_ok = false;
    bool dims_match = false;
    bool rho_kills_relations = false;
    bool boundary_kills_relations = false;
    bool boundary_after_rho_id = false;
    bool rho_after_boundary_id = false;
    RatMat boundary, rho;

    bool ok() const {
        return witnesses_ok && chains_ok && dims_match && rho_kills_relations &&
               boundary_kills_relations && boundary_after_rho_id && rho_after_boundary_id;
    }
};

inline TheoremReport verify_main_theorem(const SheafModel& model, const Framework& fw) {
    TheoremReport rep;
    Presentation pres = assemble_presentation(fw.strats.at(fw.chi_ref), model);
    Quotient q = build_quotient(model, fw);
    rep.coker_dim = pres.coker_dim();
    rep.quotient_dim = q.dim();
    rep.dims_match = rep.coker_dim == rep.quotient_dim;

    rep.witnesses_ok = true;
    rep.chains_ok = true;
    for (const WedgeSet& w : fw.wedges) {
        rep.witnesses.push_back(check_W2(fw, w));
        if (!rep.witnesses.back()) {
            rep.witnesses_ok = false;
            continue;
        }
        // Cone connectivity between the first witness and every other.
        std::vector<std::pair<int, int>> wits = all_witnesses(fw, w);
        for (std::size_t k = 1; k < wits.size(); ++k)
            if (!check_W3(fw, w, wits[0], wits[k])) rep.chains_ok = false;
    }
    if (!rep.witnesses_ok) return rep;

    RatMat e = rho_embedding(fw, model, q, fw.chi_ref, pres);
    rep.rho_kills_relations = (q.ck.proj * (e * pres.p)).is_zero();
    rep.rho = q.ck.proj * e * pres.ck.sect;

    // The boundary of each gluing relation vanishes: restricting before
    // taking the boundary value changes nothing.
    RatMat g = boundary_carrier(fw, model, pres, q);
    rep.boundary = pres.ck.proj * g * q.ck.sect;
    rep.boundary_kills_relations = (pres.ck.proj * (g * q.relations)).is_zero();

    rep.boundary_after_rho_id = rep.boundary * rep.rho == RatMat::identity(rep.coker_dim);
    rep.rho_after_boundary_id = rep.rho * rep.boundary == RatMat::identity(rep.quotient_dim);
    return rep;
}

}  // namespace strata

#endif
