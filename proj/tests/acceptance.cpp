/**
 * Acceptance gate for the library: nine exact properties, one
 * [PASS]/[FAIL] line each, nonzero exit when any line fails.
 *
 * Every check is exact rational arithmetic; there are no tolerances.
 * The arrangement matrix is the three coordinate arrangements plus
 * twenty pseudo-random rational arrangements from a fixed seed.
 */
#include <chrono>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "strata/arrangement.hpp"
#include "strata/boundary.hpp"
#include "strata/complex.hpp"
#include "strata/orientation.hpp"
#include "strata/refinement.hpp"
#include "strata/sheaf.hpp"
#include "strata/wedge.hpp"

using namespace strata;

namespace {

Rat q(long n, long d = 1) {
    Rat x(n, d);
    x.canonicalize();
    return x;
}

Stratification line_m1() { return Stratification(1, {{q(1)}}); }
Stratification quadrant() { return Stratification(2, {{q(1), q(0)}, {q(0), q(1)}}); }
Stratification octant() {
    return Stratification(3, {{q(1), q(0), q(0)}, {q(0), q(1), q(0)}, {q(0), q(0), q(1)}});
}
Stratification quadrant_diag() {
    return Stratification(2, {{q(1), q(0)}, {q(0), q(1)}, {q(1), q(1)}});
}
Stratification quadrant_x() {
    return Stratification(
        2, {{q(1), q(0)}, {q(0), q(1)}, {q(1), q(1)}, {q(1), q(-1)}});
}

/// Reduce an integer vector to the primitive representative with its
/// first nonzero entry positive, so scaled duplicates collapse.
std::vector<long> canonical_normal(std::vector<long> v) {
    long g = 0;
    for (long x : v) g = std::gcd(g, std::abs(x));
    if (g == 0) return {};
    int lead = 0;
    for (long& x : v) {
        x /= g;
        if (lead == 0 && x != 0) lead = x > 0 ? 1 : -1;
    }
    if (lead < 0)
        for (long& x : v) x = -x;
    return v;
}

/// Twenty essential pseudo-random arrangements, at most five
/// hyperplanes each, dimensions one through three, fixed seed.
std::vector<Stratification> random_arrangements() {
    std::mt19937 rng(414213562u);
    std::uniform_int_distribution<int> dim_of(1, 3);
    std::uniform_int_distribution<int> count_of(1, 5);
    std::uniform_int_distribution<long> entry(-3, 3);
    std::vector<Stratification> out;
    while (out.size() < 20) {
        int m = dim_of(rng);
        int n = count_of(rng);
        std::set<std::vector<long>> seen;
        for (int k = 0; k < n; ++k) {
            std::vector<long> v(m);
            for (long& x : v) x = entry(rng);
            v = canonical_normal(std::move(v));
            if (!v.empty()) seen.insert(std::move(v));
        }
        if (seen.empty()) continue;
        std::vector<RatVec> normals;
        RatMat stack(seen.size(), m);
        std::size_t r = 0;
        for (const std::vector<long>& v : seen) {
            RatVec row;
            for (int c = 0; c < m; ++c) {
                row.push_back(q(v[c]));
                stack(r, c) = row.back();
            }
            ++r;
            normals.push_back(std::move(row));
        }
        if (rank(stack) != static_cast<std::size_t>(m)) continue;  // must be essential
        out.push_back(Stratification(m, std::move(normals)));
    }
    return out;
}

std::vector<Stratification> test_matrix() {
    std::vector<Stratification> out{line_m1(), quadrant(), octant()};
    for (Stratification& s : random_arrangements()) out.push_back(std::move(s));
    return out;
}

bool complexes_square_to_zero(const std::vector<Stratification>& mat) {
    for (const Stratification& s : mat) {
        if (!verify_complex(build_complex(s, StalkContext::at_m(true))).empty()) return false;
        if (!verify_complex(build_complex(s, StalkContext::at_m(false))).empty()) return false;
        for (int c = 0; c < s.cell_count(); ++c)
            if (!verify_complex(build_complex(s, StalkContext::at_cell(c))).empty()) return false;
    }
    return true;
}

bool complexes_exact(const std::vector<Stratification>& mat) {
    for (const Stratification& s : mat) {
        for (std::size_t h : cohomology_dims(build_complex(s, StalkContext::at_m(true))))
            if (h != 0) return false;
        for (int c = 0; c < s.cell_count(); ++c)
            for (std::size_t h : cohomology_dims(build_complex(s, StalkContext::at_cell(c))))
                if (h != 0) return false;
        std::vector<std::size_t> h = cohomology_dims(build_complex(s, StalkContext::at_m(false)));
        for (std::size_t k = 0; k < h.size(); ++k)
            if (h[k] != (k + 1 == h.size() ? 1u : 0u)) return false;
    }
    return true;
}

bool stars_are_halfspace_stars(const std::vector<Stratification>& mat) {
    for (const Stratification& s : mat) {
        for (int c = 0; c < s.cell_count(); ++c) {
            auto form = s.star_halfspace_form(c);
            if (!form) return false;
            std::vector<int> members = s.star_members(c);
            for (int t = 0; t < s.cell_count(); ++t) {
                bool inside = true;
                for (auto [i, sign] : *form)
                    if (sgn(dot(s.normals()[i], s.cell(t).interior)) != sign) inside = false;
                bool member = std::find(members.begin(), members.end(), t) != members.end();
                if (inside != member) return false;
            }
        }
    }
    return true;
}

bool coboundary_transposes_boundary(const std::vector<Stratification>& mat) {
    for (const Stratification& s : mat) {
        GradedComplex gc = build_complex(s, StalkContext::at_m(true));
        if (!duality_holds(gc, build_boundaries(s, gc))) return false;
    }
    return true;
}

bool orientation_identities(const std::vector<Stratification>& mat) {
    for (const Stratification& s : mat) {
        // Walls: the two sides of a codimension-one cell cancel against
        // the ambient orientation twist.
        for (int sigma = 0; sigma < s.cell_count(); ++sigma) {
            if (s.cell(sigma).dim != s.top_dim() - 1 || s.top_dim() == 0) continue;
            std::vector<int> tops;
            for (int t : s.star_members(sigma))
                if (s.cell(t).dim == s.top_dim()) tops.push_back(t);
            if (tops.size() != 2) return false;
            if (incidence_coface(s, sigma, tops[0]) * a_one(s, tops[0]) !=
                -incidence_coface(s, sigma, tops[1]) * a_one(s, tops[1]))
                return false;
        }
        // Diamonds: the two middle cells between a face and a coface two
        // dimensions up contribute cancelling incidence products.
        for (int sigma = 0; sigma < s.cell_count(); ++sigma) {
            for (int tau = 0; tau < s.cell_count(); ++tau) {
                if (s.cell(tau).dim != s.cell(sigma).dim + 2 || !s.face(sigma, tau)) continue;
                std::vector<int> mids;
                for (int d = 0; d < s.cell_count(); ++d)
                    if (s.cell(d).dim == s.cell(sigma).dim + 1 && s.face(sigma, d) &&
                        s.face(d, tau))
                        mids.push_back(d);
                if (mids.size() != 2) return false;
                if (incidence_coface(s, sigma, mids[0]) * incidence_coface(s, mids[0], tau) +
                        incidence_coface(s, sigma, mids[1]) * incidence_coface(s, mids[1], tau) !=
                    0)
                    return false;
            }
        }
    }
    return true;
}

bool refinement_ladders() {
    std::vector<std::pair<Stratification, Stratification>> pairs;
    pairs.emplace_back(quadrant(), quadrant_diag());
    pairs.emplace_back(quadrant(), quadrant_x());
    pairs.emplace_back(Stratification(2, {{q(1), q(1)}, {q(1), q(-1)}}),
                       Stratification(2, {{q(1), q(1)}, {q(1), q(-1)}, {q(1), q(0)}}));
    pairs.emplace_back(octant(),
                       Stratification(3, {{q(1), q(0), q(0)},
                                          {q(0), q(1), q(0)},
                                          {q(0), q(0), q(1)},
                                          {q(1), q(1), q(0)}}));
    pairs.emplace_back(octant(),
                       Stratification(3, {{q(1), q(0), q(0)},
                                          {q(0), q(1), q(0)},
                                          {q(0), q(0), q(1)},
                                          {q(1), q(1), q(1)},
                                          {q(1), q(-1), q(0)}}));
    for (const auto& [coarse, fine] : pairs) {
        if (!is_refinement(coarse, fine)) return false;
        ThetaLadder lad = build_theta(coarse, fine);
        if (lad.theta.size() != static_cast<std::size_t>(coarse.m()) + 1) return false;
        if (!ladder_commutes(lad)) return false;
        for (int sigma = 0; sigma < coarse.cell_count(); ++sigma)
            for (int tau = 0; tau < fine.cell_count(); ++tau)
                if (!difference_acyclic(fine, tau, coarse, sigma)) return false;
    }
    return true;
}

/// Rank oracle for the constant sheaf: r copies of the top cohomology of
/// the plain cochain complex, computed before any presentation exists.
std::size_t constant_oracle(const Stratification& s, std::size_t r) {
    std::vector<std::size_t> h = cohomology_dims(build_complex(s, StalkContext::at_m(false)));
    return r * h.back();
}

/// Rank oracle for a local system on the circle: the coinvariants of the
/// monodromy, dim coker(A - I).
std::size_t twisted_oracle(const RatMat& a) {
    RatMat d = a;
    for (std::size_t i = 0; i < a.rows(); ++i) d(i, i) -= 1;
    return a.rows() - rank(d);
}

bool theorem_config(const SheafModel& model, const Framework& fw, std::size_t oracle) {
    TheoremReport rep = verify_main_theorem(model, fw);
    return rep.ok() && rep.coker_dim == oracle && rep.quotient_dim == oracle;
}

bool main_theorem_with_oracles() {
    Framework interval = make_framework({line_m1()}, 0, true, {full_wedge()});
    for (std::size_t r : {1u, 2u}) {
        std::size_t oracle = constant_oracle(line_m1(), r);
        if (oracle != r) return false;
        if (!theorem_config(constant_sheaf(r), interval, oracle)) return false;
    }

    Framework orthants = make_framework({quadrant()}, 1, true, {full_wedge()});
    std::size_t oracle_b = constant_oracle(quadrant(), 1);
    if (oracle_b != 1) return false;
    if (!theorem_config(constant_sheaf(1), orthants, oracle_b)) return false;

    RatMat two(1, 1);
    two(0, 0) = q(2);
    std::size_t oracle_c = twisted_oracle(two);
    if (oracle_c != 0) return false;
    if (!theorem_config(local_system(two), orthants, oracle_c)) return false;
    return true;
}

bool witness_independence(const Framework& fw, const SheafModel& model) {
    Presentation pres = assemble_presentation(fw.strats[fw.chi_ref], model);
    bool saw_multi = false;
    for (const WedgeSet& w : fw.wedges) {
        std::vector<std::pair<int, int>> wits = all_witnesses(fw, w);
        if (wits.empty()) return false;
        if (wits.size() >= 2) saw_multi = true;
        WedgeSections ws = wedge_sections(model, w);
        for (std::size_t k = 0; k < ws.dim; ++k) {
            RatVec f(ws.dim, q(0));
            f[k] = q(1);
            RatVec ref = boundary_value(fw, model, pres, w, f, wits[0]);
            for (std::size_t j = 1; j < wits.size(); ++j)
                if (boundary_value(fw, model, pres, w, f, wits[j]) != ref) return false;
        }
    }
    return saw_multi;
}

bool transport_and_psi_independence(const Stratification& coarse, const Stratification& fine,
                                    const SheafModel& model) {
    Framework fw = make_framework({coarse, fine}, 0, true, {full_wedge()});
    if (fw.strats.size() != 2 || fw.chi_ref != 1) return false;
    Presentation pc = assemble_presentation(fw.strats[0], model);
    Presentation pf = assemble_presentation(fw.strats[1], model);
    Quotient qt = build_quotient(model, fw);

    ThetaLadder lad = build_theta(coarse, fine, {PsiRule::LexSmallest, -1});
    RatMat a0 = induced_A0(model, coarse, pc, fine, pf, lad);
    RatMat rho_c = rho_matrix(fw, model, qt, 0, pc);
    RatMat rho_f = rho_matrix(fw, model, qt, 1, pf);
    if (rho_f * a0 != rho_c) return false;

    // A second particular solution of the chain-map equations must act
    // identically on cokernels.
    ThetaLadder other = build_theta(coarse, fine, {PsiRule::LexLargest, -1});
    if (!ladder_commutes(other)) return false;
    return induced_A0(model, coarse, pc, fine, pf, other) == a0;
}

bool independence_suite() {
    Framework two_seed = make_framework({quadrant(), quadrant_diag()}, 0, true, {full_wedge()});
    RatMat swap(2, 2);
    swap(0, 1) = q(1);
    swap(1, 0) = q(1);
    if (!witness_independence(two_seed, constant_sheaf(1))) return false;
    if (!witness_independence(two_seed, local_system(swap))) return false;

    for (const SheafModel& model : {constant_sheaf(1), local_system(swap)}) {
        if (!transport_and_psi_independence(quadrant(), quadrant_diag(), model)) return false;
        if (!transport_and_psi_independence(quadrant(), quadrant_x(), model)) return false;
        if (!transport_and_psi_independence(quadrant_diag(), quadrant_x(), model)) return false;
    }
    return true;
}

bool negative_controls() {
    // A single damaged incidence entry must surface as a located nonzero
    // product entry, at the damaged coordinates.
    Stratification s = quadrant();
    GradedComplex gc = build_complex(s, StalkContext::at_m(true));
    gc.d[1](0, 0) += 1;
    std::vector<ComplexFailure> bad = verify_complex(gc);
    if (bad.empty()) return false;
    if (bad[0].matrix_index != 0 || bad[0].row != 0 || bad[0].col != 0) return false;
    if (bad[0].value != q(1) && bad[0].value != q(-1)) return false;

    // Stars across unrelated stratifications may differ in a disconnected
    // set; the acyclicity check must say so.
    Stratification chi(2, {{q(1), q(0)}});
    Stratification other(2, {{q(0), q(1)}});
    int sigma = chi.index_of({1}, 0);
    int tau = other.index_of({0}, +1);
    if (star_difference(other, tau, chi, sigma).size() != 2) return false;
    if (difference_acyclic(other, tau, chi, sigma)) return false;

    // Two antipodal arcs form a wedge with a witness but no connecting
    // chain of top cells.
    Stratification quad = quadrant();
    int ne = quad.index_of({1, 1}, 0);
    int sw = quad.index_of({-1, -1}, 0);
    Framework fw = make_framework({quad}, 0, false, {});
    WedgeSet split = cone_wedge(quad, {ne, sw});
    if (!check_W2(fw, split)) return false;
    if (check_W3(fw, split, {0, ne}, {0, sw})) return false;
    return true;
}

int line_no = 0;

bool report(const char* label, bool pass, double seconds = -1.0) {
    ++line_no;
    if (seconds >= 0)
        std::printf("[%s] %d. %s (%.2fs)\n", pass ? "PASS" : "FAIL", line_no, label, seconds);
    else
        std::printf("[%s] %d. %s\n", pass ? "PASS" : "FAIL", line_no, label);
    return pass;
}

}  // namespace

int main() {
    std::vector<Stratification> mat = test_matrix();
    bool all = true;

    auto t0 = std::chrono::steady_clock::now();
    bool squares = complexes_square_to_zero(mat);
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all &= report("coboundary squares to zero in every stalk context, 23 arrangements",
                  squares && dt < 10.0, dt);

    all &= report("augmented complexes are acyclic and the plain top cohomology is a line",
                  complexes_exact(mat));
    all &= report("combinatorial stars equal half-space stars, both inclusions",
                  stars_are_halfspace_stars(mat));
    all &= report("coboundary matrices are transposed oriented boundaries",
                  coboundary_transposes_boundary(mat));
    all &= report("wall and diamond incidence identities hold exhaustively",
                  orientation_identities(mat));
    all &= report("chain ladders commute and star differences are acyclic on 5 refinement pairs",
                  refinement_ladders());
    all &= report("boundary and inverse are mutually inverse, dimensions match rank oracles",
                  main_theorem_with_oracles());
    all &= report("values are independent of witness, transport path, and chain-map choice",
                  independence_suite());
    all &= report("negative controls fail in the expected, located way", negative_controls());

    return all ? 0 : 1;
}
