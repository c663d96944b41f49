/**
 * strata: batch driver over the stratification library.
 *
 *   strata enumerate -i arr.json [-o report.json] [--plot]
 *   strata verify    -i arr.json [-s sheaf.json] [-f framework.json]
 *                    [-d DEPTH] [--corrupt-incidence I,J]
 *   strata boundary  -f framework.json -s sheaf.json -w wedge.json
 *                    [-d DEPTH] [-o report.json]
 *
 * Exit codes: 0 all checks pass, 1 a verified property fails, 2 bad input.
 * Reports are deterministic JSON on stdout unless -o is given.
 */
#include <iostream>

#include <CLI11.hpp>

#include "strata/json_io.hpp"

using namespace strata;

namespace {

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << report.dump(2) << "\n";
    }
}

int cmd_enumerate(const std::string& in, const std::string& out, bool plot) {
    Stratification s = load_arrangement(load_json_file(in));
    emit(enumerate_report(s, plot), out);
    return 0;
}

Json check_entry(const std::string& name, bool pass) {
    Json j;
    j["name"] = name;
    j["pass"] = pass;
    return j;
}

/// The half-space description of each star must carve out exactly the
/// star members, both inclusions checked cell by cell.
bool stars_match_halfspace_forms(const Stratification& s) {
    for (int c = 0; c < s.cell_count(); ++c) {
        auto form = s.star_halfspace_form(c);
        if (!form) {
            if (s.cell(c).tag == 0) return false;
            continue;
        }
        std::vector<int> members = s.star_members(c);
        for (int t = 0; t < s.cell_count(); ++t) {
            bool inside = true;
            for (auto [i, sign] : *form)
                if (sgn(dot(s.normals()[i], s.cell(t).interior)) != sign) inside = false;
            bool member = std::find(members.begin(), members.end(), t) != members.end();
            if (inside != member) return false;
        }
    }
    return true;
}

int cmd_verify(const std::string& in, const std::string& sheaf_path, const std::string& fw_path,
               int depth, const std::string& corrupt, const std::string& out) {
    Stratification s = load_arrangement(load_json_file(in));
    std::optional<SheafModel> model;
    if (!sheaf_path.empty()) model = load_sheaf(load_json_file(sheaf_path));
    std::optional<Framework> fw;
    if (!fw_path.empty())
        fw = load_framework(load_json_file(fw_path),
                            depth >= 0 ? std::optional<int>(depth) : std::nullopt);

    std::pair<std::size_t, std::size_t> corrupt_at{0, 0};
    bool do_corrupt = false;
    if (!corrupt.empty()) {
        std::size_t comma = corrupt.find(',');
        if (comma == std::string::npos) throw std::runtime_error("--corrupt-incidence wants I,J");
        corrupt_at.first = std::stoul(corrupt.substr(0, comma));
        corrupt_at.second = std::stoul(corrupt.substr(comma + 1));
        do_corrupt = true;
    }

    Json report;
    Json checks = Json::array();
    report["arrangement"] = arrangement_json(s);

    checks.push_back(check_entry("stars_match_halfspace_forms", stars_match_halfspace_forms(s)));

    if (s.essential()) {
        GradedComplex gc = build_complex(s, StalkContext::at_m(true));
        if (do_corrupt) {
            RatMat& d = gc.d.at(std::min<std::size_t>(1, gc.d.size() - 1));
            if (corrupt_at.first >= d.rows() || corrupt_at.second >= d.cols())
                throw std::runtime_error("--corrupt-incidence entry out of range");
            d(corrupt_at.first, corrupt_at.second) += 1;
        }

        std::vector<ComplexFailure> bad = verify_complex(gc);
        Json sq = check_entry("complex_squares_to_zero", bad.empty());
        if (!bad.empty()) {
            sq["first_failure"] = {{"matrix", bad[0].matrix_index},
                                   {"row", bad[0].row},
                                   {"col", bad[0].col},
                                   {"value", rat_to_string(bad[0].value)}};
        }
        checks.push_back(std::move(sq));

        bool cell_ok = true;
        for (int c = 0; c < s.cell_count() && cell_ok; ++c) {
            GradedComplex at_cell = build_complex(s, StalkContext::at_cell(c));
            if (!verify_complex(at_cell).empty()) cell_ok = false;
            for (std::size_t h : cohomology_dims(at_cell))
                if (h != 0) cell_ok = false;
        }
        checks.push_back(check_entry("stalk_complexes_acyclic", cell_ok));

        bool exact = true;
        for (std::size_t h : cohomology_dims(gc))
            if (h != 0) exact = false;
        checks.push_back(check_entry("augmented_complex_acyclic", exact && bad.empty()));

        GradedComplex plain = build_complex(s, StalkContext::at_m(false));
        std::vector<std::size_t> h = cohomology_dims(plain);
        bool top_only = true;
        for (std::size_t k = 0; k < h.size(); ++k)
            if (h[k] != (k + 1 == h.size() ? 1u : 0u)) top_only = false;
        checks.push_back(check_entry("top_cohomology_one_dimensional", top_only));

        checks.push_back(
            check_entry("coboundary_transposes_boundary", duality_holds(gc, build_boundaries(s, gc))));
    } else {
        Json skip = check_entry("complex_checks", true);
        skip["skipped"] = "arrangement is not essential";
        checks.push_back(std::move(skip));
    }

    if (model && s.essential() && (!model->twisted || s.m() == 2)) {
        Presentation pres = assemble_presentation(s, *model);
        bool split = (pres.ck.proj * pres.p).is_zero() &&
                     pres.ck.proj * pres.ck.sect == RatMat::identity(pres.ck.dim);
        Json pj = check_entry("presentation_cokernel_splits", split);
        pj["cokernel_dim"] = pres.coker_dim();
        checks.push_back(std::move(pj));
    }

    if (fw) {
        bool witnesses = true;
        bool chains = true;
        for (const WedgeSet& w : fw->wedges) {
            auto wit = check_W2(*fw, w);
            if (!wit) {
                witnesses = false;
                continue;
            }
            std::vector<std::pair<int, int>> wits = all_witnesses(*fw, w);
            for (std::size_t k = 1; k < wits.size(); ++k)
                if (!check_W3(*fw, w, wits[0], wits[k])) chains = false;
        }
        checks.push_back(check_entry("wedges_have_star_witnesses", witnesses));
        checks.push_back(check_entry("wedges_cone_connected", chains));

        bool ladders = true;
        bool differences = true;
        for (std::size_t i = 0; i < fw->strats.size(); ++i) {
            for (std::size_t j = 0; j < fw->strats.size(); ++j) {
                if (i == j) continue;
                const Stratification& coarse = fw->strats[i];
                const Stratification& fine = fw->strats[j];
                if (!is_refinement(coarse, fine)) continue;
                if (!ladder_commutes(build_theta(coarse, fine))) ladders = false;
                for (int sigma = 0; sigma < coarse.cell_count(); ++sigma)
                    for (int tau = 0; tau < fine.cell_count(); ++tau)
                        if (!difference_acyclic(fine, tau, coarse, sigma)) differences = false;
            }
        }
        checks.push_back(check_entry("refinement_ladders_commute", ladders));
        checks.push_back(check_entry("star_differences_acyclic", differences));

        SheafModel thm_model = model ? *model : constant_sheaf(1);
        if (!thm_model.twisted || fw->strats[fw->chi_ref].m() == 2) {
            TheoremReport rep = verify_main_theorem(thm_model, *fw);
            Json tj = check_entry("boundary_and_inverse_are_mutually_inverse", rep.ok());
            tj["cokernel_dim"] = rep.coker_dim;
            tj["quotient_dim"] = rep.quotient_dim;
            checks.push_back(std::move(tj));
        }
    }

    bool all = true;
    for (const Json& c : checks)
        if (!c.at("pass").get<bool>()) all = false;
    report["checks"] = std::move(checks);
    report["pass"] = all;
    emit(report, out);
    return all ? 0 : 1;
}

int cmd_boundary(const std::string& fw_path, const std::string& sheaf_path,
                 const std::string& wedge_path, int depth, const std::string& out) {
    Framework fw = load_framework(load_json_file(fw_path),
                                  depth >= 0 ? std::optional<int>(depth) : std::nullopt);
    SheafModel model = load_sheaf(load_json_file(sheaf_path));
    Json wj = load_json_file(wedge_path);
    WedgeSet w = load_wedge(wj.at("wedge"), fw.strats);
    RatVec f = vec_of(wj.at("section"));

    Presentation pres = assemble_presentation(fw.strats.at(fw.chi_ref), model);
    Quotient q = build_quotient(model, fw);

    auto wit = check_W2(fw, w);
    if (!wit) {
        std::cerr << "no star witness: no stratification of the family has a top cell "
                     "inside the wedge\n";
        return 1;
    }

    RatVec b = boundary_value(fw, model, pres, w, f, wit);
    RatMat bm = boundary_matrix(fw, model, pres, q);
    RatMat rm = rho_matrix(fw, model, q, fw.chi_ref, pres);
    RatVec intuitive = rm * b;
    RatVec back = bm * intuitive;

    Json report;
    report["witness"] = {{"arrangement", wit->first},
                         {"cell", cell_code(fw.strats[wit->first].cell(wit->second))}};
    report["boundary_class"] = vec_json(b);
    report["intuitive_class"] = vec_json(intuitive);
    report["round_trip"] = back == b;
    emit(report, out);
    return back == b ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact stratification toolkit for spheres under hyperplane arrangements"};
    app.require_subcommand(1);

    std::string in, out, sheaf_path, fw_path, wedge_path, corrupt, seed_order;
    int depth = -1;
    bool plot = false;

    CLI::App* enumerate = app.add_subcommand("enumerate", "list cells, faces, and stars");
    enumerate->add_option("-i,--input", in, "arrangement JSON")->required();
    enumerate->add_option("-o,--output", out, "report path (default stdout)");
    enumerate->add_flag("--plot", plot, "include ray/arc/patch data for plotting");
    enumerate->add_option("--seed-order", seed_order,
                          "accepted for interface stability; every run is deterministic");

    CLI::App* verify = app.add_subcommand("verify", "run the property suite");
    verify->add_option("-i,--input", in, "arrangement JSON")->required();
    verify->add_option("-s,--sheaf", sheaf_path, "sheaf model JSON");
    verify->add_option("-f,--framework", fw_path, "framework JSON");
    verify->add_option("-d,--depth", depth, "override the framework refinement depth");
    verify->add_option("-o,--output", out, "report path (default stdout)");
    verify->add_option("--corrupt-incidence", corrupt,
                       "I,J: damage one incidence entry as a negative control");
    verify->add_option("--seed-order", seed_order,
                       "accepted for interface stability; every run is deterministic");

    CLI::App* boundary = app.add_subcommand("boundary", "boundary value of a wedge section");
    boundary->add_option("-f,--framework", fw_path, "framework JSON")->required();
    boundary->add_option("-s,--sheaf", sheaf_path, "sheaf model JSON")->required();
    boundary->add_option("-w,--wedge", wedge_path, "wedge payload JSON")->required();
    boundary->add_option("-d,--depth", depth, "override the framework refinement depth");
    boundary->add_option("-o,--output", out, "report path (default stdout)");
    boundary->add_option("--seed-order", seed_order,
                         "accepted for interface stability; every run is deterministic");

    CLI11_PARSE(app, argc, argv);

    try {
        if (enumerate->parsed()) return cmd_enumerate(in, out, plot);
        if (verify->parsed()) return cmd_verify(in, sheaf_path, fw_path, depth, corrupt, out);
        if (boundary->parsed()) return cmd_boundary(fw_path, sheaf_path, wedge_path, depth, out);
    } catch (const Json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
