/**
 * JSON serialization: arrangements, sheaf models, frameworks, wedge
 * payloads, and the enumerate report.  Rationals travel as "p/q" strings
 * and cells as sign strings, so every file round-trips exactly.
 */
#ifndef STRATA_JSON_IO_HPP
#define STRATA_JSON_IO_HPP

#include <fstream>

#include <json.hpp>

#include "strata/boundary.hpp"

namespace strata {

using Json = nlohmann::json;

inline Rat rat_of(const Json& j) {
    if (!j.is_string()) throw std::runtime_error("expected a rational string, got " + j.dump());
    std::optional<Rat> x = rat_from_string(j.get<std::string>());
    if (!x) throw std::runtime_error("malformed rational " + j.dump());
    return *x;
}

inline RatVec vec_of(const Json& j) {
    if (!j.is_array()) throw std::runtime_error("expected an array of rationals");
    RatVec v;
    for (const Json& x : j) v.push_back(rat_of(x));
    return v;
}

inline Json vec_json(const RatVec& v) {
    Json out = Json::array();
    for (const Rat& x : v) out.push_back(rat_to_string(x));
    return out;
}

inline RatMat mat_of(const Json& j) {
    if (!j.is_array() || j.empty()) throw std::runtime_error("expected a nonempty matrix");
    RatMat m(j.size(), j.at(0).size());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const Json& row = j.at(r);
        if (!row.is_array() || row.size() != m.cols())
            throw std::runtime_error("ragged matrix rows");
        for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rat_of(row.at(c));
    }
    return m;
}

inline Json mat_json(const RatMat& m) {
    Json out = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rat_to_string(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

inline Stratification load_arrangement(const Json& j) {
    int m = j.at("m").get<int>();
    std::vector<RatVec> normals;
    for (const Json& row : j.at("normals")) normals.push_back(vec_of(row));
    return Stratification(m, std::move(normals));
}

inline Json arrangement_json(const Stratification& s) {
    Json out;
    out["m"] = s.m();
    out["normals"] = Json::array();
    for (const RatVec& n : s.normals()) out["normals"].push_back(vec_json(n));
    return out;
}

/// One character per normal, with a "#+" / "#-" suffix on the two cells
/// that live in the kernel of a non-essential arrangement.
inline std::string cell_code(const Cell& c) {
    std::string out;
    for (int s : c.signs) out += s < 0 ? '-' : (s > 0 ? '+' : '0');
    if (c.tag != 0) {
        out += '#';
        out += c.tag > 0 ? '+' : '-';
    }
    return out;
}

inline int cell_from_code(const Stratification& s, const std::string& code) {
    std::vector<int> signs;
    int tag = 0;
    for (std::size_t i = 0; i < code.size(); ++i) {
        char ch = code[i];
        if (ch == '#') {
            if (i + 2 != code.size() || (code[i + 1] != '+' && code[i + 1] != '-'))
                throw std::runtime_error("bad cell code: " + code);
            tag = code[i + 1] == '+' ? 1 : -1;
            break;
        }
        if (ch == '+')
            signs.push_back(1);
        else if (ch == '-')
            signs.push_back(-1);
        else if (ch == '0')
            signs.push_back(0);
        else
            throw std::runtime_error("bad cell code: " + code);
    }
    int idx = s.index_of(signs, tag);
    if (idx < 0) throw std::runtime_error("no such cell: " + code);
    return idx;
}

inline SheafModel load_sheaf(const Json& j) {
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") return constant_sheaf(j.at("rank").get<std::size_t>());
    if (kind == "local_system") {
        RatMat a = mat_of(j.at("monodromy"));
        if (j.contains("cut")) return local_system(a, vec_of(j.at("cut")));
        return local_system(a);
    }
    throw std::runtime_error("unknown sheaf kind: " + kind);
}

inline Json sheaf_json(const SheafModel& model) {
    Json out;
    if (!model.twisted) {
        out["kind"] = "constant";
        out["rank"] = model.r;
    } else {
        out["kind"] = "local_system";
        out["monodromy"] = mat_json(model.monodromy);
        out["cut"] = vec_json(model.cut);
    }
    return out;
}

/// A wedge entry is {"full": true}, or a cell list against one of the
/// framework arrangements (by index) or an inline arrangement object.
inline WedgeSet load_wedge(const Json& j, const std::vector<Stratification>& seeds) {
    if (j.contains("full") && j.at("full").get<bool>()) return full_wedge();
    const Json& arr = j.at("arrangement");
    Stratification s = arr.is_number_integer()
                           ? [&] {
                                 int ai = arr.get<int>();
                                 if (ai < 0 || ai >= static_cast<int>(seeds.size()))
                                     throw std::runtime_error("wedge arrangement index out of range");
                                 return seeds[static_cast<std::size_t>(ai)];
                             }()
                           : load_arrangement(arr);
    std::vector<int> cells;
    for (const Json& code : j.at("cells")) cells.push_back(cell_from_code(s, code.get<std::string>()));
    return cone_wedge(std::move(s), std::move(cells));
}

inline Framework load_framework(const Json& j, std::optional<int> depth_override = std::nullopt) {
    std::vector<Stratification> seeds;
    for (const Json& a : j.at("arrangements")) seeds.push_back(load_arrangement(a));
    int depth = depth_override ? *depth_override : j.value("depth", 1);
    bool auto_stars = j.value("auto_star_wedges", true);
    std::vector<WedgeSet> wedges;
    if (j.contains("wedges"))
        for (const Json& w : j.at("wedges")) wedges.push_back(load_wedge(w, seeds));
    return make_framework(std::move(seeds), depth, auto_stars, std::move(wedges));
}

inline Json enumerate_report(const Stratification& s, bool with_plot) {
    Json out;
    out["m"] = s.m();
    out["essential"] = s.essential();
    out["cell_count"] = s.cell_count();
    long euler = 0;
    Json cells = Json::array();
    for (int i = 0; i < s.cell_count(); ++i) {
        const Cell& c = s.cell(i);
        euler += c.dim % 2 == 0 ? 1 : -1;
        Json jc;
        jc["code"] = cell_code(c);
        jc["dim"] = c.dim;
        jc["interior"] = vec_json(c.interior);
        Json faces = Json::array();
        for (int t = 0; t < s.cell_count(); ++t)
            if (t != i && s.face(t, i)) faces.push_back(cell_code(s.cell(t)));
        jc["faces"] = std::move(faces);
        Json star = Json::array();
        for (int t : s.star_members(i)) star.push_back(cell_code(s.cell(t)));
        jc["star"] = std::move(star);
        cells.push_back(std::move(jc));
    }
    out["euler_characteristic"] = euler;
    out["cells"] = std::move(cells);

    if (with_plot) {
        Json plot;
        Json points = Json::array();
        for (int i : s.cells_of_dim(0)) points.push_back(vec_json(s.cell(i).interior));
        plot["points"] = std::move(points);
        if (s.m() >= 2) {
            Json tops = Json::array();
            for (int i : s.cells_of_dim(s.top_dim())) {
                Json patch;
                patch["cell"] = cell_code(s.cell(i));
                patch["interior"] = vec_json(s.cell(i).interior);
                Json corners = Json::array();
                for (int t = 0; t < s.cell_count(); ++t)
                    if (t != i && s.cell(t).dim == 0 && s.face(t, i))
                        corners.push_back(vec_json(s.cell(t).interior));
                patch["corners"] = std::move(corners);
                tops.push_back(std::move(patch));
            }
            plot[s.m() == 2 ? "arcs" : "patches"] = std::move(tops);
        }
        out["plot"] = std::move(plot);
    }
    return out;
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return Json::parse(in);  // throws with byte position on malformed input
}

}  // namespace strata

#endif
