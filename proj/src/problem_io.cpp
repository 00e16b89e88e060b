#include "qgs/problem_io.hpp"

#include <fstream>
#include <sstream>

namespace qgs {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw Error(ErrorCode::ParseError, path + ": " + what);
}

const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(path, std::string("missing key '") + key + "'");
    return *it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

cplx complex_of(const json& j, const std::string& path) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) fail(path, "expected [re, im]");
    return {number(j[0], path + "[0]"), number(j[1], path + "[1]")};
}

std::vector<cplx> complex_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected a list of [re, im] pairs");
    std::vector<cplx> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(complex_of(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

CMatrix complex_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty list of rows");
    const auto rows = j.size();
    std::size_t cols = 0;
    CMatrix m;
    for (std::size_t r = 0; r < rows; ++r) {
        auto row = complex_list(j[r], path + "[" + std::to_string(r) + "]");
        if (r == 0) {
            cols = row.size();
            m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        } else if (row.size() != cols) {
            fail(path, "ragged matrix");
        }
        for (std::size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
    return m;
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<int>();
}

EndpointId endpoint_of(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected an endpoint like \"e0+\"");
    const auto s = j.get<std::string>();
    if (s.size() < 3 || s.front() != 'e' || (s.back() != '+' && s.back() != '-'))
        fail(path, "bad endpoint '" + s + "'");
    const auto digits = s.substr(1, s.size() - 2);
    if (digits.find_first_not_of("0123456789") != std::string::npos) fail(path, "bad endpoint '" + s + "'");
    return {std::stoi(digits), s.back() == '+' ? Side::plus : Side::minus};
}

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
    int line = 1;
    int col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json poly_json(const Polynomial& p) {
    json out = json::array();
    for (cplx c : p.coeffs()) out.push_back(to_json(c));
    return out;
}

double degrees(double rad) { return rad * 180.0 / kPi; }

json open_sector_json(const OpenSector& s) {
    return {{"low_deg", degrees(s.angle_low)}, {"high_deg", degrees(s.angle_high)}};
}

json list_json(const std::vector<cplx>& v) {
    json out = json::array();
    for (cplx z : v) out.push_back(to_json(z));
    return out;
}

json classification_json(const std::vector<SectorClassification>& cls) {
    json out = json::array();
    for (const auto& c : cls) {
        json row = open_sector_json(c.sector);
        row["index"] = c.index;
        row["kind"] = std::string(to_string(c.kind));
        row["eigenvalues"] = list_json(c.eigenvalues);
        row["method"] = c.exact ? "delta-formula" : "sampled";
        out.push_back(std::move(row));
    }
    return out;
}

json verdict_json(const VertexVerdict& vv) {
    json out{{"certified", vv.certified},
             {"failure", std::string(to_string(vv.failure))},
             {"limiting_domain", {{"ell", vv.limit.ell}, {"C", to_json(vv.limit.condition.C)},
                                  {"Cprime", to_json(vv.limit.condition.Cprime)}}}};
    if (vv.smatrix) {
        out["S"] = to_json(vv.smatrix->S);
        out["det_S"] = to_json(vv.det);
        out["det_scale"] = vv.det_scale;
        out["anchor"] = to_json(vv.smatrix->anchor);
    }
    return out;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const CMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

json to_json(const Tolerances& tol) {
    return {{"rank_rel", tol.rank_rel},
            {"equivalence", tol.equivalence},
            {"angle", tol.angle},
            {"eigen_det_rel", tol.eigen_det_rel},
            {"smatrix_det_rel", tol.smatrix_det_rel},
            {"ellipticity_samples", tol.ellipticity_samples},
            {"ellipticity_zero", tol.ellipticity_zero},
            {"samples_per_sector", tol.samples_per_sector},
            {"newton_iterations", tol.newton_iterations},
            {"newton_residual", tol.newton_residual}};
}

json to_json(const CouplingCondition& cc) {
    json out{{"vertex", cc.vertex}};
    if (cc.delta) {
        out["delta"] = {{"nu", to_json(cc.delta->nu)}, {"cprime", list_json(cc.delta->cprime)}};
    } else {
        out["C"] = to_json(cc.C);
        out["Cprime"] = to_json(cc.Cprime);
    }
    return out;
}

Problem parse_problem(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        std::string msg = e.what();
        // keep the library's description, drop its own position prefix
        if (auto pos = msg.find(": "); pos != std::string::npos) msg = msg.substr(pos + 2);
        throw Error(ErrorCode::ParseError,
                    "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + msg);
    }

    Problem p;
    const auto& edges = need(doc, "edges", "$");
    if (!edges.is_array()) fail("$.edges", "expected a list");
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const std::string path = "$.edges[" + std::to_string(i) + "]";
        const auto& je = edges[i];
        Edge e;
        e.id = integer(need(je, "id", path), path + ".id");
        e.a = Polynomial(complex_list(need(je, "a", path), path + ".a"));
        if (je.contains("b")) e.b = Polynomial(complex_list(je["b"], path + ".b"));
        if (je.contains("c")) e.c = Polynomial(complex_list(je["c"], path + ".c"));
        p.graph.edges.push_back(std::move(e));
    }

    const auto& vertices = need(doc, "vertices", "$");
    if (!vertices.is_array()) fail("$.vertices", "expected a list");
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const std::string path = "$.vertices[" + std::to_string(i) + "]";
        Vertex v;
        v.id = integer(need(vertices[i], "id", path), path + ".id");
        const auto& eps = need(vertices[i], "endpoints", path);
        if (!eps.is_array()) fail(path + ".endpoints", "expected a list");
        for (std::size_t k = 0; k < eps.size(); ++k)
            v.endpoints.push_back(endpoint_of(eps[k], path + ".endpoints[" + std::to_string(k) + "]"));
        p.graph.vertices.push_back(std::move(v));
    }

    const auto& couplings = need(doc, "couplings", "$");
    if (!couplings.is_array()) fail("$.couplings", "expected a list");
    for (std::size_t i = 0; i < couplings.size(); ++i) {
        const std::string path = "$.couplings[" + std::to_string(i) + "]";
        const auto& jc = couplings[i];
        const int vertex = integer(need(jc, "vertex", path), path + ".vertex");
        if (jc.contains("delta")) {
            const auto& jd = jc["delta"];
            const cplx nu = complex_of(need(jd, "nu", path + ".delta"), path + ".delta.nu");
            const auto cp = complex_list(need(jd, "cprime", path + ".delta"), path + ".delta.cprime");
            if (cp.empty()) fail(path + ".delta.cprime", "empty");
            p.coupling.conditions.push_back(delta_type(static_cast<int>(cp.size()), nu, cp, vertex));
        } else {
            CouplingCondition cc;
            cc.vertex = vertex;
            cc.C = complex_matrix(need(jc, "C", path), path + ".C");
            cc.Cprime = complex_matrix(need(jc, "Cprime", path), path + ".Cprime");
            p.coupling.conditions.push_back(std::move(cc));
        }
    }

    if (doc.contains("sector")) {
        const auto& js = doc["sector"];
        SectorSpec s;
        s.bisector_deg = number(need(js, "bisector_deg", "$.sector"), "$.sector.bisector_deg");
        s.half_angle_deg = number(need(js, "half_angle_deg", "$.sector"), "$.sector.half_angle_deg");
        s.sector();  // range check
        p.sector = s;
    }
    return p;
}

Problem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

json to_json(const Problem& p) {
    json edges = json::array();
    for (const auto& e : p.graph.edges)
        edges.push_back({{"id", e.id}, {"a", poly_json(e.a)}, {"b", poly_json(e.b)}, {"c", poly_json(e.c)}});
    json vertices = json::array();
    for (const auto& v : p.graph.vertices) {
        json eps = json::array();
        for (const auto& ep : v.endpoints) eps.push_back(to_string(ep));
        vertices.push_back({{"id", v.id}, {"endpoints", eps}});
    }
    json couplings = json::array();
    for (const auto& cc : p.coupling.conditions) couplings.push_back(to_json(cc));
    json out{{"edges", edges}, {"vertices", vertices}, {"couplings", couplings}};
    if (p.sector) out["sector"] = {{"bisector_deg", p.sector->bisector_deg}, {"half_angle_deg", p.sector->half_angle_deg}};
    return out;
}

std::string serialize_problem(const Problem& p) { return to_json(p).dump(2) + "\n"; }

json report_json(const AnalysisReport& r, const Tolerances& tol) {
    json edges = json::array();
    for (const auto& e : r.edges) {
        json je{{"id", e.edge}, {"parameter_elliptic", e.ellipticity.pass}};
        if (!e.ellipticity.pass) {
            je["witness_s"] = e.ellipticity.witness_s;
            je["witness_value"] = to_json(e.ellipticity.witness_value);
            je["reason"] = e.ellipticity.reason;
        }
        edges.push_back(std::move(je));
    }
    json vertices = json::array();
    for (const auto& v : r.vertices) {
        json jv = verdict_json(v.verdict);
        jv["id"] = v.vertex;
        jv["a0"] = list_json(v.model.a0);
        jv["background_directions"] = list_json(v.model.directions);
        jv["sectors"] = classification_json(v.classification);
        vertices.push_back(std::move(jv));
    }
    return {{"tool", "qgs"},
            {"version", std::string(kVersion)},
            {"tolerances", to_json(tol)},
            {"sector", {{"bisector_deg", degrees(r.sector.bisector_angle)}, {"half_angle_deg", degrees(r.sector.half_angle)}}},
            {"certified", r.certified},
            {"reasons", r.reasons},
            {"edges", edges},
            {"vertices", vertices}};
}

json spectrum_json(int vertex, const ModelVertexData& v, const std::vector<SectorClassification>& cls,
                   const Tolerances& tol) {
    return {{"tool", "qgs"},
            {"version", std::string(kVersion)},
            {"tolerances", to_json(tol)},
            {"vertex", vertex},
            {"a0", list_json(v.a0)},
            {"background_directions", list_json(v.directions)},
            {"sectors", classification_json(cls)}};
}

json limit_json(const CouplingCondition& cc, const VertexVerdict& verdict, const Tolerances& tol) {
    json out = verdict_json(verdict);
    out["tool"] = "qgs";
    out["version"] = std::string(kVersion);
    out["tolerances"] = to_json(tol);
    out["vertex"] = cc.vertex;
    out["coupling"] = to_json(cc);
    return out;
}

json sweep_json(const SweepResult& sr, const DecayVerdict& dv, int n_per_edge) {
    return {{"tool", "qgs"},
            {"version", std::string(kVersion)},
            {"theta_deg", degrees(sr.theta)},
            {"n_per_edge", n_per_edge},
            {"verdict", std::string(to_string(dv.verdict))},
            {"slope", dv.slope},
            {"ratio", dv.ratio},
            {"thresholds", {{"ratio_max", 10.0}, {"decay_slope", {-1.3, -0.7}}, {"no_decay_slope_min", -0.3},
                            {"no_decay_ratio_slope", {10.0, -0.7}},
                            {"note", "engineering thresholds; the decay estimate has no explicit constant"}}},
            {"resolvent_norm", "1/sigma_min of the discrete operator with endpoint values eliminated; "
                               "a discrete approximation of the continuous norm"}};
}

}  // namespace qgs
