#include "qgs/sector_analysis.hpp"

#include <sstream>

namespace qgs {

void require_valid(const Graph& g, const GraphCoupling& gc, const Tolerances& tol) {
    std::vector<std::string> problems;
    for (const auto& v : validate_graph(g, tol)) problems.push_back(std::string(to_string(v.kind)) + " " + v.detail);
    if (problems.empty())
        for (auto& p : validate_coupling(g, gc, tol)) problems.push_back(std::move(p));
    if (problems.empty()) return;
    std::ostringstream os;
    for (std::size_t i = 0; i < problems.size(); ++i) os << (i ? "; " : "") << problems[i];
    throw Error(ErrorCode::InvalidInput, os.str());
}

std::vector<SectorClassification> classify_vertex(const ModelVertexData& v, const CouplingCondition& cc,
                                                  const Tolerances& tol) {
    std::vector<SectorClassification> out;
    const auto sectors = bgres_sectors(v);
    const auto delta = detect_delta(cc);
    for (std::size_t j = 0; j < sectors.size(); ++j) {
        SectorClassification c;
        c.index = static_cast<int>(j) + 1;
        c.sector = sectors[j];
        if (delta) {
            auto ds = delta_spectrum(v, delta->nu, delta->cprime, sectors[j], tol);
            c.kind = ds.kind;
            if (ds.kind == SpectrumKind::Point) c.eigenvalues.push_back(ds.lambda);
            c.exact = true;
        } else {
            auto ss = sample_sector_spectrum(v, cc, sectors[j], tol);
            c.kind = ss.kind;
            c.eigenvalues = std::move(ss.eigenvalues);
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::map<int, std::vector<SectorClassification>> classify_sectors(const Graph& g, const GraphCoupling& gc,
                                                                  const Tolerances& tol) {
    require_valid(g, gc, tol);
    std::map<int, std::vector<SectorClassification>> out;
    for (const auto& vx : g.vertices)
        out[vx.id] = classify_vertex(ModelVertexData::from_graph(g, vx.id, tol), gc.at(vx.id), tol);
    return out;
}

AnalysisReport analyze(const Graph& g, const GraphCoupling& gc, const Sector& sector, const Tolerances& tol) {
    require_valid(g, gc, tol);
    AnalysisReport r;
    r.sector = sector;
    r.certified = true;
    for (const auto& e : g.edges) {
        EdgeReport er{e.id, ellipticity_check(e, sector, tol)};
        if (!er.ellipticity.pass) {
            r.certified = false;
            std::ostringstream os;
            os << "edge " << e.id << ": a(s) in sector at s = " << er.ellipticity.witness_s;
            r.reasons.push_back(os.str());
        }
        r.edges.push_back(std::move(er));
    }
    for (const auto& vx : g.vertices) {
        VertexReport vr;
        vr.vertex = vx.id;
        vr.model = ModelVertexData::from_graph(g, vx.id, tol);
        vr.sectors = bgres_sectors(vr.model);
        // theta_p is the identity on (alpha, beta): the graph matrices serve as model couplings
        const auto& cc = gc.at(vx.id);
        vr.verdict = vertex_minimal_growth(cc, vr.model, sector, tol);
        vr.classification = classify_vertex(vr.model, cc, tol);
        if (!vr.verdict.certified) {
            r.certified = false;
            r.reasons.push_back("vertex " + std::to_string(vx.id) + ": " + std::string(to_string(vr.verdict.failure)));
        }
        r.vertices.push_back(std::move(vr));
    }
    return r;
}

}  // namespace qgs
