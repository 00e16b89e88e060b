#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qgs/coupling.hpp"
#include "qgs/graph.hpp"
#include "qgs/kappa_flow.hpp"
#include "qgs/resolvent_lab.hpp"
#include "qgs/sector.hpp"
#include "qgs/sector_analysis.hpp"

namespace qgs {

inline constexpr std::string_view kVersion = "0.3.1";

// Sector as written in the file (degrees); kept verbatim so a round trip is exact.
struct SectorSpec {
    double bisector_deg = 180.0;
    double half_angle_deg = 0.0;

    Sector sector() const { return Sector::from_degrees(bisector_deg, half_angle_deg); }
    friend bool operator==(const SectorSpec&, const SectorSpec&) = default;
};

struct Problem {
    Graph graph;
    GraphCoupling coupling;
    std::optional<SectorSpec> sector;
};

// Throws Error(ParseError) with "line L, column C" for syntax errors and a
// JSON path for structural ones.
Problem parse_problem(std::string_view text);
Problem load_problem(const std::filesystem::path& path);

nlohmann::json to_json(const Problem& p);
std::string serialize_problem(const Problem& p);

nlohmann::json to_json(cplx z);
nlohmann::json to_json(const CMatrix& m);
nlohmann::json to_json(const Tolerances& tol);
nlohmann::json to_json(const CouplingCondition& cc);

nlohmann::json report_json(const AnalysisReport& r, const Tolerances& tol);
nlohmann::json spectrum_json(int vertex, const ModelVertexData& v, const std::vector<SectorClassification>& cls,
                             const Tolerances& tol);
nlohmann::json limit_json(const CouplingCondition& cc, const VertexVerdict& verdict, const Tolerances& tol);
nlohmann::json sweep_json(const SweepResult& sr, const DecayVerdict& dv, int n_per_edge);

}  // namespace qgs
