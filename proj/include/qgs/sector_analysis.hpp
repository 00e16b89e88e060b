#pragma once

#include <map>
#include <string>
#include <vector>

#include "qgs/coupling.hpp"
#include "qgs/graph.hpp"
#include "qgs/kappa_flow.hpp"
#include "qgs/model_operator.hpp"
#include "qgs/sector.hpp"

namespace qgs {

struct SectorClassification {
    int index = 0;  // 1-based, Lambda_index
    OpenSector sector;
    SpectrumKind kind = SpectrumKind::Unknown;
    std::vector<cplx> eigenvalues;
    bool exact = false;  // true when decided by the delta-type formula
};

struct EdgeReport {
    int edge = 0;
    EllipticityResult ellipticity;
};

struct VertexReport {
    int vertex = 0;
    ModelVertexData model;
    std::vector<OpenSector> sectors;
    VertexVerdict verdict;
    std::vector<SectorClassification> classification;
};

struct AnalysisReport {
    Sector sector;
    std::vector<EdgeReport> edges;
    std::vector<VertexReport> vertices;
    bool certified = false;
    std::vector<std::string> reasons;  // why not certified
};

// Spectrum of the model operator at one vertex, sector by sector.
std::vector<SectorClassification> classify_vertex(const ModelVertexData& v, const CouplingCondition& cc,
                                                  const Tolerances& tol = {});

std::map<int, std::vector<SectorClassification>> classify_sectors(const Graph& g, const GraphCoupling& gc,
                                                                  const Tolerances& tol = {});

// Parameter-ellipticity on every edge plus the S-matrix test at every vertex.
AnalysisReport analyze(const Graph& g, const GraphCoupling& gc, const Sector& sector, const Tolerances& tol = {});

// Throws InvalidInput listing every graph and coupling violation.
void require_valid(const Graph& g, const GraphCoupling& gc, const Tolerances& tol = {});

}  // namespace qgs
