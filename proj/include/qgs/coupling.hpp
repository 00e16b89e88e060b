#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qgs/common.hpp"
#include "qgs/graph.hpp"

namespace qgs {

// Parameters of a delta-type condition: continuity of alpha across the
// vertex plus nu * alpha_1 + sum_j cprime_j beta_j = 0.
struct DeltaParams {
    cplx nu;
    std::vector<cplx> cprime;

    friend bool operator==(const DeltaParams&, const DeltaParams&) = default;
};

// Vertex condition C alpha + Cprime beta = 0 with k x k blocks; columns follow
// the vertex's endpoint order.
struct CouplingCondition {
    int vertex = 0;
    CMatrix C;
    CMatrix Cprime;
    // Set when the condition was built from delta-type parameters.
    std::optional<DeltaParams> delta;

    int k() const { return static_cast<int>(C.rows()); }
    // (C | Cprime) as one k x 2k matrix.
    CMatrix joined() const;
    static CouplingCondition from_joined(int vertex, const CMatrix& m);
};

struct GraphCoupling {
    std::vector<CouplingCondition> conditions;

    const CouplingCondition& at(int vertex_id) const;
};

void check_dimensions(const CouplingCondition& cc);

bool admissible(const CouplingCondition& cc, const Tolerances& tol = {});

// Same row space of (C | Cprime), i.e. related by a left GL(k) factor.
bool equivalent(const CouplingCondition& a, const CouplingCondition& b, const Tolerances& tol = {});

// C alpha + Cprime beta.
CVector apply(const CouplingCondition& cc, const CVector& alpha, const CVector& beta);

// k x 2k delta-type matrix: k-1 rows alpha_i - alpha_{i+1}, last row (nu, 0.. | cprime).
CouplingCondition delta_type(int k, cplx nu, std::span<const cplx> cprime, int vertex = 0);

// Recognizes the exact delta-type matrix layout; used when conditions are
// given as raw matrices.
std::optional<DeltaParams> detect_delta(const CouplingCondition& cc);

// m * (C | Cprime); drops any delta tag since the layout changes.
CouplingCondition left_multiply(const CMatrix& m, const CouplingCondition& cc);

// Reorders endpoints: new column j is old column perm[j], in both blocks.
CouplingCondition permute_columns(const CouplingCondition& cc, std::span<const int> perm);

// Structural problems of gc with respect to g (coverage, sizes, admissibility).
std::vector<std::string> validate_coupling(const Graph& g, const GraphCoupling& gc,
                                           const Tolerances& tol = {});

}  // namespace qgs
