#include "qgs/coupling.hpp"

#include <algorithm>
#include <map>

#include "qgs/linalg.hpp"

namespace qgs {

CMatrix CouplingCondition::joined() const {
    CMatrix m(C.rows(), C.cols() + Cprime.cols());
    m << C, Cprime;
    return m;
}

CouplingCondition CouplingCondition::from_joined(int vertex, const CMatrix& m) {
    if (m.cols() != 2 * m.rows())
        throw Error(ErrorCode::DimensionMismatch, "coupling matrix must be k x 2k");
    CouplingCondition cc;
    cc.vertex = vertex;
    cc.C = m.leftCols(m.rows());
    cc.Cprime = m.rightCols(m.rows());
    return cc;
}

const CouplingCondition& GraphCoupling::at(int vertex_id) const {
    for (const auto& c : conditions)
        if (c.vertex == vertex_id) return c;
    throw Error(ErrorCode::InvalidInput, "no coupling for vertex " + std::to_string(vertex_id));
}

void check_dimensions(const CouplingCondition& cc) {
    const auto k = cc.C.rows();
    if (k == 0 || cc.C.cols() != k || cc.Cprime.rows() != k || cc.Cprime.cols() != k)
        throw Error(ErrorCode::DimensionMismatch,
                    "coupling at vertex " + std::to_string(cc.vertex) + " is not k x 2k");
}

bool admissible(const CouplingCondition& cc, const Tolerances& tol) {
    check_dimensions(cc);
    return linalg::numerical_rank(cc.joined(), tol.rank_rel) == cc.k();
}

bool equivalent(const CouplingCondition& a, const CouplingCondition& b, const Tolerances& tol) {
    check_dimensions(a);
    check_dimensions(b);
    if (a.k() != b.k()) throw Error(ErrorCode::DimensionMismatch, "different vertex degrees");
    CMatrix pa = linalg::row_space_projector(a.joined(), tol.rank_rel);
    CMatrix pb = linalg::row_space_projector(b.joined(), tol.rank_rel);
    return linalg::spectral_norm(pa - pb) <= tol.equivalence;
}

CVector apply(const CouplingCondition& cc, const CVector& alpha, const CVector& beta) {
    return cc.C * alpha + cc.Cprime * beta;
}

CouplingCondition delta_type(int k, cplx nu, std::span<const cplx> cprime, int vertex) {
    if (k < 1 || static_cast<int>(cprime.size()) != k)
        throw Error(ErrorCode::DimensionMismatch, "cprime must have k entries");
    if (nu == cplx(0.0) && std::all_of(cprime.begin(), cprime.end(), [](cplx c) { return c == cplx(0.0); }))
        throw Error(ErrorCode::AllZeroParameters, "(nu, cprime) must not vanish");
    CouplingCondition cc;
    cc.vertex = vertex;
    cc.C = CMatrix::Zero(k, k);
    cc.Cprime = CMatrix::Zero(k, k);
    for (int i = 0; i + 1 < k; ++i) {
        cc.C(i, i) = 1.0;
        cc.C(i, i + 1) = -1.0;
    }
    cc.C(k - 1, 0) = nu;
    for (int j = 0; j < k; ++j) cc.Cprime(k - 1, j) = cprime[static_cast<std::size_t>(j)];
    cc.delta = DeltaParams{nu, std::vector<cplx>(cprime.begin(), cprime.end())};
    return cc;
}

std::optional<DeltaParams> detect_delta(const CouplingCondition& cc) {
    if (cc.delta) return cc.delta;
    check_dimensions(cc);
    const int k = cc.k();
    for (int i = 0; i + 1 < k; ++i)
        for (int j = 0; j < k; ++j) {
            cplx expected = j == i ? 1.0 : (j == i + 1 ? -1.0 : 0.0);
            if (cc.C(i, j) != expected || cc.Cprime(i, j) != cplx(0.0)) return std::nullopt;
        }
    for (int j = 1; j < k; ++j)
        if (cc.C(k - 1, j) != cplx(0.0)) return std::nullopt;
    DeltaParams d{cc.C(k - 1, 0), {}};
    for (int j = 0; j < k; ++j) d.cprime.push_back(cc.Cprime(k - 1, j));
    if (d.nu == cplx(0.0) &&
        std::all_of(d.cprime.begin(), d.cprime.end(), [](cplx c) { return c == cplx(0.0); }))
        return std::nullopt;
    return d;
}

CouplingCondition left_multiply(const CMatrix& m, const CouplingCondition& cc) {
    CouplingCondition out;
    out.vertex = cc.vertex;
    out.C = m * cc.C;
    out.Cprime = m * cc.Cprime;
    return out;
}

CouplingCondition permute_columns(const CouplingCondition& cc, std::span<const int> perm) {
    check_dimensions(cc);
    if (static_cast<int>(perm.size()) != cc.k())
        throw Error(ErrorCode::DimensionMismatch, "permutation size differs from k");
    CouplingCondition out;
    out.vertex = cc.vertex;
    out.C.resize(cc.k(), cc.k());
    out.Cprime.resize(cc.k(), cc.k());
    for (int j = 0; j < cc.k(); ++j) {
        out.C.col(j) = cc.C.col(perm[static_cast<std::size_t>(j)]);
        out.Cprime.col(j) = cc.Cprime.col(perm[static_cast<std::size_t>(j)]);
    }
    return out;
}

std::vector<std::string> validate_coupling(const Graph& g, const GraphCoupling& gc,
                                           const Tolerances& tol) {
    std::vector<std::string> out;
    std::map<int, int> count;
    for (const auto& cc : gc.conditions) ++count[cc.vertex];
    int rows = 0;
    for (const auto& v : g.vertices) {
        auto it = count.find(v.id);
        if (it == count.end()) {
            out.push_back("vertex " + std::to_string(v.id) + " has no coupling condition");
            continue;
        }
        if (it->second > 1) out.push_back("vertex " + std::to_string(v.id) + " has several coupling conditions");
        const auto& cc = gc.at(v.id);
        if (cc.C.rows() != v.degree() || cc.C.cols() != v.degree() || cc.Cprime.rows() != v.degree() ||
            cc.Cprime.cols() != v.degree()) {
            out.push_back("vertex " + std::to_string(v.id) + ": coupling is not " +
                          std::to_string(v.degree()) + " x " + std::to_string(2 * v.degree()));
            continue;
        }
        rows += cc.k();
        bool finite = cc.joined().allFinite();
        if (!finite) {
            out.push_back("vertex " + std::to_string(v.id) + ": non-finite coupling entries");
            continue;
        }
        if (!admissible(cc, tol)) out.push_back("vertex " + std::to_string(v.id) + ": coupling not admissible");
    }
    for (const auto& [vid, n] : count) {
        bool known = std::any_of(g.vertices.begin(), g.vertices.end(), [&](const Vertex& v) { return v.id == vid; });
        if (!known) out.push_back("coupling refers to unknown vertex " + std::to_string(vid));
    }
    if (out.empty() && rows != g.endpoint_count())
        out.push_back("coupling rows do not add up to 2N");
    return out;
}

}  // namespace qgs
