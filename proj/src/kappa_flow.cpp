#include "qgs/kappa_flow.hpp"

#include <algorithm>
#include <cmath>

#include "qgs/linalg.hpp"

namespace qgs {

CouplingCondition kappa_act(const CouplingCondition& cc, double rho) {
    if (!(rho > 0.0)) throw Error(ErrorCode::NonpositiveRho, "rho must be positive");
    check_dimensions(cc);
    CouplingCondition out;
    out.vertex = cc.vertex;
    out.C = cc.C;
    out.Cprime = cc.Cprime / rho;
    return out;
}

ExpMode kappa_act(const ExpMode& u, double rho) {
    if (!(rho > 0.0)) throw Error(ErrorCode::NonpositiveRho, "rho must be positive");
    return {u.coeff * std::sqrt(rho), u.mu * rho};
}

ExpMode model_apply(const ExpMode& u, cplx a0, cplx lambda) {
    // D_x^2 e^{-mu x} = -mu^2 e^{-mu x}
    return {u.coeff * (-a0 * u.mu * u.mu - lambda), u.mu};
}

LimitingDomain limiting_domain(const CouplingCondition& cc, const Tolerances& tol) {
    check_dimensions(cc);
    const int k = cc.k();
    const auto full_sv = linalg::singular_values(cc.joined());
    const double cutoff = tol.rank_rel * (full_sv.size() ? full_sv(0) : 0.0);

    Eigen::JacobiSVD<CMatrix> svd(cc.Cprime, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    int ell = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++ell;

    // U^* (C | C') has C'-block Sigma V^*: rows beyond ell carry no C' part
    const CMatrix ustar = svd.matrixU().adjoint();
    const CMatrix c1p = svd.matrixV().adjoint().topRows(ell);
    const CMatrix c2 = (ustar * cc.C).bottomRows(k - ell);

    const CMatrix top = ell > 0 ? linalg::rref(c1p, tol.rank_rel) : CMatrix(0, k);
    const CMatrix bottom = k - ell > 0 ? linalg::rref(c2, tol.rank_rel) : CMatrix(0, k);
    if (top.rows() != ell || bottom.rows() != k - ell)
        throw Error(ErrorCode::RankDeficient, "coupling at vertex " + std::to_string(cc.vertex) + " is not admissible");

    LimitingDomain ld;
    ld.ell = ell;
    ld.condition.vertex = cc.vertex;
    ld.condition.C = CMatrix::Zero(k, k);
    ld.condition.Cprime = CMatrix::Zero(k, k);
    ld.condition.Cprime.topRows(ell) = top;
    ld.condition.C.bottomRows(k - ell) = bottom;
    return ld;
}

double grassmann_distance(const CouplingCondition& a, const CouplingCondition& b, const Tolerances& tol) {
    check_dimensions(a);
    check_dimensions(b);
    if (a.k() != b.k()) throw Error(ErrorCode::DimensionMismatch, "different vertex degrees");
    return linalg::spectral_norm(linalg::row_space_projector(a.joined(), tol.rank_rel) -
                                 linalg::row_space_projector(b.joined(), tol.rank_rel));
}

SMatrix build_smatrix_at(const LimitingDomain& ld, const ModelVertexData& v, cplx anchor, const Tolerances& tol) {
    const int k = ld.condition.k();
    if (k != v.k()) throw Error(ErrorCode::DimensionMismatch, "limiting domain size differs from vertex degree");
    if (v.on_background_ray(anchor, tol))
        throw Error(ErrorCode::SectorHitsBackgroundSpectrum, "anchor lies on a background ray");
    SMatrix s;
    s.ell = ld.ell;
    s.anchor = anchor;
    s.sqrt_minus_anchor = std::sqrt(-anchor);
    for (cplx a : v.a0) {
        cplx r = std::sqrt(a);
        if ((s.sqrt_minus_anchor / r).real() < 0.0) r = -r;
        s.sqrt_a0.push_back(r);
    }
    s.S.resize(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            s.S(i, j) = i < ld.ell ? ld.condition.Cprime(i, j) / s.sqrt_a0[static_cast<std::size_t>(j)]
                                   : ld.condition.C(i, j);
    return s;
}

SMatrix build_smatrix(const LimitingDomain& ld, const ModelVertexData& v, const Sector& sector,
                      const Tolerances& tol) {
    for (cplx d : v.directions)
        if (sector.meets_ray(d))
            throw Error(ErrorCode::SectorHitsBackgroundSpectrum, "a background ray meets the sector");
    return build_smatrix_at(ld, v, sector.bisector_unit(), tol);
}

std::string_view to_string(VertexFailure f) {
    switch (f) {
        case VertexFailure::None: return "None";
        case VertexFailure::SectorHitsBackgroundSpectrum: return "SectorHitsBackgroundSpectrum";
        case VertexFailure::DeterminantNearZero: return "DeterminantNearZero";
    }
    return "?";
}

VertexVerdict vertex_minimal_growth(const CouplingCondition& cc, const ModelVertexData& v, const Sector& sector,
                                    const Tolerances& tol) {
    if (!admissible(cc, tol))
        throw Error(ErrorCode::InvalidInput, "coupling at vertex " + std::to_string(cc.vertex) + " is not admissible");
    VertexVerdict out;
    out.limit = limiting_domain(cc, tol);
    if (std::any_of(v.directions.begin(), v.directions.end(), [&](cplx d) { return sector.meets_ray(d); })) {
        out.failure = VertexFailure::SectorHitsBackgroundSpectrum;
        return out;
    }
    out.smatrix = build_smatrix(out.limit, v, sector, tol);
    out.det = out.smatrix->S.partialPivLu().determinant();
    out.det_scale = linalg::row_norm_product(out.smatrix->S);
    out.certified = std::abs(out.det) > tol.smatrix_det_rel * out.det_scale;
    if (!out.certified) out.failure = VertexFailure::DeterminantNearZero;
    return out;
}

}  // namespace qgs
