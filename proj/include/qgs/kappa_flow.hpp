#pragma once

#include <optional>
#include <vector>

#include "qgs/common.hpp"
#include "qgs/coupling.hpp"
#include "qgs/model_operator.hpp"
#include "qgs/sector.hpp"

namespace qgs {

// Limit of the dilation flow: (0 | C1' ; C2 | 0) with C1' of full row rank ell.
struct LimitingDomain {
    int ell = 0;
    CouplingCondition condition;
};

struct SMatrix {
    CMatrix S;
    int ell = 0;
    cplx anchor;                 // lambda_0, unit vector on the sector bisector
    cplx sqrt_minus_anchor;      // principal sqrt(-lambda_0)
    std::vector<cplx> sqrt_a0;   // branches with Re(sqrt(-lambda_0) / sqrt(a_j)) > 0
};

// (C | rho^{-1} C'): the condition of the dilated domain.
CouplingCondition kappa_act(const CouplingCondition& cc, double rho);

// coeff * e^{-mu x} on a half-line. The family is closed under the dilations and
// under a D_x^2 - lambda, which makes it a convenient witness for homogeneity.
struct ExpMode {
    cplx coeff = 1.0;
    cplx mu = 1.0;

    cplx operator()(double x) const { return coeff * std::exp(-mu * x); }
};

// rho^{1/2} u(rho x)
ExpMode kappa_act(const ExpMode& u, double rho);
// (a0 D_x^2 - lambda) u with D_x = -i d/dx
ExpMode model_apply(const ExpMode& u, cplx a0, cplx lambda);

LimitingDomain limiting_domain(const CouplingCondition& cc, const Tolerances& tol = {});

// Spectral norm of the difference of the row-space projectors.
double grassmann_distance(const CouplingCondition& a, const CouplingCondition& b, const Tolerances& tol = {});

SMatrix build_smatrix(const LimitingDomain& ld, const ModelVertexData& v, const Sector& sector,
                      const Tolerances& tol = {});

// Same construction with the anchor at an arbitrary point of the sector.
SMatrix build_smatrix_at(const LimitingDomain& ld, const ModelVertexData& v, cplx anchor,
                         const Tolerances& tol = {});

enum class VertexFailure { None, SectorHitsBackgroundSpectrum, DeterminantNearZero };

std::string_view to_string(VertexFailure f);

struct VertexVerdict {
    bool certified = false;
    VertexFailure failure = VertexFailure::None;
    cplx det;
    double det_scale = 0.0;  // product of row norms of S
    LimitingDomain limit;
    std::optional<SMatrix> smatrix;
};

VertexVerdict vertex_minimal_growth(const CouplingCondition& cc, const ModelVertexData& v, const Sector& sector,
                                    const Tolerances& tol = {});

}  // namespace qgs
