#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "qgs/common.hpp"
#include "qgs/coupling.hpp"
#include "qgs/graph.hpp"
#include "qgs/sector.hpp"

namespace qgs {

// Frozen leading coefficients a_q(0) of the half-line model operator at one vertex.
struct ModelVertexData {
    int vertex = 0;
    std::vector<cplx> a0;          // per endpoint, vertex order
    std::vector<cplx> directions;  // distinct a0/|a0|, sorted by argument in [0, 2pi)
    std::vector<int> group_of;     // endpoint index -> direction index

    static ModelVertexData from_coefficients(int vertex, std::vector<cplx> a0, const Tolerances& tol = {});
    static ModelVertexData from_graph(const Graph& g, int vertex_id, const Tolerances& tol = {});

    int k() const { return static_cast<int>(a0.size()); }
    int n() const { return static_cast<int>(directions.size()); }
    bool on_background_ray(cplx lambda, const Tolerances& tol = {}) const;
};

// w with w^2 = -lambda / a and Re w > 0.
cplx principal_root(cplx lambda, cplx a, const Tolerances& tol = {});

// Diagonal of Delta(lambda): principal roots sqrt(-lambda / a_q(0)).
CVector delta_diagonal(const ModelVertexData& v, cplx lambda, const Tolerances& tol = {});

std::vector<cplx> background_spectrum(const ModelVertexData& v);

// Components Lambda_1..Lambda_n of the background resolvent set; the last wraps past 2pi.
std::vector<OpenSector> bgres_sectors(const ModelVertexData& v);

// On an open sector inside bgres, sqrt(-lambda / a_q(0)) = w(-lambda) * t_q with a
// holomorphic square root w fixed by continuity from the bisector.
struct SectorBranch {
    OpenSector sector;
    std::vector<cplx> t;  // per endpoint

    static SectorBranch build(const ModelVertexData& v, const OpenSector& sector, const Tolerances& tol = {});
    // w(-lambda) for lambda in the sector.
    cplx w(cplx lambda) const;
    cplx lambda_of(cplx w) const { return -w * w; }
    // Does w lie on this branch (i.e. equal w(-lambda(w)) with lambda in the sector)?
    bool on_branch(cplx w, double angle_tol) const;
};

enum class Membership { InBgSpec, Eigenvalue, Resolvent };

std::string_view to_string(Membership m);

struct MembershipResult {
    Membership verdict = Membership::Resolvent;
    cplx det;      // det(C - C' Delta(lambda)); zero when InBgSpec
    double scale = 1.0;  // prod_j max(1, row norm j)
};

MembershipResult spectrum_membership(const ModelVertexData& v, const CouplingCondition& cc, cplx lambda,
                                     const Tolerances& tol = {});

// Null vector alpha of C - C' Delta(lambda) (right singular vector of the smallest singular value).
CVector eigen_witness(const ModelVertexData& v, const CouplingCondition& cc, cplx lambda,
                      const Tolerances& tol = {});

enum class SpectrumKind { Empty, Point, Whole, Unknown };

std::string_view to_string(SpectrumKind k);

struct DeltaSpectrum {
    SpectrumKind kind = SpectrumKind::Empty;
    cplx lambda;  // when kind == Point
};

// Exact classification of an open sector for delta-type conditions.
DeltaSpectrum delta_spectrum(const ModelVertexData& v, cplx nu, std::span<const cplx> cprime,
                             const OpenSector& sector, const Tolerances& tol = {});

// Entry (l, j) = epsilon_j(Lambda_l), evaluated from the sign function at sector bisectors.
Eigen::MatrixXi epsilon_matrix(const ModelVertexData& v);

// Branches sqrt(a^0_j) used by the sign functions (epsilon_j = 1 on Lambda_j).
std::vector<cplx> sign_function_roots(const ModelVertexData& v);

struct CouplingDesign {
    CouplingCondition condition;  // delta type, nu = 0
    Eigen::VectorXcd y;           // sign-system solution
    std::vector<cplx> d;          // d_j = y_j sqrt(a^0_j)
    std::vector<cplx> cprime;
};

// Delta-type condition (nu = 0) whose model spectrum is the background spectrum
// plus exactly the sectors listed in `target` (0-based indices into bgres_sectors).
// Verified by sampling; throws VerificationFailed otherwise.
CouplingDesign design_coupling(const ModelVertexData& v, const std::set<int>& target,
                               const Tolerances& tol = {});

// Identification of singular coordinates with model coordinates (alpha, beta) -> (alpha, beta).
SingularCoordinates theta_p(const SingularCoordinates& u);

// Newton on det(C - C' Delta) in the square-root variable w of the sector.
std::optional<cplx> polish_eigenvalue(const ModelVertexData& v, const CouplingCondition& cc,
                                      const OpenSector& sector, cplx lambda_start, const Tolerances& tol = {});

struct SectorSpectrum {
    SpectrumKind kind = SpectrumKind::Unknown;
    std::vector<cplx> eigenvalues;  // when kind == Point
    int eigen_samples = 0;
    int samples = 0;
};

// Sampled classification of one sector for an arbitrary admissible coupling.
SectorSpectrum sample_sector_spectrum(const ModelVertexData& v, const CouplingCondition& cc,
                                      const OpenSector& sector, const Tolerances& tol = {});

}  // namespace qgs
