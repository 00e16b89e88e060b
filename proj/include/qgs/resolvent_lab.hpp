#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Sparse>

#include "qgs/common.hpp"
#include "qgs/coupling.hpp"
#include "qgs/graph.hpp"
#include "qgs/model_operator.hpp"

namespace qgs {

using SparseCMatrix = Eigen::SparseMatrix<cplx>;

// Finite-difference realization of A with coupling conditions on a graph whose
// potentials vanish. Each edge carries n uniform nodes including both ends.
struct Discretization {
    int n_per_edge = 0;
    double h = 0.0;
    std::vector<int> edge_ids;
    std::vector<int> edge_offset;  // first unknown of each edge

    // Square system: interior rows (A u) followed by unit-norm coupling rows.
    SparseCMatrix system;
    std::vector<int> interior_rows;     // rows of `system` that receive the -lambda shift
    std::vector<int> interior_unknowns; // matching unknown per interior row
    int constraint_rows = 0;

    // A restricted to interior unknowns after eliminating endpoint values
    // through the coupling conditions.
    CMatrix reduced;

    int size() const { return static_cast<int>(system.rows()); }
};

Discretization discretize(const Graph& g, const GraphCoupling& gc, int n_per_edge, const Tolerances& tol = {});

// sigma_min(reduced - lambda I): reciprocal of the discrete resolvent norm.
double smallest_singular_value(const Discretization& d, cplx lambda);

// sigma_min of the full constrained square system shifted on interior rows.
double constrained_smallest_singular_value(const Discretization& d, cplx lambda);

// Eigenvalues of the reduced operator (dense; for tests and small grids).
std::vector<cplx> discrete_eigenvalues(const Discretization& d);

struct SweepPoint {
    double r = 0.0;
    cplx lambda;
    double sigma_min = 0.0;
    double resolvent_norm = 0.0;   // 1 / sigma_min
    double r_times_resnorm = 0.0;
};

struct SweepResult {
    double theta = 0.0;
    std::vector<SweepPoint> points;  // r strictly increasing
};

// lambda = r e^{i theta}; the lambda-points are evaluated in parallel.
SweepResult sweep_ray(const Discretization& d, double theta, std::span<const double> r_values);
// Serial reference of sweep_ray.
SweepResult sweep_ray_serial(const Discretization& d, double theta, std::span<const double> r_values);

std::vector<double> log_spaced(double lo, double hi, int count);

enum class Decay { Decay, NoDecay, Inconclusive };

std::string_view to_string(Decay d);

struct DecayVerdict {
    Decay verdict = Decay::Inconclusive;
    double slope = 0.0;  // least-squares log-log slope of the resolvent norm, top two decades
    double ratio = 0.0;  // max / min of r * |R| over the top two decades
};

DecayVerdict decay_verdict(const SweepResult& sr);

// CSV with header r,re_lambda,im_lambda,sigma_min,r_times_resnorm.
void write_csv(std::ostream& os, const SweepResult& sr);

struct TruncationOptions {
    std::vector<double> shift_radii{0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0};
    int krylov_dim = 30;
    // angle (rad); box modes of the cut-off half-lines sit within a few 1e-2 of the rays
    double ray_filter = 0.05;
};

// Eigenvalues of the model operator on [0, L]^k with Dirichlet ends at x = L,
// located by shift-invert Arnoldi; only those off the background rays are returned.
std::vector<cplx> truncated_model_eigenvalues(const ModelVertexData& v, const CouplingCondition& cc, double L,
                                              int n, const TruncationOptions& opts = {}, const Tolerances& tol = {});

}  // namespace qgs
