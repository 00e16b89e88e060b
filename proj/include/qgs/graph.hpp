#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgs/common.hpp"
#include "qgs/sector.hpp"

namespace qgs {

// Polynomial in s with complex coefficients in the monomial basis.
// An empty coefficient list is the zero polynomial.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {}
    static Polynomial constant(cplx c) { return Polynomial({c}); }

    cplx operator()(cplx s) const;
    Polynomial derivative() const;
    bool is_zero() const;
    const std::vector<cplx>& coeffs() const { return coeffs_; }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::vector<cplx> coeffs_;
};

// One edge E_j = [-1, 1] carrying a(s) D_s^2 + b(s) D_s + c(s) / ((1-s)(1+s)).
struct Edge {
    int id = 0;
    Polynomial a;
    Polynomial b;
    Polynomial c;

    friend bool operator==(const Edge&, const Edge&) = default;
};

enum class Side { minus, plus };

struct EndpointId {
    int edge = 0;
    Side side = Side::minus;

    friend auto operator<=>(const EndpointId&, const EndpointId&) = default;
};

std::string to_string(const EndpointId& e);

struct Vertex {
    int id = 0;
    std::vector<EndpointId> endpoints;  // order = column order of the coupling matrices

    int degree() const { return static_cast<int>(endpoints.size()); }
    friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Graph {
    std::vector<Edge> edges;
    std::vector<Vertex> vertices;

    const Edge& edge(int id) const;
    const Vertex& vertex(int id) const;
    int endpoint_count() const { return 2 * static_cast<int>(edges.size()); }

    friend bool operator==(const Graph&, const Graph&) = default;
};

// Coefficients of the operator in the chart x = 1 - s (plus end) or x = 1 + s
// (minus end): a0 = a_q(0), c0 = c_q(0), log_slope = c0 / a0.
struct EndpointLocalData {
    cplx a0;
    cplx c0;
    cplx log_slope;
};

// Asymptotic coordinates (alpha_q, beta_q) of u ~ alpha (1 + log_slope x log x) + beta x.
struct SingularCoordinates {
    CVector alpha;
    CVector beta;
};

EndpointLocalData endpoint_local_data(const Edge& edge, Side side);

struct EllipticityResult {
    bool pass = true;
    double witness_s = 0.0;  // meaningful only when !pass
    cplx witness_value;
    std::string reason;      // "zero" or "in_sector" on failure
};

// Sampling check of a(s) != 0 and, when a sector is given, a(s) not in it.
EllipticityResult ellipticity_check(const Edge& edge, const std::optional<Sector>& sector,
                                    const Tolerances& tol = {});

enum class ViolationKind {
    DuplicateEndpoint,
    MissingEndpoint,
    UnknownEdge,
    DuplicateEdgeId,
    DuplicateVertexId,
    EmptyVertex,
    EllipticityViolation,
    NonFiniteCoefficient,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
    ViolationKind kind;
    std::string detail;
    std::optional<double> witness_s;
};

std::vector<Violation> validate_graph(const Graph& g, const Tolerances& tol = {});

}  // namespace qgs
