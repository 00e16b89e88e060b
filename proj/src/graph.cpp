#include "qgs/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qgs {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::EllipticityViolation: return "EllipticityViolation";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::AllZeroParameters: return "AllZeroParameters";
        case ErrorCode::OnBackgroundRay: return "OnBackgroundRay";
        case ErrorCode::InvalidSector: return "InvalidSector";
        case ErrorCode::InvalidTarget: return "InvalidTarget";
        case ErrorCode::TargetTooLarge: return "TargetTooLarge";
        case ErrorCode::VerificationFailed: return "VerificationFailed";
        case ErrorCode::NonpositiveRho: return "NonpositiveRho";
        case ErrorCode::RankDeficient: return "RankDeficient";
        case ErrorCode::SectorHitsBackgroundSpectrum: return "SectorHitsBackgroundSpectrum";
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::SingularPotentialUnsupported: return "SingularPotentialUnsupported";
        case ErrorCode::SingularBoundarySystem: return "SingularBoundarySystem";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

cplx Polynomial::operator()(cplx s) const {
    cplx acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return {};
    std::vector<cplx> d(coeffs_.size() - 1);
    for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<double>(i);
    return Polynomial(std::move(d));
}

bool Polynomial::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx(0.0); });
}

std::string to_string(const EndpointId& e) {
    return "e" + std::to_string(e.edge) + (e.side == Side::plus ? "+" : "-");
}

const Edge& Graph::edge(int id) const {
    for (const auto& e : edges)
        if (e.id == id) return e;
    throw Error(ErrorCode::InvalidInput, "no edge with id " + std::to_string(id));
}

const Vertex& Graph::vertex(int id) const {
    for (const auto& v : vertices)
        if (v.id == id) return v;
    throw Error(ErrorCode::InvalidInput, "no vertex with id " + std::to_string(id));
}

EndpointLocalData endpoint_local_data(const Edge& edge, Side side) {
    const double s = side == Side::plus ? 1.0 : -1.0;
    EndpointLocalData d;
    d.a0 = edge.a(s);
    if (d.a0 == cplx(0.0))
        throw Error(ErrorCode::EllipticityViolation,
                    "a vanishes at endpoint of edge " + std::to_string(edge.id));
    // (1-s)(1+s) = x (2 - x) in either linear chart
    d.c0 = edge.c(s) / 2.0;
    d.log_slope = d.c0 / d.a0;
    return d;
}

namespace {

std::vector<double> chebyshev_lobatto(int n) {
    std::vector<double> s(static_cast<std::size_t>(n));
    if (n == 1) {
        s[0] = 0.0;
        return s;
    }
    for (int k = 0; k < n; ++k) s[static_cast<std::size_t>(k)] = -std::cos(kPi * k / (n - 1));
    s.front() = -1.0;
    s.back() = 1.0;
    return s;
}

// Newton on the complex polynomial from a real start; returns a real root in
// [-1, 1] if the iteration lands on one.
std::optional<double> polish_real_zero(const Polynomial& p, const Polynomial& dp, double start,
                                       double scale, double zero_tol) {
    cplx z = start;
    for (int it = 0; it < 60; ++it) {
        cplx d = dp(z);
        if (d == cplx(0.0)) break;
        cplx step = p(z) / d;
        z -= step;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (!is_finite(z) || std::abs(z.imag()) > 1e-9 || z.real() < -1.0 - 1e-12 || z.real() > 1.0 + 1e-12)
        return std::nullopt;
    double s = std::clamp(z.real(), -1.0, 1.0);
    if (std::abs(p(s)) <= zero_tol * scale) return s;
    return std::nullopt;
}

}  // namespace

EllipticityResult ellipticity_check(const Edge& edge, const std::optional<Sector>& sector,
                                    const Tolerances& tol) {
    EllipticityResult r;
    const auto samples = chebyshev_lobatto(std::max(2, tol.ellipticity_samples));
    std::vector<cplx> values(samples.size());
    double scale = 1.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        values[i] = edge.a(samples[i]);
        scale = std::max(scale, std::abs(values[i]));
    }

    auto fail = [&](double s, std::string reason) {
        r.pass = false;
        r.witness_s = s;
        r.witness_value = edge.a(s);
        r.reason = std::move(reason);
        return r;
    };

    // zero test: samples first, then Newton-polished local minima of |a|
    std::size_t imin = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (std::abs(values[i]) < std::abs(values[imin])) imin = i;
    if (std::abs(values[imin]) <= tol.ellipticity_zero * scale) return fail(samples[imin], "zero");

    const Polynomial da = edge.a.derivative();
    for (std::size_t i = 0; i < values.size(); ++i) {
        double m = std::abs(values[i]);
        bool left = i == 0 || m <= std::abs(values[i - 1]);
        bool right = i + 1 == values.size() || m <= std::abs(values[i + 1]);
        if (!(left && right)) continue;
        if (auto s = polish_real_zero(edge.a, da, samples[i], scale, tol.ellipticity_zero))
            return fail(*s, "zero");
    }

    if (sector) {
        // witness: the violating sample closest in angle to the bisector
        std::optional<std::size_t> best;
        double best_dist = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!sector->contains(values[i])) continue;
            double d = std::abs(wrap_pi(std::arg(values[i]) - sector->bisector_angle));
            if (!best || d < best_dist) {
                best = i;
                best_dist = d;
            }
        }
        if (best) return fail(samples[*best], "in_sector");
    }
    return r;
}

std::string_view to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::DuplicateEndpoint: return "DuplicateEndpoint";
        case ViolationKind::MissingEndpoint: return "MissingEndpoint";
        case ViolationKind::UnknownEdge: return "UnknownEdge";
        case ViolationKind::DuplicateEdgeId: return "DuplicateEdgeId";
        case ViolationKind::DuplicateVertexId: return "DuplicateVertexId";
        case ViolationKind::EmptyVertex: return "EmptyVertex";
        case ViolationKind::EllipticityViolation: return "EllipticityViolation";
        case ViolationKind::NonFiniteCoefficient: return "NonFiniteCoefficient";
    }
    return "Unknown";
}

std::vector<Violation> validate_graph(const Graph& g, const Tolerances& tol) {
    std::vector<Violation> out;
    std::set<int> edge_ids;
    for (const auto& e : g.edges) {
        if (!edge_ids.insert(e.id).second)
            out.push_back({ViolationKind::DuplicateEdgeId, "edge id " + std::to_string(e.id), {}});
        bool finite = true;
        for (const auto* p : {&e.a, &e.b, &e.c})
            finite = finite && std::all_of(p->coeffs().begin(), p->coeffs().end(),
                                           [](cplx c) { return is_finite(c); });
        if (!finite) {
            out.push_back({ViolationKind::NonFiniteCoefficient, "edge " + std::to_string(e.id), {}});
            continue;
        }
        auto ell = ellipticity_check(e, std::nullopt, tol);
        if (!ell.pass)
            out.push_back({ViolationKind::EllipticityViolation,
                           "edge " + std::to_string(e.id) + ": a(s) = 0", ell.witness_s});
    }

    std::set<int> vertex_ids;
    std::map<EndpointId, int> seen;
    for (const auto& v : g.vertices) {
        if (!vertex_ids.insert(v.id).second)
            out.push_back({ViolationKind::DuplicateVertexId, "vertex id " + std::to_string(v.id), {}});
        if (v.endpoints.empty())
            out.push_back({ViolationKind::EmptyVertex, "vertex " + std::to_string(v.id), {}});
        for (const auto& ep : v.endpoints) {
            if (!edge_ids.contains(ep.edge)) {
                out.push_back({ViolationKind::UnknownEdge,
                               to_string(ep) + " at vertex " + std::to_string(v.id), {}});
                continue;
            }
            if (++seen[ep] == 2)
                out.push_back({ViolationKind::DuplicateEndpoint, to_string(ep), {}});
        }
    }
    for (int id : edge_ids)
        for (Side side : {Side::minus, Side::plus}) {
            EndpointId ep{id, side};
            if (!seen.contains(ep)) out.push_back({ViolationKind::MissingEndpoint, to_string(ep), {}});
        }
    return out;
}

}  // namespace qgs
