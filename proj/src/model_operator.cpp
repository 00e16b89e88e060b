#include "qgs/model_operator.hpp"

#include <algorithm>
#include <cmath>

#include "qgs/linalg.hpp"

namespace qgs {

ModelVertexData ModelVertexData::from_coefficients(int vertex, std::vector<cplx> a0, const Tolerances& tol) {
    ModelVertexData v;
    v.vertex = vertex;
    v.a0 = std::move(a0);
    std::vector<double> angles;
    for (cplx a : v.a0) {
        if (a == cplx(0.0) || !is_finite(a))
            throw Error(ErrorCode::EllipticityViolation, "leading coefficient must be finite and nonzero");
        angles.push_back(arg_2pi(a));
    }
    std::vector<double> sorted = angles;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> distinct;
    for (double a : sorted)
        if (distinct.empty() || a - distinct.back() > tol.angle) distinct.push_back(a);
    // directions just below 2pi coincide with those at 0
    if (distinct.size() > 1 && distinct.front() + kTwoPi - distinct.back() <= tol.angle) distinct.pop_back();

    for (double a : distinct) v.directions.push_back(std::polar(1.0, a));
    for (double a : angles) {
        int best = 0;
        double best_d = kTwoPi;
        for (std::size_t j = 0; j < distinct.size(); ++j) {
            double d = std::abs(wrap_pi(a - distinct[j]));
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        v.group_of.push_back(best);
    }
    return v;
}

ModelVertexData ModelVertexData::from_graph(const Graph& g, int vertex_id, const Tolerances& tol) {
    std::vector<cplx> a0;
    for (const auto& ep : g.vertex(vertex_id).endpoints) a0.push_back(endpoint_local_data(g.edge(ep.edge), ep.side).a0);
    return from_coefficients(vertex_id, std::move(a0), tol);
}

bool ModelVertexData::on_background_ray(cplx lambda, const Tolerances& tol) const {
    if (lambda == cplx(0.0)) return true;
    return std::any_of(directions.begin(), directions.end(), [&](cplx d) {
        return std::abs(wrap_pi(std::arg(lambda) - std::arg(d))) <= tol.angle;
    });
}

cplx principal_root(cplx lambda, cplx a, const Tolerances& tol) {
    if (a == cplx(0.0)) throw Error(ErrorCode::EllipticityViolation, "a = 0");
    if (lambda == cplx(0.0) || std::abs(wrap_pi(std::arg(lambda) - std::arg(a))) <= tol.angle)
        throw Error(ErrorCode::OnBackgroundRay, "lambda lies on the ray a * [0, inf)");
    // -lambda/a is off the closed negative half-axis, so the principal root has Re > 0
    return std::sqrt(-lambda / a);
}

CVector delta_diagonal(const ModelVertexData& v, cplx lambda, const Tolerances& tol) {
    CVector d(v.k());
    for (int q = 0; q < v.k(); ++q) d(q) = principal_root(lambda, v.a0[static_cast<std::size_t>(q)], tol);
    return d;
}

std::vector<cplx> background_spectrum(const ModelVertexData& v) { return v.directions; }

std::vector<OpenSector> bgres_sectors(const ModelVertexData& v) {
    std::vector<OpenSector> out;
    const int n = v.n();
    for (int j = 0; j < n; ++j) {
        double lo = arg_2pi(v.directions[static_cast<std::size_t>(j)]);
        double hi = j + 1 < n ? arg_2pi(v.directions[static_cast<std::size_t>(j + 1)])
                              : arg_2pi(v.directions.front()) + kTwoPi;
        out.push_back({lo, hi});
    }
    return out;
}

SectorBranch SectorBranch::build(const ModelVertexData& v, const OpenSector& sector, const Tolerances& tol) {
    SectorBranch b;
    b.sector = sector;
    const cplx lb = sector.bisector_unit();
    const cplx wb = b.w(lb);
    for (cplx a : v.a0) b.t.push_back(principal_root(lb, a, tol) / wb);
    return b;
}

cplx SectorBranch::w(cplx lambda) const {
    double phi = sector.angle_low + normalize_2pi(std::arg(lambda) - sector.angle_low);
    return std::polar(std::sqrt(std::abs(lambda)), 0.5 * (phi + kPi));
}

bool SectorBranch::on_branch(cplx wv, double angle_tol) const {
    cplx lambda = lambda_of(wv);
    if (!sector.contains(lambda, angle_tol)) return false;
    return (wv * std::conj(w(lambda))).real() > 0.0;
}

std::string_view to_string(Membership m) {
    switch (m) {
        case Membership::InBgSpec: return "InBgSpec";
        case Membership::Eigenvalue: return "Eigenvalue";
        case Membership::Resolvent: return "Resolvent";
    }
    return "?";
}

std::string_view to_string(SpectrumKind k) {
    switch (k) {
        case SpectrumKind::Empty: return "Empty";
        case SpectrumKind::Point: return "Point";
        case SpectrumKind::Whole: return "Whole";
        case SpectrumKind::Unknown: return "Unknown";
    }
    return "?";
}

namespace {

CMatrix shifted_matrix(const CouplingCondition& cc, const CVector& diag) {
    return cc.C - cc.Cprime * diag.asDiagonal();
}

}  // namespace

MembershipResult spectrum_membership(const ModelVertexData& v, const CouplingCondition& cc, cplx lambda,
                                     const Tolerances& tol) {
    check_dimensions(cc);
    if (cc.k() != v.k()) throw Error(ErrorCode::DimensionMismatch, "coupling size differs from vertex degree");
    MembershipResult r;
    if (v.on_background_ray(lambda, tol)) {
        r.verdict = Membership::InBgSpec;
        r.det = 0.0;
        return r;
    }
    const CMatrix m = shifted_matrix(cc, delta_diagonal(v, lambda, tol));
    r.det = m.partialPivLu().determinant();
    r.scale = linalg::row_norm_product(m, 1.0);
    r.verdict = std::abs(r.det) <= tol.eigen_det_rel * r.scale ? Membership::Eigenvalue : Membership::Resolvent;
    return r;
}

CVector eigen_witness(const ModelVertexData& v, const CouplingCondition& cc, cplx lambda, const Tolerances& tol) {
    const CMatrix m = shifted_matrix(cc, delta_diagonal(v, lambda, tol));
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().col(m.cols() - 1);
}

DeltaSpectrum delta_spectrum(const ModelVertexData& v, cplx nu, std::span<const cplx> cprime,
                             const OpenSector& sector, const Tolerances& tol) {
    if (static_cast<int>(cprime.size()) != v.k())
        throw Error(ErrorCode::DimensionMismatch, "cprime must have one entry per endpoint");
    if (nu == cplx(0.0) && std::all_of(cprime.begin(), cprime.end(), [](cplx c) { return c == cplx(0.0); }))
        throw Error(ErrorCode::AllZeroParameters, "(nu, cprime) must not vanish");
    if (!(sector.width() > 0.0 && sector.width() <= kTwoPi + tol.angle))
        throw Error(ErrorCode::InvalidSector, "sector width must lie in (0, 2pi]");
    for (cplx d : v.directions)
        if (sector.contains_direction(d, tol.angle))
            throw Error(ErrorCode::InvalidSector, "sector meets the background spectrum");

    const auto branch = SectorBranch::build(v, sector, tol);
    // over the sector the eigenvalue equation reads w(-lambda) * sum = nu
    cplx sum = 0.0;
    double mag = 0.0;
    for (int q = 0; q < v.k(); ++q) {
        cplx term = cprime[static_cast<std::size_t>(q)] * branch.t[static_cast<std::size_t>(q)];
        sum += term;
        mag += std::abs(term);
    }
    DeltaSpectrum out;
    if (std::abs(sum) <= 1e-12 * mag || mag == 0.0) {
        out.kind = nu == cplx(0.0) ? SpectrumKind::Whole : SpectrumKind::Empty;
        return out;
    }
    if (nu == cplx(0.0)) return out;  // w = 0 is not in the open sector
    const cplx w = nu / sum;
    if (branch.on_branch(w, 0.0)) {
        out.kind = SpectrumKind::Point;
        out.lambda = -(nu * nu) / (sum * sum);
    }
    return out;
}

std::vector<cplx> sign_function_roots(const ModelVertexData& v) {
    const auto sectors = bgres_sectors(v);
    std::vector<cplx> roots(static_cast<std::size_t>(v.n()));
    const cplx a1 = v.directions.front();
    roots[0] = std::sqrt(a1);
    for (int j = 1; j < v.n(); ++j) {
        const cplx lb = sectors[static_cast<std::size_t>(j)].bisector_unit();
        const cplx aj = v.directions[static_cast<std::size_t>(j)];
        roots[static_cast<std::size_t>(j)] = roots[0] * std::sqrt(-lb / a1) / std::sqrt(-lb / aj);
    }
    return roots;
}

Eigen::MatrixXi epsilon_matrix(const ModelVertexData& v) {
    const int n = v.n();
    const auto sectors = bgres_sectors(v);
    const auto roots = sign_function_roots(v);
    const cplx a1 = v.directions.front();
    Eigen::MatrixXi e(n, n);
    for (int l = 0; l < n; ++l) {
        const cplx lb = sectors[static_cast<std::size_t>(l)].bisector_unit();
        const cplx base = roots[0] * std::sqrt(-lb / a1);
        for (int j = 0; j < n; ++j) {
            const cplx aj = v.directions[static_cast<std::size_t>(j)];
            const cplx eps = roots[static_cast<std::size_t>(j)] * std::sqrt(-lb / aj) / base;
            e(l, j) = eps.real() > 0.0 ? 1 : -1;
        }
    }
    return e;
}

CouplingDesign design_coupling(const ModelVertexData& v, const std::set<int>& target, const Tolerances& tol) {
    const int n = v.n();
    const int k = v.k();
    for (int t : target)
        if (t < 0 || t >= n)
            throw Error(ErrorCode::InvalidTarget, "sector index " + std::to_string(t + 1) + " out of range");
    if (static_cast<int>(target.size()) >= k)
        throw Error(ErrorCode::TargetTooLarge, "need fewer target sectors than endpoints at the vertex");

    CouplingDesign out;
    const CMatrix eps = epsilon_matrix(v).cast<cplx>();
    CVector rhs(n);
    for (int l = 0; l < n; ++l) rhs(l) = target.contains(l) ? 0.0 : 1.0;
    out.y = eps.partialPivLu().solve(rhs);

    const auto roots = sign_function_roots(v);
    out.cprime.assign(static_cast<std::size_t>(k), cplx(0.0));
    for (int j = 0; j < n; ++j) {
        out.d.push_back(out.y(j) * roots[static_cast<std::size_t>(j)]);
        // one representative endpoint per direction group carries the whole group sum
        for (int q = 0; q < k; ++q)
            if (v.group_of[static_cast<std::size_t>(q)] == j) {
                out.cprime[static_cast<std::size_t>(q)] = out.d.back() * std::sqrt(std::abs(v.a0[static_cast<std::size_t>(q)]));
                break;
            }
    }
    if (std::all_of(out.cprime.begin(), out.cprime.end(), [](cplx c) { return c == cplx(0.0); })) {
        // every group sum must vanish: cancel inside a group with two endpoints
        for (int j = 0; j < n; ++j) {
            std::vector<int> members;
            for (int q = 0; q < k; ++q)
                if (v.group_of[static_cast<std::size_t>(q)] == j) members.push_back(q);
            if (members.size() < 2) continue;
            auto q1 = static_cast<std::size_t>(members[0]);
            auto q2 = static_cast<std::size_t>(members[1]);
            out.cprime[q1] = std::sqrt(std::abs(v.a0[q1]));
            out.cprime[q2] = -std::sqrt(std::abs(v.a0[q2]));
            break;
        }
    }
    if (std::all_of(out.cprime.begin(), out.cprime.end(), [](cplx c) { return c == cplx(0.0); }))
        throw Error(ErrorCode::VerificationFailed, "no nonzero cprime realizes the target");

    out.condition = delta_type(k, 0.0, out.cprime, v.vertex);

    const auto sectors = bgres_sectors(v);
    for (int l = 0; l < n; ++l) {
        const Membership expected = target.contains(l) ? Membership::Eigenvalue : Membership::Resolvent;
        for (cplx lambda : sectors[static_cast<std::size_t>(l)].interior_samples(5))
            if (spectrum_membership(v, out.condition, lambda, tol).verdict != expected)
                throw Error(ErrorCode::VerificationFailed,
                            "designed coupling does not realize the pattern on sector " + std::to_string(l + 1));
    }
    return out;
}

SingularCoordinates theta_p(const SingularCoordinates& u) { return u; }

namespace {

// Coefficients of P(w) = det(C - w C' diag(t)) by interpolation on the unit circle.
std::vector<cplx> det_polynomial(const CouplingCondition& cc, const std::vector<cplx>& t) {
    const int k = cc.k();
    CVector tv(k);
    for (int q = 0; q < k; ++q) tv(q) = t[static_cast<std::size_t>(q)];
    const CMatrix ct = cc.Cprime * tv.asDiagonal();
    const int m = k + 1;
    std::vector<cplx> values(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        cplx w = std::polar(1.0, kTwoPi * j / m);
        values[static_cast<std::size_t>(j)] = CMatrix(cc.C - w * ct).partialPivLu().determinant();
    }
    std::vector<cplx> coeffs(static_cast<std::size_t>(m));
    for (int p = 0; p < m; ++p) {
        cplx acc = 0.0;
        for (int j = 0; j < m; ++j) acc += values[static_cast<std::size_t>(j)] * std::polar(1.0, -kTwoPi * j * p / m);
        coeffs[static_cast<std::size_t>(p)] = acc / static_cast<double>(m);
    }
    // interpolation noise would otherwise seed spurious roots near w = 0
    double big = 0.0;
    for (cplx c : coeffs) big = std::max(big, std::abs(c));
    for (cplx& c : coeffs)
        if (std::abs(c) <= 1e-13 * big) c = 0.0;
    return coeffs;
}

std::vector<cplx> polynomial_roots(const std::vector<cplx>& coeffs) {
    double big = 0.0;
    for (cplx c : coeffs) big = std::max(big, std::abs(c));
    int deg = static_cast<int>(coeffs.size()) - 1;
    while (deg > 0 && std::abs(coeffs[static_cast<std::size_t>(deg)]) <= 1e-13 * big) --deg;
    if (deg <= 0) return {};
    CMatrix comp = CMatrix::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        comp(i, deg - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs[static_cast<std::size_t>(deg)];
    Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + deg);
    return out;
}

std::optional<cplx> newton_in_w(const ModelVertexData& v, const CouplingCondition& cc, const SectorBranch& branch,
                                const std::vector<cplx>& coeffs, cplx w, const Tolerances& tol) {
    auto eval = [&](cplx z, cplx& dp, double& mag) {
        cplx p = 0.0;
        dp = 0.0;
        mag = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
            dp = dp * z + p;
            p = p * z + *it;
            mag = mag * std::abs(z) + std::abs(*it);
        }
        return p;
    };
    bool converged = false;
    for (int it = 0; it < tol.newton_iterations && !converged; ++it) {
        cplx dp;
        double mag = 0.0;
        cplx p = eval(w, dp, mag);
        if (std::abs(p) <= tol.newton_residual * mag) {
            converged = true;
            break;
        }
        if (dp == cplx(0.0)) return std::nullopt;
        cplx step = p / dp;
        w -= step;
        if (!is_finite(w)) return std::nullopt;
        converged = std::abs(step) <= 1e-15 * std::abs(w);
    }
    if (!converged) return std::nullopt;
    // w -> 0 is the sector apex; dilation-invariant conditions have P(w) = c w^ell and Newton creeps there
    if (std::abs(w) <= 1e-6) return std::nullopt;
    if (!branch.on_branch(w, tol.angle)) return std::nullopt;
    const cplx lambda = branch.lambda_of(w);
    if (v.on_background_ray(lambda, tol)) return std::nullopt;
    if (spectrum_membership(v, cc, lambda, tol).verdict != Membership::Eigenvalue) return std::nullopt;
    return lambda;
}

void push_unique(std::vector<cplx>& list, cplx z) {
    for (cplx e : list)
        if (std::abs(e - z) <= 1e-8 * std::max(1.0, std::abs(z))) return;
    list.push_back(z);
}

}  // namespace

std::optional<cplx> polish_eigenvalue(const ModelVertexData& v, const CouplingCondition& cc,
                                      const OpenSector& sector, cplx lambda_start, const Tolerances& tol) {
    const auto branch = SectorBranch::build(v, sector, tol);
    const auto coeffs = det_polynomial(cc, branch.t);
    return newton_in_w(v, cc, branch, coeffs, branch.w(lambda_start), tol);
}

SectorSpectrum sample_sector_spectrum(const ModelVertexData& v, const CouplingCondition& cc,
                                      const OpenSector& sector, const Tolerances& tol) {
    SectorSpectrum out;
    const auto samples = sector.interior_samples(tol.samples_per_sector);
    out.samples = static_cast<int>(samples.size());
    std::vector<cplx> flagged;
    for (cplx lambda : samples)
        if (spectrum_membership(v, cc, lambda, tol).verdict == Membership::Eigenvalue) flagged.push_back(lambda);
    out.eigen_samples = static_cast<int>(flagged.size());
    if (out.eigen_samples == out.samples) {
        out.kind = SpectrumKind::Whole;
        return out;
    }

    const auto branch = SectorBranch::build(v, sector, tol);
    const auto coeffs = det_polynomial(cc, branch.t);
    std::vector<cplx> starts;
    for (cplx lambda : samples) starts.push_back(branch.w(lambda));
    for (cplx r : polynomial_roots(coeffs)) starts.push_back(r);
    for (cplx w0 : starts)
        if (auto lambda = newton_in_w(v, cc, branch, coeffs, w0, tol)) push_unique(out.eigenvalues, *lambda);
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });

    // flagged samples must be explained by the polished eigenvalues
    bool explained = std::all_of(flagged.begin(), flagged.end(), [&](cplx s) {
        return std::any_of(out.eigenvalues.begin(), out.eigenvalues.end(),
                           [&](cplx e) { return std::abs(e - s) <= 1e-6 * std::max(1.0, std::abs(s)); });
    });
    if (!explained)
        out.kind = SpectrumKind::Unknown;
    else if (!out.eigenvalues.empty())
        out.kind = SpectrumKind::Point;
    else
        out.kind = SpectrumKind::Empty;
    return out;
}

}  // namespace qgs
