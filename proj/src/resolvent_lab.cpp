#include "qgs/resolvent_lab.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "qgs/sector_analysis.hpp"

namespace qgs {

namespace {

struct EndpointStencil {
    int value = 0;     // unknown holding u at the endpoint
    int inward1 = 0;
    int inward2 = 0;
};

EndpointStencil stencil_for(const Discretization& d, std::size_t edge_pos, Side side) {
    const int off = d.edge_offset[edge_pos];
    const int n = d.n_per_edge;
    if (side == Side::minus) return {off, off + 1, off + 2};
    return {off + n - 1, off + n - 2, off + n - 3};
}

}  // namespace

Discretization discretize(const Graph& g, const GraphCoupling& gc, int n_per_edge, const Tolerances& tol) {
    require_valid(g, gc, tol);
    if (n_per_edge < 16) throw Error(ErrorCode::InvalidInput, "need at least 16 grid points per edge");
    for (const auto& e : g.edges)
        if (!e.c.is_zero())
            throw Error(ErrorCode::SingularPotentialUnsupported,
                        "edge " + std::to_string(e.id) + " has a Coulomb potential");

    Discretization d;
    d.n_per_edge = n_per_edge;
    d.h = 2.0 / (n_per_edge - 1);
    const int n = n_per_edge;
    const double h = d.h;
    std::map<int, std::size_t> edge_pos;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        d.edge_ids.push_back(g.edges[i].id);
        d.edge_offset.push_back(static_cast<int>(i) * n);
        edge_pos[g.edges[i].id] = i;
    }
    const int total = static_cast<int>(g.edges.size()) * n;

    std::vector<Eigen::Triplet<cplx>> trip;
    int row = 0;
    // interior rows: -a u'' - i b u'
    for (std::size_t ei = 0; ei < g.edges.size(); ++ei) {
        const auto& e = g.edges[ei];
        const int off = d.edge_offset[ei];
        for (int i = 1; i + 1 < n; ++i) {
            const double s = -1.0 + i * h;
            const cplx a = e.a(s);
            const cplx b = e.b(s);
            const cplx ib = cplx(0.0, 1.0) * b / (2.0 * h);
            trip.emplace_back(row, off + i - 1, -a / (h * h) + ib);
            trip.emplace_back(row, off + i, 2.0 * a / (h * h));
            trip.emplace_back(row, off + i + 1, -a / (h * h) - ib);
            d.interior_rows.push_back(row);
            d.interior_unknowns.push_back(off + i);
            ++row;
        }
    }

    // coupling rows: C alpha + C' beta with alpha = u(end), beta = inward one-sided derivative
    std::vector<std::vector<std::pair<int, cplx>>> constraint;
    for (const auto& vx : g.vertices) {
        const auto& cc = gc.at(vx.id);
        for (int r = 0; r < cc.k(); ++r) {
            std::map<int, cplx> coeff;
            for (int j = 0; j < cc.k(); ++j) {
                const auto& ep = vx.endpoints[static_cast<std::size_t>(j)];
                const auto st = stencil_for(d, edge_pos.at(ep.edge), ep.side);
                coeff[st.value] += cc.C(r, j) - 3.0 * cc.Cprime(r, j) / (2.0 * h);
                coeff[st.inward1] += 4.0 * cc.Cprime(r, j) / (2.0 * h);
                coeff[st.inward2] += -cc.Cprime(r, j) / (2.0 * h);
            }
            constraint.emplace_back(coeff.begin(), coeff.end());
        }
    }
    d.constraint_rows = static_cast<int>(constraint.size());
    for (const auto& c : constraint) {
        double norm = 0.0;
        for (const auto& [col, val] : c) norm += std::norm(val);
        norm = std::sqrt(norm);
        for (const auto& [col, val] : c) trip.emplace_back(row, col, val / norm);
        ++row;
    }
    d.system.resize(total, total);
    d.system.setFromTriplets(trip.begin(), trip.end());

    // eliminate the endpoint values
    std::vector<int> interior_pos(static_cast<std::size_t>(total), -1);
    std::vector<int> boundary_pos(static_cast<std::size_t>(total), -1);
    for (std::size_t i = 0; i < d.interior_unknowns.size(); ++i)
        interior_pos[static_cast<std::size_t>(d.interior_unknowns[i])] = static_cast<int>(i);
    int nb = 0;
    for (int u = 0; u < total; ++u)
        if (interior_pos[static_cast<std::size_t>(u)] < 0) boundary_pos[static_cast<std::size_t>(u)] = nb++;
    const int ni = static_cast<int>(d.interior_unknowns.size());

    CMatrix K = CMatrix::Zero(nb, nb);
    CMatrix L = CMatrix::Zero(nb, ni);
    for (int r = 0; r < d.constraint_rows; ++r)
        for (const auto& [col, val] : constraint[static_cast<std::size_t>(r)]) {
            if (boundary_pos[static_cast<std::size_t>(col)] >= 0)
                K(r, boundary_pos[static_cast<std::size_t>(col)]) += val;
            else
                L(r, interior_pos[static_cast<std::size_t>(col)]) += val;
        }
    Eigen::FullPivLU<CMatrix> klu(K);
    klu.setThreshold(1e-12);
    if (!klu.isInvertible())
        throw Error(ErrorCode::SingularBoundarySystem, "coupling rows do not determine the endpoint values on this grid");

    CMatrix a_ii = CMatrix::Zero(ni, ni);
    CMatrix a_ib = CMatrix::Zero(ni, nb);
    const CMatrix dense = CMatrix(d.system);
    for (int i = 0; i < ni; ++i)
        for (int u = 0; u < total; ++u) {
            const cplx val = dense(d.interior_rows[static_cast<std::size_t>(i)], u);
            if (val == cplx(0.0)) continue;
            if (interior_pos[static_cast<std::size_t>(u)] >= 0)
                a_ii(i, interior_pos[static_cast<std::size_t>(u)]) = val;
            else
                a_ib(i, boundary_pos[static_cast<std::size_t>(u)]) = val;
        }
    d.reduced = a_ii - a_ib * klu.solve(L);
    return d;
}

double smallest_singular_value(const Discretization& d, cplx lambda) {
    CMatrix m = d.reduced;
    m.diagonal().array() -= lambda;
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

double constrained_smallest_singular_value(const Discretization& d, cplx lambda) {
    CMatrix m = CMatrix(d.system);
    for (std::size_t i = 0; i < d.interior_rows.size(); ++i)
        m(d.interior_rows[i], d.interior_unknowns[i]) -= lambda;
    Eigen::BDCSVD<CMatrix> svd(m);
    return svd.singularValues().minCoeff();
}

std::vector<cplx> discrete_eigenvalues(const Discretization& d) {
    Eigen::ComplexEigenSolver<CMatrix> es(d.reduced, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    return out;
}

namespace {

SweepPoint evaluate_point(const Discretization& d, double theta, double r) {
    SweepPoint p;
    p.r = r;
    p.lambda = std::polar(r, theta);
    p.sigma_min = smallest_singular_value(d, p.lambda);
    p.resolvent_norm = 1.0 / p.sigma_min;
    p.r_times_resnorm = r * p.resolvent_norm;
    return p;
}

void check_radii(std::span<const double> r_values) {
    for (std::size_t i = 0; i < r_values.size(); ++i) {
        if (!(r_values[i] > 0.0)) throw Error(ErrorCode::InvalidInput, "sweep radii must be positive");
        if (i > 0 && !(r_values[i] > r_values[i - 1]))
            throw Error(ErrorCode::InvalidInput, "sweep radii must be strictly increasing");
    }
}

}  // namespace

SweepResult sweep_ray_serial(const Discretization& d, double theta, std::span<const double> r_values) {
    check_radii(r_values);
    SweepResult out;
    out.theta = theta;
    for (double r : r_values) out.points.push_back(evaluate_point(d, theta, r));
    return out;
}

SweepResult sweep_ray(const Discretization& d, double theta, std::span<const double> r_values) {
    check_radii(r_values);
    SweepResult out;
    out.theta = theta;
    out.points.resize(r_values.size());
    const auto count = static_cast<std::ptrdiff_t>(r_values.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i)
        out.points[static_cast<std::size_t>(i)] = evaluate_point(d, theta, r_values[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<double> log_spaced(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) return {lo};
    for (int i = 0; i < count; ++i)
        out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
    out.back() = hi;
    return out;
}

std::string_view to_string(Decay d) {
    switch (d) {
        case Decay::Decay: return "Decay";
        case Decay::NoDecay: return "NoDecay";
        case Decay::Inconclusive: return "Inconclusive";
    }
    return "?";
}

DecayVerdict decay_verdict(const SweepResult& sr) {
    if (sr.points.size() < 2 || sr.points.back().r < 100.0 * sr.points.front().r * (1.0 - 1e-12))
        throw Error(ErrorCode::TooFewSamples, "decay verdict needs at least two decades of r");
    const double r_top = sr.points.back().r;
    std::vector<double> x;
    std::vector<double> y;
    double lo = INFINITY;
    double hi = 0.0;
    for (const auto& p : sr.points) {
        if (p.r < r_top / 100.0 * (1.0 - 1e-12)) continue;
        x.push_back(std::log(p.r));
        y.push_back(std::log(p.resolvent_norm));
        lo = std::min(lo, p.r_times_resnorm);
        hi = std::max(hi, p.r_times_resnorm);
    }
    if (x.size() < 2) throw Error(ErrorCode::TooFewSamples, "need two samples in the top two decades");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    DecayVerdict v;
    v.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    v.ratio = hi / lo;
    if (!std::isfinite(v.ratio) || !std::isfinite(v.slope))
        v.verdict = Decay::NoDecay;
    else if (v.ratio <= 10.0 && v.slope >= -1.3 && v.slope <= -0.7)
        v.verdict = Decay::Decay;
    else if (v.slope >= -0.3 || (v.ratio > 10.0 && v.slope > -0.7))
        // spectrum on the ray: |R| ~ 1/dist decays like r^{-1/2} on average and r|R| scatters
        v.verdict = Decay::NoDecay;
    else
        v.verdict = Decay::Inconclusive;
    return v;
}

void write_csv(std::ostream& os, const SweepResult& sr) {
    os << "r,re_lambda,im_lambda,sigma_min,r_times_resnorm\n";
    os.precision(17);
    for (const auto& p : sr.points)
        os << p.r << ',' << p.lambda.real() << ',' << p.lambda.imag() << ',' << p.sigma_min << ','
           << p.r_times_resnorm << '\n';
}

namespace {

// -a_q u'' on [0, L] per endpoint, u(L) = 0, coupling at x = 0 eliminated.
SparseCMatrix truncated_operator(const ModelVertexData& v, const CouplingCondition& cc, double L, int n) {
    const int k = v.k();
    const double h = L / n;
    const int m = n - 1;  // unknowns u_1..u_{n-1} per half-line
    // (C - 3C'/(2h)) u_0 = -C' (4 u_1 - u_2) / (2h)
    const CMatrix K = cc.C - 3.0 * cc.Cprime / (2.0 * h);
    Eigen::FullPivLU<CMatrix> klu(K);
    klu.setThreshold(1e-12);
    if (!klu.isInvertible())
        throw Error(ErrorCode::SingularBoundarySystem, "coupling does not determine u(0) on this grid");
    const CMatrix E = -klu.solve(cc.Cprime) / (2.0 * h);

    std::vector<Eigen::Triplet<cplx>> trip;
    for (int q = 0; q < k; ++q) {
        const cplx a = v.a0[static_cast<std::size_t>(q)];
        const int base = q * m;
        for (int i = 1; i <= m; ++i) {
            const int row = base + i - 1;
            trip.emplace_back(row, row, 2.0 * a / (h * h));
            if (i > 1) trip.emplace_back(row, row - 1, -a / (h * h));
            if (i < m) trip.emplace_back(row, row + 1, -a / (h * h));
        }
        // u_0 of half-line q enters the first row
        for (int j = 0; j < k; ++j) {
            const cplx f = -a / (h * h) * E(q, j);
            trip.emplace_back(base, j * m, 4.0 * f);
            trip.emplace_back(base, j * m + 1, -f);
        }
    }
    SparseCMatrix A(k * m, k * m);
    A.setFromTriplets(trip.begin(), trip.end());
    A.makeCompressed();
    return A;
}

// Converged eigenvalues of A near sigma by shift-invert Arnoldi.
std::vector<cplx> shift_invert_arnoldi(const SparseCMatrix& A, cplx sigma, int dim, std::mt19937& rng) {
    const Eigen::Index size = A.rows();
    SparseCMatrix shifted = A;
    for (Eigen::Index i = 0; i < size; ++i) shifted.coeffRef(i, i) -= sigma;
    Eigen::SparseLU<SparseCMatrix> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) return {};

    const int m = static_cast<int>(std::min<Eigen::Index>(dim, size - 1));
    CMatrix V(size, m + 1);
    CMatrix H = CMatrix::Zero(m + 1, m);
    std::normal_distribution<double> nd;
    CVector v0(size);
    for (Eigen::Index i = 0; i < size; ++i) v0(i) = cplx(nd(rng), nd(rng));
    V.col(0) = v0.normalized();
    int steps = m;
    for (int j = 0; j < m; ++j) {
        CVector w = lu.solve(V.col(j));
        for (int pass = 0; pass < 2; ++pass)
            for (int i = 0; i <= j; ++i) {
                cplx c = V.col(i).dot(w);
                H(i, j) += c;
                w -= c * V.col(i);
            }
        H(j + 1, j) = w.norm();
        if (std::abs(H(j + 1, j)) < 1e-14) {
            steps = j + 1;
            break;
        }
        V.col(j + 1) = w / H(j + 1, j);
    }
    Eigen::ComplexEigenSolver<CMatrix> es(H.topLeftCorner(steps, steps), true);
    std::vector<cplx> out;
    const double beta = std::abs(H(steps, steps - 1));
    for (int i = 0; i < steps; ++i) {
        const cplx theta = es.eigenvalues()(i);
        if (std::abs(theta) == 0.0) continue;
        const double resid = beta * std::abs(es.eigenvectors()(steps - 1, i)) / es.eigenvectors().col(i).norm();
        if (resid <= 1e-9 * std::abs(theta)) out.push_back(sigma + 1.0 / theta);
    }
    return out;
}

bool near_ray(const ModelVertexData& v, cplx lambda, double angle) {
    if (std::abs(lambda) == 0.0) return true;
    return std::any_of(v.directions.begin(), v.directions.end(),
                       [&](cplx d) { return std::abs(std::arg(lambda / d)) <= angle; });
}

}  // namespace

std::vector<cplx> truncated_model_eigenvalues(const ModelVertexData& v, const CouplingCondition& cc, double L,
                                              int n, const TruncationOptions& opts, const Tolerances& tol) {
    check_dimensions(cc);
    if (!(L > 0.0) || n < 8) throw Error(ErrorCode::InvalidInput, "need L > 0 and n >= 8");
    const SparseCMatrix A = truncated_operator(v, cc, L, n);
    std::mt19937 rng(12345);
    std::vector<cplx> found;
    for (const auto& sec : bgres_sectors(v))
        for (double frac : {0.25, 0.5, 0.75})
            for (double radius : opts.shift_radii) {
                const cplx sigma = std::polar(radius, sec.angle_low + frac * sec.width());
                for (cplx lambda : shift_invert_arnoldi(A, sigma, opts.krylov_dim, rng)) {
                    if (near_ray(v, lambda, opts.ray_filter)) continue;
                    bool dup = std::any_of(found.begin(), found.end(), [&](cplx e) {
                        return std::abs(e - lambda) <= 1e-7 * std::max(1.0, std::abs(lambda));
                    });
                    if (!dup) found.push_back(lambda);
                }
            }
    (void)tol;
    std::sort(found.begin(), found.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
    return found;
}

}  // namespace qgs
