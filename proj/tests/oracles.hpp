#pragma once
// Test-side reference computations. Nothing here calls into the library's
// numerical routines; only the plain data types are shared.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <vector>

#include "qgs/coupling.hpp"
#include "qgs/graph.hpp"

namespace oracle {

using cplx = std::complex<double>;
using qgs::CMatrix;

inline constexpr double pi = 3.14159265358979323846;

// Root with nonnegative real part via polar form, independent of std::sqrt.
inline cplx sqrt_re_pos(cplx z) {
    const double r = std::sqrt(std::abs(z));
    const double ang = std::atan2(z.imag(), z.real()) / 2.0;  // in (-pi/2, pi/2]
    return {r * std::cos(ang), r * std::sin(ang)};
}

// Leibniz expansion; fine for k <= 6.
inline cplx det_leibniz(const CMatrix& m) {
    const int n = static_cast<int>(m.rows());
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    cplx total = 0.0;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)]) ++inversions;
        cplx term = inversions % 2 ? -1.0 : 1.0;
        for (int i = 0; i < n; ++i) term *= m(i, perm[static_cast<std::size_t>(i)]);
        total += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

// Orthonormal basis of the row space by modified Gram-Schmidt (columns = conj-free rows).
inline CMatrix row_basis_gram_schmidt(const CMatrix& m, double tol = 1e-9) {
    std::vector<qgs::CVector> basis;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        qgs::CVector v = m.row(r).transpose();
        const double n0 = v.norm();
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v -= b.dot(v) * b;
        if (v.norm() > tol * std::max(1.0, n0)) basis.push_back(v / v.norm());
    }
    CMatrix q(m.cols(), static_cast<Eigen::Index>(basis.size()));
    for (std::size_t i = 0; i < basis.size(); ++i) q.col(static_cast<Eigen::Index>(i)) = basis[i];
    return q;
}

inline CMatrix projector(const CMatrix& m) {
    const CMatrix q = row_basis_gram_schmidt(m);
    return q * q.adjoint();
}

// Largest singular value by power iteration on A^* A.
inline double spectral_norm_power(const CMatrix& a, int iters = 500) {
    qgs::CVector v = qgs::CVector::Ones(a.cols());
    double s = 0.0;
    for (int i = 0; i < iters; ++i) {
        qgs::CVector w = a.adjoint() * (a * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        v = w / nw;
        s = std::sqrt(nw);
    }
    return s;
}

inline int rank_by_elimination(CMatrix m, double tol = 1e-10) {
    const double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
    int rank = 0;
    for (Eigen::Index c = 0; c < m.cols() && rank < m.rows(); ++c) {
        Eigen::Index piv = rank;
        for (Eigen::Index r = rank; r < m.rows(); ++r)
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) piv = r;
        if (std::abs(m(piv, c)) <= tol * scale) continue;
        m.row(piv).swap(m.row(rank));
        for (Eigen::Index r = rank + 1; r < m.rows(); ++r) m.row(r) -= m(r, c) / m(rank, c) * m.row(rank);
        ++rank;
    }
    return rank;
}

// -a u'' on (-1, 1) with u(+-1) = 0: eigenvalues a (k pi / 2)^2.
inline double dirichlet_eigenvalue(int k) { return (k * pi / 2.0) * (k * pi / 2.0); }

inline double distance_to_dirichlet_spectrum(cplx lambda, int kmax = 4000) {
    double best = 1e300;
    for (int k = 1; k <= kmax; ++k) best = std::min(best, std::abs(lambda - dirichlet_eigenvalue(k)));
    return best;
}

// delta-type eigenvalue equation sum_j c'_j sqrt(-lambda / a_j) = nu with all a_j
// on one ray a_j = |a_j| e^{i phi}: sqrt(-lambda / a_j) = sqrt(-lambda e^{-i phi}) / sqrt|a_j|.
inline cplx delta_eigenvalue_common_ray(cplx nu, const std::vector<cplx>& cprime, const std::vector<double>& mags,
                                        double phi) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < cprime.size(); ++j) s += cprime[j] / std::sqrt(mags[j]);
    const cplx w = nu / s;  // = sqrt(-lambda e^{-i phi}), needs Re w > 0
    return -w * w * std::polar(1.0, phi);
}

inline bool lower_triangular_sign_pattern(const Eigen::MatrixXi& e) {
    for (Eigen::Index l = 0; l < e.rows(); ++l)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            if (e(l, j) != (l >= j ? 1 : -1)) return false;
    return true;
}

inline cplx random_complex(std::mt19937& rng, double scale = 1.0) {
    std::normal_distribution<double> nd(0.0, scale);
    return {nd(rng), nd(rng)};
}

inline CMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = random_complex(rng);
    return m;
}

// fixtures --------------------------------------------------------------

inline qgs::CouplingCondition dirichlet(int vertex, int k = 1) {
    qgs::CouplingCondition c;
    c.vertex = vertex;
    c.C = CMatrix::Identity(k, k);
    c.Cprime = CMatrix::Zero(k, k);
    return c;
}

inline qgs::Edge constant_edge(int id, cplx a) { return {id, qgs::Polynomial::constant(a), {}, {}}; }

// One edge, Dirichlet at both ends.
inline void dirichlet_edge(qgs::Graph& g, qgs::GraphCoupling& gc, cplx a = 1.0) {
    using qgs::Side;
    g.edges = {constant_edge(0, a)};
    g.vertices = {{0, {{0, Side::minus}}}, {1, {{0, Side::plus}}}};
    gc.conditions = {dirichlet(0), dirichlet(1)};
}

// e0 -- v0 -- e1 with Dirichlet at the free ends and `middle` at v0 (columns e0+, e1-).
inline void two_edge(qgs::Graph& g, qgs::GraphCoupling& gc, cplx a1, cplx a2, const qgs::CouplingCondition& middle) {
    using qgs::Side;
    g.edges = {constant_edge(0, a1), constant_edge(1, a2)};
    g.vertices = {{0, {{0, Side::plus}, {1, Side::minus}}}, {1, {{0, Side::minus}}}, {2, {{1, Side::plus}}}};
    auto m = middle;
    m.vertex = 0;
    gc.conditions = {m, dirichlet(1), dirichlet(2)};
}

inline qgs::CouplingCondition kirchhoff2() {
    qgs::CouplingCondition c;
    c.C = CMatrix::Zero(2, 2);
    c.Cprime = CMatrix::Zero(2, 2);
    c.C(0, 0) = 1.0;
    c.C(0, 1) = -1.0;
    c.Cprime(1, 0) = 1.0;
    c.Cprime(1, 1) = 1.0;
    return c;
}

}  // namespace oracle
