#include "qgs/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace qgs::linalg {

Eigen::VectorXd singular_values(const CMatrix& m) {
    if (m.size() == 0) return {};
    return Eigen::JacobiSVD<CMatrix>(m).singularValues();
}

int numerical_rank(const CMatrix& m, double rel) {
    auto sv = singular_values(m);
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel * sv(0)) ++r;
    return r;
}

CMatrix row_space_basis(const CMatrix& m, double rel) {
    // row space of m = column space of m^T (transpose, not adjoint).
    // Rows are equilibrated first: (C | C'/rho) mixes scales 1 and 1/rho.
    CMatrix mt = m.transpose();
    const double top = mt.size() ? mt.colwise().norm().maxCoeff() : 0.0;
    for (Eigen::Index j = 0; j < mt.cols(); ++j) {
        const double nj = mt.col(j).norm();
        if (nj > rel * top) mt.col(j) /= nj;
        else mt.col(j).setZero();
    }
    Eigen::JacobiSVD<CMatrix> svd(mt, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int r = 0;
    if (sv.size() > 0 && sv(0) > 0.0)
        for (Eigen::Index i = 0; i < sv.size(); ++i)
            if (sv(i) > rel * sv(0)) ++r;
    return svd.matrixU().leftCols(r);
}

CMatrix row_space_projector(const CMatrix& m, double rel) {
    CMatrix q = row_space_basis(m, rel);
    return q * q.adjoint();
}

double spectral_norm(const CMatrix& m) {
    auto sv = singular_values(m);
    return sv.size() == 0 ? 0.0 : sv(0);
}

CMatrix rref(const CMatrix& m, double rel) {
    CMatrix a = m;
    const Eigen::Index rows = a.rows();
    const Eigen::Index cols = a.cols();
    const double scale = std::max(a.cwiseAbs().maxCoeff(), 1e-300);
    Eigen::Index lead = 0;
    for (Eigen::Index c = 0; c < cols && lead < rows; ++c) {
        Eigen::Index piv = lead;
        for (Eigen::Index r = lead + 1; r < rows; ++r)
            if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
        if (std::abs(a(piv, c)) <= rel * scale) {
            a.block(lead, c, rows - lead, 1).setZero();
            continue;
        }
        a.row(lead).swap(a.row(piv));
        a.row(lead) /= a(lead, c);
        a(lead, c) = 1.0;
        for (Eigen::Index r = 0; r < rows; ++r) {
            if (r == lead) continue;
            cplx f = a(r, c);
            if (f == cplx(0.0)) continue;
            a.row(r) -= f * a.row(lead);
            a(r, c) = 0.0;
        }
        ++lead;
    }
    CMatrix out = a.topRows(lead);
    // flush round-off
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        cplx& z = out.data()[i];
        if (std::abs(z.real()) <= rel * scale) z.real(0.0);
        if (std::abs(z.imag()) <= rel * scale) z.imag(0.0);
    }
    return out;
}

double row_norm_product(const CMatrix& m, double floor_each) {
    double p = 1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) p *= std::max(floor_each, m.row(i).norm());
    return p;
}

}  // namespace qgs::linalg
