#pragma once

#include "qgs/common.hpp"

namespace qgs::linalg {

Eigen::VectorXd singular_values(const CMatrix& m);

// Number of singular values above rel * sigma_max (0 for the zero matrix).
int numerical_rank(const CMatrix& m, double rel);

// Orthonormal columns spanning the (complex-linear) row space of m.
CMatrix row_space_basis(const CMatrix& m, double rel);

// Orthogonal projector onto the row space of m.
CMatrix row_space_projector(const CMatrix& m, double rel);

double spectral_norm(const CMatrix& m);

// Reduced row echelon form with partial pivoting; rows that reduce to zero
// (relative to `rel`) are dropped, so the result has full row rank.
CMatrix rref(const CMatrix& m, double rel);

// Product of the Euclidean norms of the rows (Hadamard bound for |det|).
double row_norm_product(const CMatrix& m, double floor_each = 0.0);

}  // namespace qgs::linalg
