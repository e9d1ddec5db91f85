#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "icd/matrix.hpp"

namespace icd::linalg {

/// Eigendecomposition of a symmetric matrix. values ascending; vectors(:, i)
/// is the unit eigenvector for values[i].
struct SymEigen {
    std::vector<double> values;
    Matrix vectors;
};

/// Householder tridiagonalization followed by implicit-shift QL. Dense path,
/// intended for n up to a couple thousand.
SymEigen eigh_dense(const Matrix& a);

/// Right singular structure of X (n x d) via one-sided Jacobi, which rotates
/// column pairs of X directly and never forms X^T X. singular_values are
/// descending; right_vectors(:, i) is the d-dim right singular vector for
/// singular_values[i].
struct RightSvd {
    std::vector<double> singular_values;
    Matrix right_vectors;
};
RightSvd svd_right(const Matrix& x);

/// y = M x for a symmetric operator of size n.
using MatVec = std::function<void(const double*, double*)>;

/// m smallest eigenpairs of a symmetric PSD operator via shift-invert Lanczos
/// with full reorthogonalization. The inner solves of (M + shift I) x = b use
/// conjugate gradients. Throws on iteration-cap exhaustion with the residual
/// norms in the message.
SymEigen smallest_eigenpairs(std::size_t n, const MatVec& mv, std::size_t m, double shift,
                             double tol, std::size_t max_iters, std::uint64_t seed);

}  // namespace icd::linalg
