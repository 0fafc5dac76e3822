#ifndef CMR_LINALG_HPP
#define CMR_LINALG_HPP

#include <stdexcept>

#include "cmr/types.hpp"

namespace cmr {

/// Pencil (g1, g2) has no regular linear combination.
struct SingularPencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Pencil is regular but not diagonalizable (eigenvector matrix numerically singular).
struct DefectivePencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncatedSvd {
    Matrix u;            // orthonormal columns, rank many
    RealVector values;   // nonincreasing, nonnegative
    Matrix v;            // orthonormal columns, rank many
};

/// Best rank-r approximation factors of m (Eckart-Young).
TruncatedSvd truncated_svd(const Matrix& m, int rank);

/// Moore-Penrose pseudo-inverse. Singular values below
/// max(rows, cols) * sigma_max * 2^-52 are treated as zero.
Matrix pinv(const Matrix& m);

/// Dominant singular pair scaled so that left * right^T is the best rank-1
/// Frobenius approximation; left has unit norm.
struct Rank1Pair {
    Vector left;
    Vector right;
};

Rank1Pair dominant_rank1(const Matrix& m);

/// Generalized eigendecomposition of the pencil (g1, g2):
/// g1 * v_r = lambda_r * g2 * v_r for each eigenvector column.
struct Gevd {
    Vector eigenvalues;
    Matrix eigenvectors; // columns scaled to unit norm
};

/// Solves the pencil by reduction to a standard eigenproblem of g2^-1 * g1
/// when g2 is well conditioned (cond < 1e8). Otherwise falls back to fixed
/// regular linear combinations of the pencil, which handle a singular g2 as
/// long as the pencil itself is regular. Throws SingularPencilError when no
/// combination is invertible and DefectivePencilError when the eigenvector
/// matrix is numerically singular.
Gevd gevd_pair(const Matrix& g1, const Matrix& g2);

/// 2-norm condition number estimate from the full SVD (inf when singular).
double condition_number(const Matrix& m);

} // namespace cmr

#endif
