#include "cmr/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace cmr {

namespace {

constexpr double kCondLimit = 1e8;        // g2 inversion gate
constexpr double kDefectiveCond = 1e10;   // eigenvector matrix singularity gate

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& m) {
    return Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

} // namespace

TruncatedSvd truncated_svd(const Matrix& m, int rank) {
    if (rank < 0 || rank > std::min(m.rows(), m.cols()))
        throw std::invalid_argument("truncated_svd: rank out of range");
    const auto svd = thin_svd(m);
    TruncatedSvd out;
    out.u = svd.matrixU().leftCols(rank);
    out.values = svd.singularValues().head(rank);
    out.v = svd.matrixV().leftCols(rank);
    return out;
}

Matrix pinv(const Matrix& m) {
    if (m.size() == 0) return Matrix(m.cols(), m.rows());
    const auto svd = thin_svd(m);
    const RealVector& s = svd.singularValues();
    const double tol = static_cast<double>(std::max(m.rows(), m.cols())) * s(0) *
                       std::numeric_limits<double>::epsilon();
    RealVector inv = RealVector::Zero(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
        if (s(i) > tol) inv(i) = 1.0 / s(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

Rank1Pair dominant_rank1(const Matrix& m) {
    const auto svd = thin_svd(m);
    if (svd.singularValues()(0) == 0.0)
        throw std::invalid_argument("dominant_rank1: zero matrix");
    Rank1Pair out;
    out.left = svd.matrixU().col(0);
    out.right = svd.singularValues()(0) * svd.matrixV().col(0).conjugate();
    return out;
}

double condition_number(const Matrix& m) {
    if (m.size() == 0) return std::numeric_limits<double>::infinity();
    const Eigen::JacobiSVD<Matrix> svd(m);
    const RealVector& s = svd.singularValues();
    if (s(s.size() - 1) == 0.0) return std::numeric_limits<double>::infinity();
    return s(0) / (s(s.size() - 1));
}

Gevd gevd_pair(const Matrix& g1, const Matrix& g2) {
    if (g1.rows() != g1.cols() || g2.rows() != g2.cols() || g1.rows() != g2.rows())
        throw std::invalid_argument("gevd_pair: matrices must be square and equally sized");
    const Eigen::Index n = g1.rows();
    if (n == 0) throw std::invalid_argument("gevd_pair: empty pencil");

    // Reduce to a standard eigenproblem of gmix^-1 * g1 where gmix = a*g1 + b*g2
    // shares the pencil's eigenvectors. (a, b) = (0, 1) is plain g2; the other
    // fixed combinations only come into play when g2 is ill conditioned.
    const std::pair<Complex, Complex> combos[] = {
        {Complex(0.0, 0.0), Complex(1.0, 0.0)},
        {Complex(0.6, 0.0), Complex(0.8, 0.0)},
        {Complex(0.0, 0.6), Complex(0.8, 0.0)},
        {Complex(-0.48, 0.36), Complex(0.64, 0.48)},
        {Complex(0.28, -0.96), Complex(0.0, 0.2)},
    };

    Matrix m;
    Complex a, b;
    bool found = false;
    for (const auto& [ca, cb] : combos) {
        const Matrix gmix = ca * g1 + cb * g2;
        if (condition_number(gmix) < kCondLimit) {
            m = gmix.partialPivLu().solve(g1);
            a = ca;
            b = cb;
            found = true;
            break;
        }
    }
    if (!found) throw SingularPencilError("gevd_pair: no regular combination of the pencil");

    Eigen::ComplexEigenSolver<Matrix> es(m);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("gevd_pair: eigensolver failed to converge");

    Gevd out;
    out.eigenvectors = es.eigenvectors();
    for (Eigen::Index c = 0; c < n; ++c) {
        const double nrm = out.eigenvectors.col(c).norm();
        if (nrm > 0.0) out.eigenvectors.col(c) /= nrm;
    }
    if (condition_number(out.eigenvectors) > kDefectiveCond)
        throw DefectivePencilError("gevd_pair: defective pencil (eigenvector matrix singular)");

    // Map eigenvalues of gmix^-1 g1 back to the pencil: theta = lambda/(a*lambda + b).
    out.eigenvalues.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex theta = es.eigenvalues()(i);
        const Complex denom = Complex(1.0, 0.0) - a * theta;
        out.eigenvalues(i) =
            std::abs(denom) > 0.0 ? b * theta / denom
                                  : Complex(std::numeric_limits<double>::infinity(), 0.0);
    }
    return out;
}

} // namespace cmr
