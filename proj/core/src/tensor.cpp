#include "cmr/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace cmr {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

} // namespace

Tensor3::Tensor3(int dim1, int dim2, int dim3)
    : dim1_(dim1), dim2_(dim2), dim3_(dim3),
      data_(static_cast<std::size_t>(dim1) * dim2 * dim3, Complex{0.0, 0.0}) {
    require(dim1 >= 0 && dim2 >= 0 && dim3 >= 0, "Tensor3: negative dimension");
}

double Tensor3::squared_norm() const {
    double s = 0.0;
    for (const Complex& v : data_) s += std::norm(v);
    return s;
}

double Tensor3::frobenius_norm() const { return std::sqrt(squared_norm()); }

Tensor4::Tensor4(int dim1, int dim2, int dim3, int dim4)
    : dim1_(dim1), dim2_(dim2), dim3_(dim3), dim4_(dim4),
      data_(static_cast<std::size_t>(dim1) * dim2 * dim3 * dim4, Complex{0.0, 0.0}) {
    require(dim1 >= 0 && dim2 >= 0 && dim3 >= 0 && dim4 >= 0, "Tensor4: negative dimension");
}

Matrix unfold_mode2(const Tensor3& t) {
    const int I = t.dim1(), J = t.dim2(), K = t.dim3();
    Matrix out(static_cast<Eigen::Index>(I) * K, J);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < K; ++k)
                out(static_cast<Eigen::Index>(i) * K + k, j) = t(i, j, k);
    return out;
}

Tensor3 fold_mode2(const Matrix& m, int dim1, int dim2, int dim3) {
    require(m.rows() == static_cast<Eigen::Index>(dim1) * dim3 && m.cols() == dim2,
            "fold_mode2: shape mismatch");
    Tensor3 t(dim1, dim2, dim3);
    for (int i = 0; i < dim1; ++i)
        for (int j = 0; j < dim2; ++j)
            for (int k = 0; k < dim3; ++k)
                t(i, j, k) = m(static_cast<Eigen::Index>(i) * dim3 + k, j);
    return t;
}

Matrix unfold_mode1(const Tensor3& t) {
    const int I = t.dim1(), J = t.dim2(), K = t.dim3();
    Matrix out(static_cast<Eigen::Index>(J) * K, I);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < K; ++k)
                out(static_cast<Eigen::Index>(j) * K + k, i) = t(i, j, k);
    return out;
}

Matrix unfold_mode3(const Tensor3& t) {
    const int I = t.dim1(), J = t.dim2(), K = t.dim3();
    Matrix out(static_cast<Eigen::Index>(I) * J, K);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < K; ++k)
                out(static_cast<Eigen::Index>(i) * J + j, k) = t(i, j, k);
    return out;
}

Matrix unfold_mode3(const Tensor4& t) {
    const int I = t.dim1(), J = t.dim2(), K = t.dim3(), L = t.dim4();
    Matrix out(static_cast<Eigen::Index>(I) * J * L, K);
    for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j)
            for (int k = 0; k < K; ++k)
                for (int l = 0; l < L; ++l)
                    out(static_cast<Eigen::Index>(i) * J * L + static_cast<Eigen::Index>(j) * L + l, k) =
                        t(i, j, k, l);
    return out;
}

Tensor4 fold_mode3(const Matrix& m, int dim1, int dim2, int dim3, int dim4) {
    require(m.rows() == static_cast<Eigen::Index>(dim1) * dim2 * dim4 && m.cols() == dim3,
            "fold_mode3: shape mismatch");
    Tensor4 t(dim1, dim2, dim3, dim4);
    for (int i = 0; i < dim1; ++i)
        for (int j = 0; j < dim2; ++j)
            for (int k = 0; k < dim3; ++k)
                for (int l = 0; l < dim4; ++l)
                    t(i, j, k, l) = m(static_cast<Eigen::Index>(i) * dim2 * dim4 +
                                          static_cast<Eigen::Index>(j) * dim4 + l,
                                      k);
    return t;
}

Matrix khatri_rao(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), "khatri_rao: column-count mismatch");
    const Eigen::Index I = a.rows(), K = b.rows(), R = a.cols();
    Matrix out(I * K, R);
    for (Eigen::Index r = 0; r < R; ++r)
        for (Eigen::Index i = 0; i < I; ++i)
            out.block(i * K, r, K, 1) = a(i, r) * b.col(r);
    return out;
}

Tensor3 cpd_eval(const Matrix& a, const Matrix& b, const Matrix& c) {
    require(a.cols() == b.cols() && b.cols() == c.cols(), "cpd_eval: rank mismatch");
    const int I = static_cast<int>(a.rows());
    const int J = static_cast<int>(b.rows());
    const int K = static_cast<int>(c.rows());
    const int R = static_cast<int>(a.cols());
    Tensor3 t(I, J, K);
    for (int r = 0; r < R; ++r)
        for (int i = 0; i < I; ++i) {
            const Complex air = a(i, r);
            for (int j = 0; j < J; ++j) {
                const Complex ab = air * b(j, r);
                for (int k = 0; k < K; ++k) t(i, j, k) += ab * c(k, r);
            }
        }
    return t;
}

Tensor3 cpd_eval(const FactorSet& f, int m) {
    require(m >= 0 && m < f.count(), "cpd_eval: array index out of range");
    return cpd_eval(f.A[m], f.B, f.C[m]);
}

double ccpd_residual(std::span<const Tensor3> tensors, const FactorSet& f) {
    require(static_cast<int>(tensors.size()) == f.count(),
            "ccpd_residual: tensor count does not match factor set");
    double total = 0.0;
    for (int m = 0; m < f.count(); ++m) {
        const Tensor3 model = cpd_eval(f, m);
        const Tensor3& obs = tensors[m];
        require(model.dim1() == obs.dim1() && model.dim2() == obs.dim2() &&
                    model.dim3() == obs.dim3(),
                "ccpd_residual: shape mismatch");
        const auto md = model.data();
        const auto od = obs.data();
        for (std::size_t n = 0; n < md.size(); ++n) total += std::norm(od[n] - md[n]);
    }
    return total;
}

} // namespace cmr
