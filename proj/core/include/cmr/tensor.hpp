#ifndef CMR_TENSOR_HPP
#define CMR_TENSOR_HPP

#include <cassert>
#include <span>
#include <vector>

#include "cmr/types.hpp"

namespace cmr {

/// Dense complex third-order tensor.
///
/// Canonical layout: element (i, j, k) lives at data[(i * J + j) * K + k],
/// i.e. the last index varies fastest. Every unfolding below is defined by
/// its explicit index rule, never by reinterpreting this buffer.
class Tensor3 {
public:
    Tensor3() = default;
    Tensor3(int dim1, int dim2, int dim3);

    int dim1() const { return dim1_; }
    int dim2() const { return dim2_; }
    int dim3() const { return dim3_; }

    Complex& operator()(int i, int j, int k) {
        assert(in_range(i, j, k));
        return data_[offset(i, j, k)];
    }
    Complex operator()(int i, int j, int k) const {
        assert(in_range(i, j, k));
        return data_[offset(i, j, k)];
    }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

    double frobenius_norm() const;
    double squared_norm() const;

private:
    bool in_range(int i, int j, int k) const {
        return i >= 0 && i < dim1_ && j >= 0 && j < dim2_ && k >= 0 && k < dim3_;
    }
    std::size_t offset(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * dim2_ + j) * dim3_ + k;
    }

    int dim1_ = 0, dim2_ = 0, dim3_ = 0;
    std::vector<Complex> data_;
};

/// Dense complex fourth-order tensor, same layout convention (last index fastest).
class Tensor4 {
public:
    Tensor4() = default;
    Tensor4(int dim1, int dim2, int dim3, int dim4);

    int dim1() const { return dim1_; }
    int dim2() const { return dim2_; }
    int dim3() const { return dim3_; }
    int dim4() const { return dim4_; }

    Complex& operator()(int i, int j, int k, int l) {
        assert(in_range(i, j, k, l));
        return data_[offset(i, j, k, l)];
    }
    Complex operator()(int i, int j, int k, int l) const {
        assert(in_range(i, j, k, l));
        return data_[offset(i, j, k, l)];
    }

    std::span<Complex> data() { return data_; }
    std::span<const Complex> data() const { return data_; }

private:
    bool in_range(int i, int j, int k, int l) const {
        return i >= 0 && i < dim1_ && j >= 0 && j < dim2_ && k >= 0 && k < dim3_ &&
               l >= 0 && l < dim4_;
    }
    std::size_t offset(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * dim2_ + j) * dim3_ + k) * dim4_ + l;
    }

    int dim1_ = 0, dim2_ = 0, dim3_ = 0, dim4_ = 0;
    std::vector<Complex> data_;
};

/// Coupled factor matrices {A^(m)}, shared B, {C^(m)}; all share column count.
struct FactorSet {
    std::vector<Matrix> A;
    Matrix B;
    std::vector<Matrix> C;

    int rank() const { return static_cast<int>(B.cols()); }
    int count() const { return static_cast<int>(A.size()); }
};

/// Mode-2 unfolding of a third-order tensor: out(i*K + k, j) = t(i, j, k).
Matrix unfold_mode2(const Tensor3& t);

/// Inverse of unfold_mode2 for the given dimensions.
Tensor3 fold_mode2(const Matrix& m, int dim1, int dim2, int dim3);

/// Mode-1 unfolding: out(j*K + k, i) = t(i, j, k).
Matrix unfold_mode1(const Tensor3& t);

/// Mode-3 unfolding: out(i*J + j, k) = t(i, j, k).
Matrix unfold_mode3(const Tensor3& t);

/// Mode-3 unfolding of a fourth-order tensor:
/// out(i*J*L + j*L + l, k) = t(i, j, k, l).
Matrix unfold_mode3(const Tensor4& t);

/// Inverse of the fourth-order mode-3 unfolding.
Tensor4 fold_mode3(const Matrix& m, int dim1, int dim2, int dim3, int dim4);

/// Khatri-Rao (columnwise Kronecker) product: column r is a(:,r) ⊗ b(:,r).
Matrix khatri_rao(const Matrix& a, const Matrix& b);

/// Evaluates a rank-R polyadic model: t(i,j,k) = sum_r a(i,r) b(j,r) c(k,r).
Tensor3 cpd_eval(const Matrix& a, const Matrix& b, const Matrix& c);

/// Evaluates the m-th coupled term of a factor set.
Tensor3 cpd_eval(const FactorSet& f, int m);

/// Sum over m of the squared Frobenius misfit between each tensor and its
/// coupled polyadic model.
double ccpd_residual(std::span<const Tensor3> tensors, const FactorSet& f);

} // namespace cmr

#endif
