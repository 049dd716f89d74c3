#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "tcur/error.hpp"

namespace tcur {

using Complex = std::complex<double>;

/// Shape of a third-order tensor: n1 rows, n2 columns, n3 frontal slices.
struct Dims {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;

    std::size_t numel() const { return n1 * n2 * n3; }
    std::size_t slice_size() const { return n1 * n2; }
    bool operator==(const Dims&) const = default;
    std::string str() const;
};

template <typename T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Matrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense third-order tensor.
///
/// Storage is slice-major: frontal slice k occupies a contiguous block of
/// n1*n2 values, and each slice is row-major. The checkpoint format depends
/// on this layout, so it must not change.
template <typename T>
class BasicTensor3 {
public:
    using value_type = T;
    using SliceMap = Eigen::Map<RowMatrix<T>>;
    using ConstSliceMap = Eigen::Map<const RowMatrix<T>>;

    BasicTensor3() = default;

    explicit BasicTensor3(Dims dims) : dims_(dims), data_(dims.numel(), T{}) { check_dims(dims); }

    BasicTensor3(std::size_t n1, std::size_t n2, std::size_t n3) : BasicTensor3(Dims{n1, n2, n3}) {}

    BasicTensor3(Dims dims, std::vector<T> data) : dims_(dims), data_(std::move(data)) {
        check_dims(dims);
        if (data_.size() != dims.numel()) {
            throw Error(ErrorKind::DimMismatch, "data length " + std::to_string(data_.size()) +
                                                    " does not match dims " + dims.str());
        }
    }

    static BasicTensor3 zeros(Dims dims) { return BasicTensor3(dims); }

    const Dims& dims() const { return dims_; }
    std::size_t n1() const { return dims_.n1; }
    std::size_t n2() const { return dims_.n2; }
    std::size_t n3() const { return dims_.n3; }
    std::size_t size() const { return data_.size(); }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }
    const std::vector<T>& values() const { return data_; }

    std::size_t offset(std::size_t i, std::size_t j, std::size_t k) const {
        return k * dims_.slice_size() + i * dims_.n2 + j;
    }

    T& operator()(std::size_t i, std::size_t j, std::size_t k) { return data_[offset(i, j, k)]; }
    const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return data_[offset(i, j, k)]; }

    SliceMap slice(std::size_t k) {
        return SliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1), Eigen::Index(dims_.n2));
    }
    ConstSliceMap slice(std::size_t k) const {
        return ConstSliceMap(data_.data() + k * dims_.slice_size(), Eigen::Index(dims_.n1),
                             Eigen::Index(dims_.n2));
    }

    bool all_finite() const {
        for (const T& v : data_) {
            if (!std::isfinite(std::abs(v))) return false;
        }
        return true;
    }

    BasicTensor3& operator+=(const BasicTensor3& other) {
        require_same(other, "+=");
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] += other.data_[n];
        return *this;
    }
    BasicTensor3& operator-=(const BasicTensor3& other) {
        require_same(other, "-=");
        for (std::size_t n = 0; n < data_.size(); ++n) data_[n] -= other.data_[n];
        return *this;
    }
    BasicTensor3& operator*=(T s) {
        for (T& v : data_) v *= s;
        return *this;
    }

    friend BasicTensor3 operator+(BasicTensor3 a, const BasicTensor3& b) { return a += b; }
    friend BasicTensor3 operator-(BasicTensor3 a, const BasicTensor3& b) { return a -= b; }
    friend BasicTensor3 operator*(BasicTensor3 a, T s) { return a *= s; }
    friend BasicTensor3 operator*(T s, BasicTensor3 a) { return a *= s; }

    /// Exact element-wise equality (no tolerance).
    friend bool operator==(const BasicTensor3& a, const BasicTensor3& b) {
        return a.dims_ == b.dims_ && a.data_ == b.data_;
    }

private:
    static void check_dims(const Dims& dims) {
        if (dims.n1 == 0 || dims.n2 == 0 || dims.n3 == 0) {
            throw Error(ErrorKind::DimMismatch, "tensor dims must be positive, got " + dims.str());
        }
    }

    void require_same(const BasicTensor3& other, const char* op) const {
        if (dims_ != other.dims_) {
            throw Error(ErrorKind::DimMismatch,
                        std::string(op) + ": " + dims_.str() + " vs " + other.dims_.str());
        }
    }

    Dims dims_;
    std::vector<T> data_;
};

using Tensor3 = BasicTensor3<double>;
using ComplexTensor3 = BasicTensor3<Complex>;

/// Tensor with i.i.d. standard normal entries drawn from `rng`.
Tensor3 random_normal(Dims dims, std::mt19937_64& rng);

/// Copy of frontal slice k as a column-major Eigen matrix.
Matrix slice_matrix(const Tensor3& t, std::size_t k);

/// Tensor with a single frontal slice holding `m`.
Tensor3 from_matrix(const Matrix& m);

}  // namespace tcur
