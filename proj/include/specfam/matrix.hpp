#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "specfam/error.hpp"
#include "specfam/kernels.hpp"
#include "specfam/scalar.hpp"

namespace specfam {

/// An element of H = K^d. Plain contiguous storage; length is the dimension.
template <Field T>
using Vector = std::vector<T>;

/// Dense row-major matrix. Zero-sized dimensions are allowed so that empty
/// bases and operators on the zero space need no special casing.
template <Field T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw DimensionError("matrix data size does not match its shape");
        }
    }
    Matrix(std::initializer_list<std::initializer_list<T>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) throw DimensionError("ragged matrix literal");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t d) {
        Matrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = T{1};
        return m;
    }

    static Matrix diagonal(std::span<const double> values) {
        Matrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = T{values[i]};
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    Vector<T> column(std::size_t j) const {
        Vector<T> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_column(std::size_t j, std::span<const T> v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    Matrix adjoint() const {
        Matrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = conj((*this)(i, j));
        return m;
    }

    Matrix& operator+=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }
    Matrix& operator*=(T s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, T s) { return a *= s; }
    friend Matrix operator*(T s, Matrix a) { return a *= s; }
    friend Matrix operator-(Matrix a) { return a *= T{-1}; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <Field T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw DimensionError("matrix product: inner dimensions differ");
    Matrix<T> c(a.rows(), b.cols());
    kernels::gemm<T>(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
    return c;
}

/// a^* b without forming the adjoint.
template <Field T>
Matrix<T> adjoint_times(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.rows() != b.rows()) throw DimensionError("adjoint product: row counts differ");
    Matrix<T> c(a.cols(), b.cols());
    kernels::gemm_adjoint<T>(a.data(), b.data(), c.data(), a.cols(), a.rows(), b.cols());
    return c;
}

template <Field T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
    if (a.cols() != x.size()) throw DimensionError("matrix-vector product: dimension mismatch");
    Vector<T> y(a.rows());
    kernels::gemv<T>(a.data(), x, y, a.rows(), a.cols());
    return y;
}

template <Field T>
double frobenius_norm(const Matrix<T>& m) {
    double s = 0.0;
    for (const T& v : m.data()) s += abs2(v);
    return std::sqrt(s);
}

template <Field T>
double max_abs_entry(const Matrix<T>& m) {
    double r = 0.0;
    for (const T& v : m.data()) r = std::max(r, magnitude(v));
    return r;
}

/// Inner product, linear in the first argument: <x,y> = sum x_i conj(y_i).
template <Field T>
T inner(std::span<const T> x, std::span<const T> y) {
    if (x.size() != y.size()) {
        throw DimensionError("inner product of vectors of length " + std::to_string(x.size()) +
                             " and " + std::to_string(y.size()));
    }
    T acc{};
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * conj(y[i]);
    return acc;
}

template <Field T>
T inner(const Vector<T>& x, const Vector<T>& y) {
    return inner<T>(std::span<const T>(x), std::span<const T>(y));
}

template <Field T>
double norm(const Vector<T>& x) {
    double s = 0.0;
    for (const T& v : x) s += abs2(v);
    return std::sqrt(s);
}

template <Field T>
Vector<T> operator+(Vector<T> a, const Vector<T>& b) {
    if (a.size() != b.size()) throw DimensionError("vector sum: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

template <Field T>
Vector<T> operator-(Vector<T> a, const Vector<T>& b) {
    if (a.size() != b.size()) throw DimensionError("vector difference: dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

template <Field T>
Vector<T> operator*(T s, Vector<T> a) {
    for (auto& v : a) v *= s;
    return a;
}

/// y += s * x
template <Field T>
void axpy(T s, const Vector<T>& x, Vector<T>& y) {
    if (x.size() != y.size()) throw DimensionError("axpy: dimension mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}

template <Field T>
Vector<T> unit_vector(std::size_t d, std::size_t i) {
    Vector<T> e(d);
    e.at(i) = T{1};
    return e;
}

}  // namespace specfam
