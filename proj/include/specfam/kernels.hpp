#pragma once

// Dense row-major kernels. The `reference` namespace holds the plain serial
// loops; the top-level versions split rows across OpenMP threads and must
// agree with the reference bit for bit (each output entry is accumulated in
// the same order by exactly one thread).

#include <cstddef>
#include <span>

#include "specfam/scalar.hpp"

namespace specfam::kernels {

// Below this many multiply-adds a parallel region costs more than it saves.
inline constexpr std::size_t parallel_work_threshold = 32 * 32 * 32;

namespace reference {

/// c[m x n] = a[m x k] * b[k x n]
template <Field T>
void gemm(std::span<const T> a, std::span<const T> b, std::span<T> c, std::size_t m,
          std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        T* crow = c.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = T{};
        for (std::size_t p = 0; p < k; ++p) {
            const T aip = a[i * k + p];
            const T* brow = b.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

/// c[m x n] = a^* * b, with a stored as [k x m]
template <Field T>
void gemm_adjoint(std::span<const T> a, std::span<const T> b, std::span<T> c, std::size_t m,
                  std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        T* crow = c.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = T{};
        for (std::size_t p = 0; p < k; ++p) {
            const T aip = conj(a[p * m + i]);
            const T* brow = b.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

/// y[m] = a[m x n] * x[n]
template <Field T>
void gemv(std::span<const T> a, std::span<const T> x, std::span<T> y, std::size_t m,
          std::size_t n) {
    for (std::size_t i = 0; i < m; ++i) {
        T acc{};
        const T* arow = a.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += arow[j] * x[j];
        y[i] = acc;
    }
}

}  // namespace reference

template <Field T>
void gemm(std::span<const T> a, std::span<const T> b, std::span<T> c, std::size_t m,
          std::size_t k, std::size_t n) {
    const bool big = m * k * n >= parallel_work_threshold;
    const auto rows = static_cast<long long>(m);
#pragma omp parallel for schedule(static) if (big)
    for (long long ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        T* crow = c.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = T{};
        for (std::size_t p = 0; p < k; ++p) {
            const T aip = a[i * k + p];
            const T* brow = b.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

template <Field T>
void gemm_adjoint(std::span<const T> a, std::span<const T> b, std::span<T> c, std::size_t m,
                  std::size_t k, std::size_t n) {
    const bool big = m * k * n >= parallel_work_threshold;
    const auto rows = static_cast<long long>(m);
#pragma omp parallel for schedule(static) if (big)
    for (long long ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        T* crow = c.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] = T{};
        for (std::size_t p = 0; p < k; ++p) {
            const T aip = conj(a[p * m + i]);
            const T* brow = b.data() + p * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
        }
    }
}

template <Field T>
void gemv(std::span<const T> a, std::span<const T> x, std::span<T> y, std::size_t m,
          std::size_t n) {
    const bool big = m * n >= parallel_work_threshold;
    const auto rows = static_cast<long long>(m);
#pragma omp parallel for schedule(static) if (big)
    for (long long ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        T acc{};
        const T* arow = a.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += arow[j] * x[j];
        y[i] = acc;
    }
}

}  // namespace specfam::kernels
