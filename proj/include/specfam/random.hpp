#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "specfam/linalg.hpp"

namespace specfam {

using Rng = std::mt19937_64;

/// Standard Gaussian scalar; complex draws have unit expected modulus squared.
template <Field T>
T gaussian(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    if constexpr (is_complex_v<T>) {
        const double re = n(rng);
        const double im = n(rng);
        return T{re, im} * std::sqrt(0.5);
    } else {
        return n(rng);
    }
}

template <Field T>
Vector<T> random_vector(std::size_t d, Rng& rng) {
    Vector<T> v(d);
    for (auto& e : v) e = gaussian<T>(rng);
    return v;
}

/// Haar-like unitary from orthonormalized Gaussian columns. Retries on the
/// (measure-zero) event of a rank-deficient draw.
template <Field T>
OrthoBasis<T> random_unitary(std::size_t d, Rng& rng) {
    for (;;) {
        Matrix<T> g(d, d);
        for (auto& e : g.data()) e = gaussian<T>(rng);
        auto q = orthonormalize(g);
        if (q.size() == d) return q;
    }
}

/// Q diag(spectrum) Q^* with Q from random_unitary.
template <Field T>
HermitianMatrix<T> hermitian_with_spectrum(std::span<const double> spectrum, Rng& rng) {
    const auto q = random_unitary<T>(spectrum.size(), rng);
    Matrix<T> scaled = q.columns();
    for (std::size_t i = 0; i < scaled.rows(); ++i)
        for (std::size_t j = 0; j < scaled.cols(); ++j) scaled(i, j) *= T{spectrum[j]};
    return HermitianMatrix<T>(scaled * q.columns().adjoint());
}

/// Random element of span(V): V c with Gaussian coordinates.
template <Field T>
Vector<T> random_in_span(const OrthoBasis<T>& v, Rng& rng) {
    return v.embed(random_vector<T>(v.size(), rng));
}

inline std::vector<double> uniform_values(std::size_t n, double lo, double hi, Rng& rng) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = u(rng);
    return out;
}

}  // namespace specfam
