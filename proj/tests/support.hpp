#pragma once

// Generators and oracle helpers shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "specfam/linalg.hpp"
#include "specfam/random.hpp"

namespace specfam::testing {

/// n sorted values in [lo, hi] with consecutive gaps and |mu| gaps >= gap.
inline std::vector<double> spectrum_with_gap(std::size_t n, double lo, double hi, double gap, Rng& rng) {
    for (;;) {
        auto v = uniform_values(n, lo, hi, rng);
        std::sort(v.begin(), v.end());
        std::vector<double> mags;
        for (double x : v) mags.push_back(std::abs(x));
        std::sort(mags.begin(), mags.end());
        bool ok = true;
        for (std::size_t i = 1; i < n; ++i) {
            ok = ok && v[i] - v[i - 1] >= gap && mags[i] - mags[i - 1] >= gap;
        }
        if (ok) return v;
    }
}

template <Field T>
HermitianMatrix<T> random_hermitian(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0,
                                    double gap = 1e-3) {
    const auto s = spectrum_with_gap(n, lo, hi, gap, rng);
    return hermitian_with_spectrum<T>(s, rng);
}

/// A = Q diag(spectrum) Q^* with Q kept, so spectral projectors are known
/// without running any eigensolver.
template <Field T>
struct Planted {
    HermitianMatrix<T> a;
    std::vector<double> spectrum;
    OrthoBasis<T> q;

    template <class Pred>
    Matrix<T> projector(Pred&& keep) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < spectrum.size(); ++i)
            if (keep(spectrum[i])) idx.push_back(i);
        return projector_from_basis(select_columns(q, idx)).matrix();
    }
};

template <Field T>
Planted<T> planted_hermitian(std::size_t n, Rng& rng, double lo, double hi, double gap) {
    auto s = spectrum_with_gap(n, lo, hi, gap, rng);
    auto q = random_unitary<T>(n, rng);
    Matrix<T> scaled = q.columns();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) scaled(i, j) *= T{s[j]};
    return {HermitianMatrix<T>(scaled * q.columns().adjoint()), std::move(s), std::move(q)};
}

inline std::size_t random_dim(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Midpoint between two consecutive distinct values of `v`, chosen at random;
/// falls back to half the smallest value, or 1 when v is empty.
inline double random_gap_point(std::vector<double> v, Rng& rng) {
    std::sort(v.begin(), v.end());
    if (v.empty()) return 1.0;
    std::vector<double> pts{0.5 * v.front()};
    for (std::size_t i = 0; i + 1 < v.size(); ++i) pts.push_back(0.5 * (v[i] + v[i + 1]));
    pts.push_back(v.back() + 1.0);
    return pts[std::uniform_int_distribution<std::size_t>(0, pts.size() - 1)(rng)];
}

inline std::vector<double> magnitudes(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(std::abs(x));
    return out;
}

/// Oracle spectral projector onto eigenvalues accepted by `keep`.
template <Field T, class Pred>
Matrix<T> oracle_projector(const EigenDecomposition<T>& eig, Pred&& keep) {
    return eig.projector(std::forward<Pred>(keep)).matrix();
}

template <Field T>
double distance(const Matrix<T>& a, const Matrix<T>& b) {
    return frobenius_norm(a - b);
}

}  // namespace specfam::testing
