#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace specfam {

using Complex = std::complex<double>;

template <class T>
struct is_complex : std::false_type {};
template <>
struct is_complex<Complex> : std::true_type {};

template <class T>
inline constexpr bool is_complex_v = is_complex<T>::value;

/// Scalar field of a Hilbert space: real (double) or complex (std::complex<double>).
template <class T>
concept Field = std::is_same_v<T, double> || std::is_same_v<T, Complex>;

template <Field T>
constexpr T conj(T v) noexcept {
    if constexpr (is_complex_v<T>) {
        return std::conj(v);
    } else {
        return v;
    }
}

template <Field T>
constexpr double real_part(T v) noexcept {
    if constexpr (is_complex_v<T>) {
        return v.real();
    } else {
        return v;
    }
}

template <Field T>
constexpr double imag_part(T v) noexcept {
    if constexpr (is_complex_v<T>) {
        return v.imag();
    } else {
        return 0.0;
    }
}

/// |v|^2 without the square root.
template <Field T>
constexpr double abs2(T v) noexcept {
    if constexpr (is_complex_v<T>) {
        return v.real() * v.real() + v.imag() * v.imag();
    } else {
        return v * v;
    }
}

template <Field T>
double magnitude(T v) noexcept {
    return std::abs(v);
}

template <Field T>
constexpr const char* field_name() noexcept {
    return is_complex_v<T> ? "complex" : "real";
}

}  // namespace specfam
