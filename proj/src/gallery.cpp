#include "specfam/gallery.hpp"

#include <cmath>

#include "specfam/error.hpp"
#include "specfam/matrix_market.hpp"
#include "specfam/random.hpp"

namespace specfam {

OperatorKind parse_kind(const std::string& s) {
    if (s == "laplacian1d") return OperatorKind::laplacian1d;
    if (s == "oscillator") return OperatorKind::oscillator;
    if (s == "random") return OperatorKind::random;
    if (s == "diagonal") return OperatorKind::diagonal;
    if (s == "file") return OperatorKind::file;
    throw Error("unknown operator kind '" + s + "'");
}

std::string to_string(OperatorKind k) {
    switch (k) {
        case OperatorKind::laplacian1d: return "laplacian1d";
        case OperatorKind::oscillator: return "oscillator";
        case OperatorKind::random: return "random";
        case OperatorKind::diagonal: return "diagonal";
        case OperatorKind::file: return "file";
    }
    return "?";
}

FieldMode parse_mode(const std::string& s) {
    if (s == "real") return FieldMode::real;
    if (s == "complex") return FieldMode::complex;
    throw Error("unknown field mode '" + s + "'");
}

std::string to_string(FieldMode m) { return m == FieldMode::real ? "real" : "complex"; }

namespace {

template <Field T>
Matrix<T> laplacian(std::size_t d) {
    const double s = static_cast<double>(d) * static_cast<double>(d);
    Matrix<T> m(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        m(i, i) = T{2.0 * s};
        if (i + 1 < d) {
            m(i, i + 1) = T{-s};
            m(i + 1, i) = T{-s};
        }
    }
    return m;
}

}  // namespace

template <Field T>
HermitianMatrix<T> generate(const OperatorSpec& spec) {
    if (spec.kind != OperatorKind::diagonal && spec.kind != OperatorKind::file && spec.dim < 1) {
        throw Error("operator dimension must be >= 1");
    }
    switch (spec.kind) {
        case OperatorKind::laplacian1d:
            return HermitianMatrix<T>(laplacian<T>(spec.dim));
        case OperatorKind::oscillator: {
            Matrix<T> m = laplacian<T>(spec.dim);
            const double d = static_cast<double>(spec.dim);
            for (std::size_t i = 0; i < spec.dim; ++i) {
                const double g = (static_cast<double>(i) - d / 2.0) / std::sqrt(d);
                m(i, i) += T{g * g};
            }
            return HermitianMatrix<T>(m);
        }
        case OperatorKind::random: {
            Rng rng(spec.seed);
            const auto u = uniform_values(spec.dim, -1.0, 1.0, rng);
            return hermitian_with_spectrum<T>(u, rng);
        }
        case OperatorKind::diagonal:
            if (spec.spectrum.empty()) throw Error("diagonal operator needs a nonempty spectrum");
            return HermitianMatrix<T>::diagonal(spec.spectrum);
        case OperatorKind::file:
            return read_matrix_market<T>(spec.path).matrix;
    }
    throw Error("unknown operator kind");
}

template HermitianMatrix<double> generate<double>(const OperatorSpec&);
template HermitianMatrix<Complex> generate<Complex>(const OperatorSpec&);

}  // namespace specfam
