#pragma once

#include <iosfwd>
#include <string>

#include "specfam/linalg.hpp"

namespace specfam {

struct MatrixMarketHeader {
    enum class Format { coordinate, array } format = Format::array;
    enum class ValueType { real, integer, complex } field = ValueType::real;
    enum class Symmetry { general, symmetric, hermitian } symmetry = Symmetry::general;
};

template <Field T>
struct MatrixMarketMatrix {
    MatrixMarketHeader header;
    HermitianMatrix<T> matrix;
    double defect = 0.0;  ///< ||M - M^*||_F / ||M||_F of the stored entries
};

/// Largest symmetrization defect accepted for `general` input.
inline constexpr double max_general_defect = 1e-6;

/// Reads `%%MatrixMarket matrix coordinate|array real|integer|complex
/// general|symmetric|hermitian`. Symmetric/hermitian storage is mirrored;
/// general input is symmetrized. A complex file cannot be read as real.
template <Field T>
MatrixMarketMatrix<T> read_matrix_market(std::istream& in);

template <Field T>
MatrixMarketMatrix<T> read_matrix_market(const std::string& path);

/// Writes the lower triangle in array format (`real symmetric` or
/// `complex hermitian`) with 17 significant digits.
template <Field T>
void write_matrix_market(std::ostream& out, const HermitianMatrix<T>& m);

}  // namespace specfam
