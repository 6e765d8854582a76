#include "specfam/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "specfam/error.hpp"

namespace specfam {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

MatrixMarketHeader parse_header(const std::string& line) {
    std::istringstream ss(line);
    std::string banner, object, format, field, symmetry;
    if (!(ss >> banner >> object >> format >> field >> symmetry)) {
        throw ParseError("Matrix Market: incomplete header line '" + line + "'");
    }
    if (banner != "%%MatrixMarket") throw ParseError("Matrix Market: missing %%MatrixMarket banner");
    if (lower(object) != "matrix") throw ParseError("Matrix Market: object must be 'matrix'");

    MatrixMarketHeader h;
    format = lower(format);
    if (format == "coordinate") {
        h.format = MatrixMarketHeader::Format::coordinate;
    } else if (format == "array") {
        h.format = MatrixMarketHeader::Format::array;
    } else {
        throw ParseError("Matrix Market: unsupported format '" + format + "'");
    }
    field = lower(field);
    if (field == "real" || field == "double") {
        h.field = MatrixMarketHeader::ValueType::real;
    } else if (field == "integer") {
        h.field = MatrixMarketHeader::ValueType::integer;
    } else if (field == "complex") {
        h.field = MatrixMarketHeader::ValueType::complex;
    } else {
        throw ParseError("Matrix Market: unsupported field '" + field + "'");
    }
    symmetry = lower(symmetry);
    if (symmetry == "general") {
        h.symmetry = MatrixMarketHeader::Symmetry::general;
    } else if (symmetry == "symmetric") {
        h.symmetry = MatrixMarketHeader::Symmetry::symmetric;
    } else if (symmetry == "hermitian") {
        h.symmetry = MatrixMarketHeader::Symmetry::hermitian;
    } else {
        throw ParseError("Matrix Market: unsupported symmetry '" + symmetry + "'");
    }
    return h;
}

// Next line that is neither a comment nor blank.
bool next_data_line(std::istream& in, std::string& line) {
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') continue;
        return true;
    }
    return false;
}

Complex read_value(std::istringstream& ss, bool complex_field, const std::string& line) {
    double re = 0.0, im = 0.0;
    if (!(ss >> re)) throw ParseError("Matrix Market: bad value in '" + line + "'");
    if (complex_field && !(ss >> im)) throw ParseError("Matrix Market: missing imaginary part in '" + line + "'");
    return {re, im};
}

}  // namespace

template <Field T>
MatrixMarketMatrix<T> read_matrix_market(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("Matrix Market: empty input");
    MatrixMarketMatrix<T> out;
    out.header = parse_header(line);
    const auto& h = out.header;
    const bool complex_field = h.field == MatrixMarketHeader::ValueType::complex;
    if (complex_field && !is_complex_v<T>) {
        throw ParseError("Matrix Market: complex file cannot be read in real mode");
    }
    const bool mirrored = h.symmetry != MatrixMarketHeader::Symmetry::general;

    if (!next_data_line(in, line)) throw ParseError("Matrix Market: missing size line");
    std::istringstream size_line(line);
    long long rows = 0, cols = 0, nnz = 0;
    if (!(size_line >> rows >> cols)) throw ParseError("Matrix Market: bad size line '" + line + "'");
    if (h.format == MatrixMarketHeader::Format::coordinate && !(size_line >> nnz)) {
        throw ParseError("Matrix Market: coordinate size line needs an entry count");
    }
    if (rows < 1 || cols < 1 || nnz < 0) throw ParseError("Matrix Market: nonpositive dimensions");
    if (rows != cols) throw ParseError("Matrix Market: operator must be square");
    const auto d = static_cast<std::size_t>(rows);

    Matrix<Complex> m(d, d);
    auto place = [&](std::size_t i, std::size_t j, Complex v) {
        if (mirrored) {
            m(i, j) = v;
            if (i != j) {
                m(j, i) = h.symmetry == MatrixMarketHeader::Symmetry::hermitian ? std::conj(v) : v;
            }
        } else {
            m(i, j) += v;
        }
    };

    if (h.format == MatrixMarketHeader::Format::coordinate) {
        for (long long e = 0; e < nnz; ++e) {
            if (!next_data_line(in, line)) throw ParseError("Matrix Market: fewer entries than declared");
            std::istringstream ss(line);
            long long i = 0, j = 0;
            if (!(ss >> i >> j)) throw ParseError("Matrix Market: bad entry '" + line + "'");
            if (i < 1 || j < 1 || i > rows || j > cols) {
                throw ParseError("Matrix Market: index out of range in '" + line + "'");
            }
            place(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1),
                  read_value(ss, complex_field, line));
        }
    } else {
        // Column-major; symmetric/hermitian storage lists the lower triangle only.
        for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t i = mirrored ? j : 0; i < d; ++i) {
                if (!next_data_line(in, line)) throw ParseError("Matrix Market: fewer entries than declared");
                std::istringstream ss(line);
                place(i, j, read_value(ss, complex_field, line));
            }
        }
    }

    Matrix<T> typed(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            if constexpr (is_complex_v<T>) {
                typed(i, j) = m(i, j);
            } else {
                typed(i, j) = m(i, j).real();
            }
        }
    out.matrix = HermitianMatrix<T>(typed);
    out.defect = out.matrix.symmetrization_defect();
    if (h.symmetry == MatrixMarketHeader::Symmetry::general && out.defect > max_general_defect) {
        throw ParseError("Matrix Market: general matrix is not self-adjoint (relative defect " +
                         std::to_string(out.defect) + ")");
    }
    return out;
}

template <Field T>
MatrixMarketMatrix<T> read_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    return read_matrix_market<T>(in);
}

template <Field T>
void write_matrix_market(std::ostream& out, const HermitianMatrix<T>& m) {
    out << "%%MatrixMarket matrix array " << (is_complex_v<T> ? "complex hermitian" : "real symmetric")
        << '\n';
    out << m.dim() << ' ' << m.dim() << '\n';
    char buf[64];
    for (std::size_t j = 0; j < m.dim(); ++j) {
        for (std::size_t i = j; i < m.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", real_part(m(i, j)));
            out << buf;
            if constexpr (is_complex_v<T>) {
                std::snprintf(buf, sizeof buf, "%.17g", imag_part(m(i, j)));
                out << ' ' << buf;
            }
            out << '\n';
        }
    }
}

template MatrixMarketMatrix<double> read_matrix_market<double>(std::istream&);
template MatrixMarketMatrix<Complex> read_matrix_market<Complex>(std::istream&);
template MatrixMarketMatrix<double> read_matrix_market<double>(const std::string&);
template MatrixMarketMatrix<Complex> read_matrix_market<Complex>(const std::string&);
template void write_matrix_market<double>(std::ostream&, const HermitianMatrix<double>&);
template void write_matrix_market<Complex>(std::ostream&, const HermitianMatrix<Complex>&);

}  // namespace specfam
