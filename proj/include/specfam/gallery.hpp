#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specfam/linalg.hpp"

namespace specfam {

enum class OperatorKind { laplacian1d, oscillator, random, diagonal, file };
enum class FieldMode { real, complex };

OperatorKind parse_kind(const std::string& s);
std::string to_string(OperatorKind k);
FieldMode parse_mode(const std::string& s);
std::string to_string(FieldMode m);

/// Recipe for a test operator. `dim` is ignored for `diagonal` (taken from
/// the spectrum) and for `file` (taken from the file).
struct OperatorSpec {
    OperatorKind kind = OperatorKind::random;
    std::size_t dim = 8;
    std::uint64_t seed = 1;
    std::vector<double> spectrum;
    std::string path;
    FieldMode mode = FieldMode::real;
};

/// laplacian1d: dim^2 * tridiag(-1, 2, -1), whose norm grows like 4 dim^2.
/// oscillator: laplacian1d + diag(g_i^2), g_i = (i - dim/2) / sqrt(dim).
/// random: Q diag(u) Q^*, u ~ U[-1,1], Q from orthonormalized seeded Gaussians.
/// diagonal: diag(spectrum).
/// file: Matrix Market input.
/// Deterministic for a fixed spec.
template <Field T>
HermitianMatrix<T> generate(const OperatorSpec& spec);

}  // namespace specfam
