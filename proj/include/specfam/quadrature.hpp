#pragma once

// Riemann-Stieltjes sums over the uniform grid lambda_i = i/k on [0, n] and
// the exact jump-measure integrals they approximate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "specfam/error.hpp"
#include "specfam/spectral_family.hpp"

namespace specfam {

template <Field T>
struct Cell {
    std::size_t index = 0;  ///< i; the cell is (lambda_{i-1}, lambda_i]
    double lower = 0.0;     ///< lambda_{i-1} (equal to lambda_i for the i = 0 cell)
    double upper = 0.0;     ///< lambda_i = i / k
    Vector<T> x;            ///< x_i = E(lambda_i) x - E(lambda_{i-1}) x
};

/// The partition of x by the grid i/k, i = 0..n k. Only cells carrying a jump
/// are stored; every omitted x_i is exactly zero. Cell 0 holds E(0) x, the
/// kernel component, which contributes nothing to either sum.
template <Field T>
struct PartitionSum {
    int n = 0;
    int k = 0;
    std::vector<Cell<T>> cells;
    double norm_sq = 0.0;  ///< ||x||^2
    double form1 = 0.0;    ///< <Ax,x>
    double form2 = 0.0;    ///< <A^2 x,x> = ||Ax||^2
    double sum1 = 0.0;     ///< sum lambda_i ||x_i||^2
    double sum2 = 0.0;     ///< sum lambda_i^2 ||x_i||^2
    double err1 = 0.0;
    double err2 = 0.0;

    double bound1() const { return norm_sq / k; }
    double bound2() const { return 2.0 * n * norm_sq / k; }
    double lambda(std::size_t i) const { return static_cast<double>(i) / k; }
};

/// Smallest integer n with E(n) x = x (within 1e-9 ||x||): the cap for which x in F(A,n).
template <Field T>
int smallest_cap(const SpectralFamily<T>& e, const Vector<T>& x) {
    const double tol = 1e-9 * norm(x);
    double top = 0.0;
    for (const auto& j : e.jumps()) {
        if (norm(j.increment * x) > tol) top = std::max(top, j.lambda);
    }
    return std::max(1, static_cast<int>(std::ceil(top)));
}

/// Index of the grid cell holding a jump at lambda: the smallest i with
/// lambda <= i/k, computed with the same floating-point comparison that
/// SpectralFamily::evaluate uses.
inline std::size_t cell_of(double lambda, int k) {
    if (lambda <= 0.0) return 0;
    auto i = static_cast<std::size_t>(std::ceil(lambda * k));
    while (i > 0 && lambda <= static_cast<double>(i - 1) / k) --i;
    while (lambda > static_cast<double>(i) / k) ++i;
    return i;
}

template <Field T>
PartitionSum<T> partition_sum(const HermitianMatrix<T>& a, const SpectralFamily<T>& e,
                              const Vector<T>& x, int n, int k) {
    if (n < 1 || k < 1) throw PreconditionError("partition_sum: n and k must be positive");
    if (e.dim() != a.dim() || x.size() != a.dim()) throw DimensionError("partition_sum: dimension mismatch");
    const auto& js = e.jumps();
    if (!js.empty() && js.front().lambda < 0.0) {
        throw PreconditionError("partition_sum: family has a jump at " +
                                std::to_string(js.front().lambda) + " < 0; A must be >= 0");
    }
    const double xn = norm(x);
    if (norm(x - e.apply(static_cast<double>(n), x)) > 1e-9 * xn) {
        throw PreconditionError("partition_sum: x is not in F(A," + std::to_string(n) +
                                "); smallest valid n is " + std::to_string(smallest_cap(e, x)));
    }

    PartitionSum<T> p;
    p.n = n;
    p.k = k;
    p.norm_sq = xn * xn;
    const auto ax = a * x;
    p.form1 = real_part(inner(ax, x));
    p.form2 = real_part(inner(ax, ax));

    // E(lambda_i) x is piecewise constant in i; walk the jumps once and emit
    // x_i = E(lambda_i) x - E(lambda_{i-1}) x for each cell a jump lands in.
    Vector<T> previous(x.size());  // E(lambda_{i-1}) x
    Vector<T> current(x.size());
    std::size_t open_cell = 0;
    bool have_open = false;
    auto flush = [&] {
        if (!have_open) return;
        Cell<T> c;
        c.index = open_cell;
        c.upper = p.lambda(open_cell);
        c.lower = open_cell == 0 ? 0.0 : p.lambda(open_cell - 1);
        c.x = current - previous;
        const double w = real_part(inner(c.x, c.x));
        p.sum1 += c.upper * w;
        p.sum2 += c.upper * c.upper * w;
        p.cells.push_back(std::move(c));
        previous = current;
        have_open = false;
    };
    for (const auto& j : js) {
        const std::size_t i = cell_of(j.lambda, k);
        if (have_open && i != open_cell) flush();
        open_cell = i;
        have_open = true;
        current = current + j.increment * x;
    }
    flush();

    p.err1 = std::abs(p.form1 - p.sum1);
    p.err2 = std::abs(p.form2 - p.sum2);
    return p;
}

/// Partition bookkeeping: ||sum x_i - x|| / ||x||, |sum ||x_i||^2 - ||x||^2| / ||x||^2,
/// and max |<x_i,x_j>| / ||x||^2 over i != j.
struct PartitionDiagnostics {
    double sum_residual = 0.0;
    double pythagoras = 0.0;
    double cross_terms = 0.0;
};

template <Field T>
PartitionDiagnostics diagnose(const PartitionSum<T>& p, const Vector<T>& x) {
    PartitionDiagnostics d;
    if (p.norm_sq == 0.0) return d;
    Vector<T> total(x.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < p.cells.size(); ++i) {
        total = total + p.cells[i].x;
        mass += real_part(inner(p.cells[i].x, p.cells[i].x));
        for (std::size_t j = i + 1; j < p.cells.size(); ++j) {
            d.cross_terms = std::max(d.cross_terms, magnitude(inner(p.cells[i].x, p.cells[j].x)) / p.norm_sq);
        }
    }
    d.sum_residual = norm(total - x) / std::sqrt(p.norm_sq);
    d.pythagoras = std::abs(mass - p.norm_sq) / p.norm_sq;
    return d;
}

inline constexpr double per_cell_slack = 1e-10;

/// Worst relative violation over stored cells of
///   lambda_{i-1} ||x_i||^2 <= <A x_i,x_i> <= lambda_i ||x_i||^2,
///   the same with squares,
///   |<(A - lambda_i) x_i,x_i>| <= ||x_i||^2 / k,
///   |<(A^2 - lambda_i^2) x_i,x_i>| <= 2n ||x_i||^2 / k.
/// Each violation is divided by (1 + lambda_i^p) ||x_i||^2 with p the power of A involved.
template <Field T>
double per_cell_violation(const HermitianMatrix<T>& a, const PartitionSum<T>& p) {
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& c : p.cells) {
        const double w = real_part(inner(c.x, c.x));
        if (w == 0.0) continue;
        const auto ax = a * c.x;
        const double q1 = real_part(inner(ax, c.x));
        const double q2 = real_part(inner(ax, ax));
        const double lo = c.lower, hi = c.upper;
        const double s1 = (1.0 + hi) * w;
        const double s2 = (1.0 + hi * hi) * w;
        worst = std::max(worst, (lo * w - q1) / s1);
        worst = std::max(worst, (q1 - hi * w) / s1);
        worst = std::max(worst, (lo * lo * w - q2) / s2);
        worst = std::max(worst, (q2 - hi * hi * w) / s2);
        worst = std::max(worst, (std::abs(q1 - hi * w) - w / p.k) / s1);
        worst = std::max(worst, (std::abs(q2 - hi * hi * w) - 2.0 * p.n * w / p.k) / s2);
    }
    return worst == -std::numeric_limits<double>::infinity() ? 0.0 : worst;
}

template <Field T>
CheckResult per_cell_bounds(const HermitianMatrix<T>& a, const SpectralFamily<T>& e,
                            const Vector<T>& x, int n, int k) {
    const auto p = partition_sum(a, e, x, n, k);
    const double v = per_cell_violation(a, p);
    return {v <= per_cell_slack, v, per_cell_slack};
}

/// Exact integrals against the jump measure d<E(lambda)x,x>:
/// (sum lambda_j <inc_j x,x>, sum lambda_j^2 <inc_j x,x>).
template <Field T>
std::pair<double, double> integral_form(const SpectralFamily<T>& e, const Vector<T>& x) {
    double first = 0.0, second = 0.0;
    for (const auto& j : e.jumps()) {
        const double w = real_part(inner(j.increment * x, x));
        first += j.lambda * w;
        second += j.lambda * j.lambda * w;
    }
    return {first, second};
}

/// Integral of lambda against d<E(lambda)x,y>, assembled by polarization from
/// the quadratic measures q(z) = sum lambda_j <inc_j z,z>: two terms over the
/// reals, four over the complex field.
template <Field T>
T bilinear_form(const SpectralFamily<T>& e, const Vector<T>& x, const Vector<T>& y) {
    auto q = [&](const Vector<T>& z) { return integral_form(e, z).first; };
    if constexpr (is_complex_v<T>) {
        T acc{};
        T phase{1.0, 0.0};
        const T i{0.0, 1.0};
        for (int s = 0; s < 4; ++s) {
            Vector<T> z = x;
            axpy(phase, y, z);
            acc += phase * q(z);
            phase *= i;
        }
        return acc * 0.25;
    } else {
        return 0.25 * (q(x + y) - q(x - y));
    }
}

/// sum_j lambda_j inc_j
template <Field T>
HermitianMatrix<T> reconstruct_operator(const SpectralFamily<T>& e) {
    Matrix<T> m(e.dim(), e.dim());
    for (const auto& j : e.jumps()) m += j.increment.matrix() * T{j.lambda};
    return HermitianMatrix<T>(m);
}

}  // namespace specfam
