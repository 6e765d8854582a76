#pragma once

// Self-adjoint dense linear algebra: Hermitian matrices, orthonormal bases,
// orthogonal projectors, and the cyclic Jacobi eigensolver that serves as the
// independent reference for everything built on top.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specfam/error.hpp"
#include "specfam/matrix.hpp"
#include "specfam/scalar.hpp"

namespace specfam {

/// A self-adjoint d x d matrix. Construction symmetrizes the input as
/// (M + M^*)/2, so entry(i,j) == conj(entry(j,i)) holds exactly afterwards;
/// the relative size of what was removed is kept in symmetrization_defect().
template <Field T>
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(const Matrix<T>& m) : m_(m.rows(), m.cols()) {
        if (!m.square()) {
            throw DimensionError("Hermitian matrix must be square, got " + std::to_string(m.rows()) +
                                 "x" + std::to_string(m.cols()));
        }
        const std::size_t d = m.rows();
        double removed = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = i; j < d; ++j) {
                const T avg = (m(i, j) + conj(m(j, i))) * 0.5;
                removed += (i == j ? 1.0 : 2.0) * abs2(m(i, j) - conj(m(j, i)));
                if (i == j) {
                    m_(i, i) = T{real_part(avg)};
                } else {
                    m_(i, j) = avg;
                    m_(j, i) = conj(avg);
                }
            }
        }
        const double full = frobenius_norm(m);
        defect_ = full == 0.0 ? 0.0 : std::sqrt(removed) / full;
    }

    static HermitianMatrix zero(std::size_t d) { return HermitianMatrix(Matrix<T>(d, d)); }
    static HermitianMatrix identity(std::size_t d) {
        return HermitianMatrix(Matrix<T>::identity(d));
    }
    static HermitianMatrix diagonal(std::span<const double> values) {
        return HermitianMatrix(Matrix<T>::diagonal(values));
    }

    std::size_t dim() const noexcept { return m_.rows(); }
    const Matrix<T>& matrix() const noexcept { return m_; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return m_(i, j); }
    double frobenius() const { return frobenius_norm(m_); }
    double symmetrization_defect() const noexcept { return defect_; }

    Vector<T> operator*(const Vector<T>& x) const { return m_ * x; }

    friend bool operator==(const HermitianMatrix& a, const HermitianMatrix& b) {
        return a.m_ == b.m_;
    }

private:
    Matrix<T> m_;
    double defect_ = 0.0;
};

/// A + c I
template <Field T>
HermitianMatrix<T> shifted(const HermitianMatrix<T>& a, double c) {
    Matrix<T> m = a.matrix();
    for (std::size_t i = 0; i < a.dim(); ++i) m(i, i) += T{c};
    return HermitianMatrix<T>(m);
}

template <Field T>
HermitianMatrix<T> negated(const HermitianMatrix<T>& a) {
    return HermitianMatrix<T>(-a.matrix());
}

template <Field T>
HermitianMatrix<T> squared(const HermitianMatrix<T>& a) {
    return HermitianMatrix<T>(a.matrix() * a.matrix());
}

/// Quadratic form <Ax, x>; real up to rounding for self-adjoint A.
template <Field T>
T form(const HermitianMatrix<T>& a, const Vector<T>& x) {
    return inner(a * x, x);
}

/// Orthonormal columns spanning a subspace of K^d. May be empty (d x 0).
template <Field T>
class OrthoBasis {
public:
    OrthoBasis() = default;
    explicit OrthoBasis(std::size_t dim) : v_(dim, 0) {}

    /// Caller guarantees orthonormal columns (e.g. eigenvectors from the oracle).
    static OrthoBasis from_orthonormal_columns(Matrix<T> columns) {
        OrthoBasis b;
        b.v_ = std::move(columns);
        return b;
    }

    std::size_t dim() const noexcept { return v_.rows(); }
    std::size_t size() const noexcept { return v_.cols(); }
    bool empty() const noexcept { return v_.cols() == 0; }
    const Matrix<T>& columns() const noexcept { return v_; }
    Vector<T> vector(std::size_t j) const { return v_.column(j); }

    /// Coordinates c -> V c.
    Vector<T> embed(const Vector<T>& coords) const { return v_ * coords; }

    /// Largest |(V^*V - I)_ij|.
    double orthonormality_defect() const {
        Matrix<T> g = adjoint_times(v_, v_);
        for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) -= T{1};
        return max_abs_entry(g);
    }

private:
    Matrix<T> v_;
};

template <Field T>
OrthoBasis<T> select_columns(const OrthoBasis<T>& b, std::span<const std::size_t> which) {
    Matrix<T> m(b.dim(), which.size());
    for (std::size_t j = 0; j < which.size(); ++j) m.set_column(j, b.columns().column(which[j]));
    return OrthoBasis<T>::from_orthonormal_columns(std::move(m));
}

/// Modified Gram-Schmidt with one re-orthogonalization pass. Inputs whose
/// residual drops below 1e-12 times the largest input norm are discarded, so
/// rank-deficient input yields a smaller basis.
template <Field T>
OrthoBasis<T> orthonormalize(std::size_t dim, std::span<const Vector<T>> vs) {
    double max_norm = 0.0;
    for (const auto& v : vs) {
        if (v.size() != dim) throw DimensionError("orthonormalize: vector length mismatch");
        max_norm = std::max(max_norm, norm(v));
    }
    const double drop_below = 1e-12 * max_norm;
    std::vector<Vector<T>> kept;
    for (const auto& v : vs) {
        Vector<T> w = v;
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : kept) axpy(-inner(w, q), q, w);
        }
        const double r = norm(w);
        if (r <= drop_below || r == 0.0) continue;
        for (auto& e : w) e /= r;
        kept.push_back(std::move(w));
    }
    Matrix<T> m(dim, kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) m.set_column(j, kept[j]);
    return OrthoBasis<T>::from_orthonormal_columns(std::move(m));
}

template <Field T>
OrthoBasis<T> orthonormalize(const Matrix<T>& columns) {
    std::vector<Vector<T>> vs;
    vs.reserve(columns.cols());
    for (std::size_t j = 0; j < columns.cols(); ++j) vs.push_back(columns.column(j));
    return orthonormalize<T>(columns.rows(), vs);
}

/// Orthonormal basis of the orthogonal complement of span(b) in K^d.
template <Field T>
OrthoBasis<T> complement(const OrthoBasis<T>& b) {
    const std::size_t d = b.dim();
    std::vector<Vector<T>> vs;
    for (std::size_t j = 0; j < b.size(); ++j) vs.push_back(b.vector(j));
    for (std::size_t i = 0; i < d; ++i) vs.push_back(unit_vector<T>(d, i));
    auto full = orthonormalize<T>(d, vs);
    std::vector<std::size_t> rest;
    for (std::size_t j = b.size(); j < full.size(); ++j) rest.push_back(j);
    return select_columns(full, rest);
}

/// Self-adjoint idempotent matrix.
template <Field T>
class Projector {
public:
    Projector() = default;

    /// Wraps a matrix the caller knows to be an orthogonal projector (sums of
    /// orthogonal projectors, differences of nested ones, lifts V P V^*).
    static Projector from_matrix(HermitianMatrix<T> m) {
        Projector p;
        p.m_ = std::move(m);
        return p;
    }

    static Projector zero(std::size_t d) { return from_matrix(HermitianMatrix<T>::zero(d)); }
    static Projector identity(std::size_t d) {
        return from_matrix(HermitianMatrix<T>::identity(d));
    }

    std::size_t dim() const noexcept { return m_.dim(); }
    const HermitianMatrix<T>& hermitian() const noexcept { return m_; }
    const Matrix<T>& matrix() const noexcept { return m_.matrix(); }

    Vector<T> operator*(const Vector<T>& x) const { return m_ * x; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < dim(); ++i) t += real_part(m_(i, i));
        return t;
    }
    std::size_t rank() const { return static_cast<std::size_t>(std::llround(trace())); }

    /// ||P^2 - P||_F
    double idempotence_defect() const {
        return frobenius_norm(m_.matrix() * m_.matrix() - m_.matrix());
    }

private:
    HermitianMatrix<T> m_;
};

/// P = V V^*; the empty basis gives the zero projector.
template <Field T>
Projector<T> projector_from_basis(const OrthoBasis<T>& v) {
    const auto& c = v.columns();
    return Projector<T>::from_matrix(HermitianMatrix<T>(c * c.adjoint()));
}

/// ||Q P - P||_F: zero exactly when range(P) is contained in range(Q), i.e. P <= Q.
template <Field T>
double order_residual(const Projector<T>& smaller, const Projector<T>& larger) {
    return frobenius_norm(larger.matrix() * smaller.matrix() - smaller.matrix());
}

template <Field T>
struct EigenDecomposition {
    std::vector<double> eigenvalues;  ///< ascending
    OrthoBasis<T> eigenvectors;       ///< column j belongs to eigenvalues[j]
    int sweeps = 0;
    double off_diagonal = 0.0;  ///< Frobenius mass left off the diagonal

    std::size_t dim() const noexcept { return eigenvalues.size(); }

    /// V f(diag) V^*
    template <class Fn>
    HermitianMatrix<T> apply(Fn&& fn) const {
        const std::size_t d = dim();
        Matrix<T> scaled = eigenvectors.columns();
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) scaled(i, j) *= T{fn(eigenvalues[j])};
        return HermitianMatrix<T>(scaled * eigenvectors.columns().adjoint());
    }

    HermitianMatrix<T> reconstruct() const {
        return apply([](double mu) { return mu; });
    }

    /// Orthogonal projector onto the span of eigenvectors whose eigenvalue satisfies `keep`.
    template <class Pred>
    Projector<T> projector(Pred&& keep) const {
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < dim(); ++j)
            if (keep(eigenvalues[j])) idx.push_back(j);
        return projector_from_basis(select_columns(eigenvectors, idx));
    }

    double max_abs_eigenvalue() const {
        double m = 0.0;
        for (double mu : eigenvalues) m = std::max(m, std::abs(mu));
        return m;
    }
};

inline constexpr int jacobi_max_sweeps = 100;
inline constexpr double jacobi_off_diagonal_tol = 1e-14;

/// Cyclic Jacobi rotations, complex-aware: each 2x2 pivot block is first made
/// real by a phase on column q, then annihilated by a real rotation.
/// Stops when the off-diagonal Frobenius mass is <= 1e-14 ||A||_F.
template <Field T>
EigenDecomposition<T> eigen_oracle(const HermitianMatrix<T>& a) {
    const std::size_t d = a.dim();
    Matrix<T> w = a.matrix();
    Matrix<T> v = Matrix<T>::identity(d);
    const double scale = a.frobenius();

    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (i != j) s += abs2(w(i, j));
        return std::sqrt(s);
    };

    int sweep = 0;
    double off = off_mass();
    while (off > jacobi_off_diagonal_tol * scale) {
        if (sweep == jacobi_max_sweeps) {
            throw ConvergenceError("Jacobi eigensolver did not converge in " +
                                       std::to_string(jacobi_max_sweeps) +
                                       " sweeps; off-diagonal mass " + std::to_string(off),
                                   off);
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const T b = w(p, q);
                const double absb = magnitude(b);
                if (absb == 0.0) continue;
                const double app = real_part(w(p, p));
                const double aqq = real_part(w(q, q));
                const double theta = (aqq - app) / (2.0 * absb);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 0.5 / theta;
                } else {
                    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const T phase = conj(b) / absb;
                const T g_pp{c};
                const T g_pq{s};
                const T g_qp = phase * (-s);
                const T g_qq = phase * c;

                for (std::size_t k = 0; k < d; ++k) {
                    const T wkp = w(k, p);
                    const T wkq = w(k, q);
                    w(k, p) = wkp * g_pp + wkq * g_qp;
                    w(k, q) = wkp * g_pq + wkq * g_qq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const T wpk = w(p, k);
                    const T wqk = w(q, k);
                    w(p, k) = conj(g_pp) * wpk + conj(g_qp) * wqk;
                    w(q, k) = conj(g_pq) * wpk + conj(g_qq) * wqk;
                }
                w(p, q) = T{};
                w(q, p) = T{};
                w(p, p) = T{real_part(w(p, p))};
                w(q, q) = T{real_part(w(q, q))};
                for (std::size_t k = 0; k < d; ++k) {
                    const T vkp = v(k, p);
                    const T vkq = v(k, q);
                    v(k, p) = vkp * g_pp + vkq * g_qp;
                    v(k, q) = vkp * g_pq + vkq * g_qq;
                }
            }
        }
        off = off_mass();
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return real_part(w(i, i)) < real_part(w(j, j));
    });

    EigenDecomposition<T> out;
    out.eigenvalues.resize(d);
    Matrix<T> sorted(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        out.eigenvalues[j] = real_part(w(order[j], order[j]));
        sorted.set_column(j, v.column(order[j]));
    }
    out.eigenvectors = OrthoBasis<T>::from_orthonormal_columns(std::move(sorted));
    out.sweeps = sweep;
    out.off_diagonal = off;
    return out;
}

/// Solves M X = R for Hermitian positive definite M by Cholesky (M = L L^*).
template <Field T>
Matrix<T> solve_hpd(const HermitianMatrix<T>& m, const Matrix<T>& rhs) {
    const std::size_t d = m.dim();
    if (rhs.rows() != d) throw DimensionError("solve_hpd: right-hand side has wrong row count");
    Matrix<T> l(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        double diag = real_part(m(j, j));
        for (std::size_t k = 0; k < j; ++k) diag -= abs2(l(j, k));
        if (!(diag > 0.0)) {
            throw PreconditionError("solve_hpd: matrix is not positive definite (pivot " +
                                    std::to_string(j) + ")");
        }
        const double ljj = std::sqrt(diag);
        l(j, j) = T{ljj};
        for (std::size_t i = j + 1; i < d; ++i) {
            T s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * conj(l(j, k));
            l(i, j) = s / ljj;
        }
    }
    Matrix<T> x = rhs;
    for (std::size_t c = 0; c < x.cols(); ++c) {
        for (std::size_t i = 0; i < d; ++i) {  // L y = r
            T s = x(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t ii = d; ii-- > 0;) {  // L^* x = y
            T s = x(ii, c);
            for (std::size_t k = ii + 1; k < d; ++k) s -= conj(l(k, ii)) * x(k, c);
            x(ii, c) = s / conj(l(ii, ii));
        }
    }
    return x;
}

/// V^* A V: the compression of A onto span(V), expressed in V's coordinates.
template <Field T>
HermitianMatrix<T> compress(const HermitianMatrix<T>& a, const OrthoBasis<T>& v) {
    return HermitianMatrix<T>(adjoint_times(v.columns(), a.matrix() * v.columns()));
}

/// V M V^*: lifts an operator on span(V)'s coordinates back into K^d.
template <Field T>
HermitianMatrix<T> lift(const HermitianMatrix<T>& m, const OrthoBasis<T>& v) {
    return HermitianMatrix<T>(v.columns() * m.matrix() * v.columns().adjoint());
}

}  // namespace specfam
