#pragma once

// The subspaces F(A,lambda) = { x : ||A^n x|| <= lambda^n ||x|| for all n >= 1 }
// and executable forms of the inclusions and inequalities they satisfy.
//
// Two independent routes compute F(A,lambda):
//  * classification: eigenvectors of the Jacobi oracle with |mu| <= lambda,
//  * growth test: a Krylov iteration on x that estimates
//    lim ||A^m x||^(1/m) without any eigendecomposition of A.
// subspace() builds with the first and re-validates every vector with the second.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "specfam/error.hpp"
#include "specfam/linalg.hpp"
#include "specfam/random.hpp"

namespace specfam {

/// Outcome of a randomized or structural check: pass flag plus the worst
/// residual seen and the tolerance it was held to.
struct CheckResult {
    bool passed = true;
    double residual = 0.0;
    double tolerance = 0.0;

    explicit operator bool() const noexcept { return passed; }
};

struct MembershipVerdict {
    bool member = false;
    double growth_rate_estimate = 0.0;  ///< estimate of lim ||A^m x||^(1/m)
    int iterations_used = 0;
    double margin = 0.0;  ///< lambda - growth_rate_estimate
};

struct MembershipOptions {
    double rel_tol = 1e-8;
    int m_max = 200;
};

/// Growth test for x in F(A,lambda), independent of any eigendecomposition.
///
/// Lanczos with full reorthogonalization builds an orthonormal basis Q of the
/// Krylov space of x and the tridiagonal T = Q^* A Q, with x = ||x|| q_0. The
/// growth rate lim ||A^m x||^(1/m) is the largest |theta| over Ritz pairs
/// (theta, s) of T that carry weight |s_0| of x. Rounding keeps leaking tiny
/// components outside the true Krylov space; they surface as Ritz pairs with
/// negligible weight, so pairs with |s_0| <= rel_tol are not counted. This is
/// membership up to a component of relative size rel_tol outside F(A,lambda).
/// lambda == 0 is a kernel test: ||Ax|| <= 1e-12 ||A||_F ||x||; that floor also
/// caps every limit from below.
template <Field T>
MembershipVerdict membership(const HermitianMatrix<T>& a, double lambda, const Vector<T>& x,
                             MembershipOptions opt = {}) {
    if (x.size() != a.dim()) throw DimensionError("membership: vector length differs from operator");
    if (lambda < 0.0) throw PreconditionError("membership: lambda must be nonnegative");
    const double xnorm = norm(x);
    if (xnorm == 0.0) throw PreconditionError("membership: x = 0 has no growth direction");

    const double scale = a.frobenius();
    MembershipVerdict v;
    if (lambda == 0.0) {
        const double ax = norm(a * x);
        v.member = ax <= 1e-12 * scale * xnorm;
        v.growth_rate_estimate = ax / xnorm;
        v.iterations_used = 1;
        v.margin = -v.growth_rate_estimate;
        return v;
    }

    const double limit = std::max(lambda * (1.0 + opt.rel_tol), 1e-12 * scale);
    const double exhausted = 1e-11 * scale;
    const std::size_t max_steps =
        std::min<std::size_t>(a.dim(), static_cast<std::size_t>(std::max(opt.m_max, 1)));

    std::vector<Vector<T>> q;
    std::vector<double> alpha, beta;
    Vector<T> first = x;
    for (auto& e : first) e /= xnorm;
    q.push_back(std::move(first));

    for (std::size_t step = 0; step < max_steps; ++step) {
        v.iterations_used = static_cast<int>(step + 1);
        Vector<T> w = a * q[step];
        alpha.push_back(real_part(inner(w, q[step])));
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& qi : q) axpy(-inner(w, qi), qi, w);
        }
        const double b = norm(w);
        if (b <= exhausted || step + 1 == max_steps) break;
        beta.push_back(b);
        for (auto& e : w) e /= b;
        q.push_back(std::move(w));
    }

    const std::size_t m = alpha.size();
    Matrix<double> t(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        t(i, i) = alpha[i];
        if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
    }
    const auto ritz = eigen_oracle(HermitianMatrix<double>(t));
    double growth = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        if (std::abs(ritz.eigenvectors.columns()(0, i)) > opt.rel_tol) {
            growth = std::max(growth, std::abs(ritz.eigenvalues[i]));
        }
    }
    v.growth_rate_estimate = growth;
    v.member = growth <= limit;
    v.margin = lambda - growth;
    return v;
}

/// Relative tolerance used when classifying eigenvalues against lambda.
inline constexpr double classification_rel_tol = 1e-10;
/// Eigenvalues this small relative to ||A||_F count as kernel for lambda = 0.
inline constexpr double kernel_rel_tol = 1e-12;

/// F(A,lambda) together with a basis of its orthogonal complement.
template <Field T>
struct GeometricSubspace {
    double lambda = 0.0;
    OrthoBasis<T> basis;
    OrthoBasis<T> complement;
    Projector<T> projector;

    std::size_t dim() const noexcept { return basis.size(); }

    /// Worst relative excess of ||A^m v|| over (lambda(1+tol))^m ||v|| + m d u ||A||_F^m
    /// across basis vectors v and m = 1..m_check; the second term is the rounding
    /// floor any computed A^m v carries anyway. Evaluated in logarithms so that
    /// large ||A|| cannot overflow. Values <= 0 mean every bound holds.
    double power_bound_excess(const HermitianMatrix<T>& a, int m_check = 50,
                              double rel_tol = 1e-8) const {
        const double u = std::numeric_limits<double>::epsilon();
        const double log_s = std::log(std::max(a.frobenius(), std::numeric_limits<double>::min()));
        const double log_du = std::log(static_cast<double>(a.dim()) * u);
        const double log_l = lambda > 0.0 ? std::log(lambda * (1.0 + rel_tol))
                                           : -std::numeric_limits<double>::infinity();
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < basis.size(); ++j) {
            Vector<T> p = basis.vector(j);
            double log_norm = 0.0;
            for (int m = 1; m <= m_check; ++m) {
                p = a * p;
                const double r = norm(p);
                if (r == 0.0) break;
                log_norm += std::log(r);
                for (auto& e : p) e /= r;
                const double b1 = m * log_l;
                const double b2 = std::log(static_cast<double>(m)) + log_du + m * log_s;
                const double hi = std::max(b1, b2);
                const double log_bound = hi + std::log1p(std::exp(std::min(b1, b2) - hi));
                worst = std::max(worst, std::expm1(log_norm - log_bound));
            }
        }
        return worst == -std::numeric_limits<double>::infinity() ? 0.0 : worst;
    }
};

/// Builds F(A,lambda) from a precomputed eigendecomposition of A.
template <Field T>
GeometricSubspace<T> subspace(const HermitianMatrix<T>& a, double lambda,
                              const EigenDecomposition<T>& eig) {
    if (lambda < 0.0) throw PreconditionError("subspace: lambda must be nonnegative");
    if (eig.dim() != a.dim()) throw DimensionError("subspace: decomposition has wrong dimension");
    const double cutoff =
        std::max(kernel_rel_tol * a.frobenius(), lambda * (1.0 + classification_rel_tol));
    std::vector<std::size_t> in, out;
    for (std::size_t j = 0; j < eig.dim(); ++j) {
        (std::abs(eig.eigenvalues[j]) <= cutoff ? in : out).push_back(j);
    }
    GeometricSubspace<T> s;
    s.lambda = lambda;
    s.basis = select_columns(eig.eigenvectors, in);
    s.complement = select_columns(eig.eigenvectors, out);
    s.projector = projector_from_basis(s.basis);

    for (std::size_t j = 0; j < s.basis.size(); ++j) {
        const auto verdict = membership(a, lambda, s.basis.vector(j));
        if (!verdict.member) {
            throw Error("subspace: eigenvector for " + std::to_string(eig.eigenvalues[in[j]]) +
                        " failed the growth test at lambda " + std::to_string(lambda) +
                        " (estimate " + std::to_string(verdict.growth_rate_estimate) + ")");
        }
    }
    return s;
}

template <Field T>
GeometricSubspace<T> subspace(const HermitianMatrix<T>& a, double lambda) {
    return subspace(a, lambda, eigen_oracle(a));
}

/// ||(I - P) C P||_F: zero iff range(P) is invariant under C.
template <Field T>
double invariance_residual(const Matrix<T>& c, const Projector<T>& p) {
    const Matrix<T> cp = c * p.matrix();
    return frobenius_norm(cp - p.matrix() * cp);
}

inline constexpr double inclusion_tol = 1e-8;

/// F(A+delta, eps) is contained in F(A, delta+eps).
template <Field T>
CheckResult check_inclusion_shift(const HermitianMatrix<T>& a, double delta, double eps) {
    if (delta < 0.0 || eps < 0.0) throw PreconditionError("check_inclusion_shift: delta, eps >= 0");
    const auto small = subspace(shifted(a, delta), eps);
    const auto big = subspace(a, delta + eps);
    const double r = order_residual(small.projector, big.projector);
    return {r <= inclusion_tol, r, inclusion_tol};
}

/// F(A^2, eps^2) == F(A, eps).
template <Field T>
CheckResult check_square_identity(const HermitianMatrix<T>& a, double eps) {
    if (eps < 0.0) throw PreconditionError("check_square_identity: eps >= 0");
    const auto sq = subspace(squared(a), eps * eps);
    const auto lin = subspace(a, eps);
    const double r = frobenius_norm(sq.projector.matrix() - lin.projector.matrix());
    return {r <= inclusion_tol, r, inclusion_tol};
}

/// For A >= 1: the complement of F(A^{-1}, 1/eps) lies inside F(A, eps).
template <Field T>
CheckResult check_inverse_inclusion(const HermitianMatrix<T>& a, double eps) {
    if (!(eps > 0.0)) throw PreconditionError("check_inverse_inclusion: eps must be positive");
    const auto eig = eigen_oracle(a);
    if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < 1.0 - 1e-12) {
        throw PreconditionError("check_inverse_inclusion: A must satisfy A >= 1, smallest eigenvalue is " +
                                std::to_string(eig.eigenvalues.front()));
    }
    const auto inverse = eig.apply([](double mu) { return 1.0 / mu; });
    const auto inv_sub = subspace(inverse, 1.0 / eps);
    const auto target = subspace(a, eps, eig);
    const auto comp = Projector<T>::from_matrix(
        HermitianMatrix<T>(Matrix<T>::identity(a.dim()) - inv_sub.projector.matrix()));
    const double r = order_residual(comp, target.projector);
    return {r <= inclusion_tol, r, inclusion_tol};
}

/// With S = A^2 + 1: F(S,eps) in F(A^2, eps+1) in F(A, sqrt(eps+1)).
template <Field T>
CheckResult check_s_chain(const HermitianMatrix<T>& a, double eps) {
    if (!(eps > 0.0)) throw PreconditionError("check_s_chain: eps must be positive");
    const auto sq = squared(a);
    const auto s_sub = subspace(shifted(sq, 1.0), eps);
    const auto sq_sub = subspace(sq, eps + 1.0);
    const auto a_sub = subspace(a, std::sqrt(eps + 1.0));
    const double r = std::max(order_residual(s_sub.projector, sq_sub.projector),
                              order_residual(sq_sub.projector, a_sub.projector));
    return {r <= inclusion_tol, r, inclusion_tol};
}

namespace detail {
template <Field T>
bool nonnegative(const EigenDecomposition<T>& eig, double scale) {
    return eig.eigenvalues.empty() || eig.eigenvalues.front() >= -1e-14 * scale;
}
}  // namespace detail

/// Strict growth on the complement: for random nonzero x in F(A,lambda)^perp,
/// ||Ax|| > lambda ||x||, and <Ax,x> > lambda <x,x> when A >= 0.
/// Residual is the smallest observed margin, relative to ||x||^2.
template <Field T>
CheckResult check_strict_lower(const HermitianMatrix<T>& a, double lambda, int trials, Rng& rng) {
    const auto eig = eigen_oracle(a);
    const auto sub = subspace(a, lambda, eig);
    if (sub.complement.empty()) {
        throw PreconditionError("check_strict_lower: F(A,lambda)^perp is {0}");
    }
    double gap = std::numeric_limits<double>::infinity();
    for (double mu : eig.eigenvalues)
        if (std::abs(mu) > lambda) gap = std::min(gap, std::abs(mu) - lambda);
    if (gap < 1e-6) {
        throw PreconditionError("check_strict_lower: spectrum within 1e-6 above lambda");
    }
    const bool psd = detail::nonnegative(eig, a.frobenius());

    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        const auto x = random_in_span(sub.complement, rng);
        const double xx = norm(x);
        if (xx == 0.0) continue;
        const auto ax = a * x;
        worst = std::min(worst, (norm(ax) - lambda * xx) / xx);
        if (psd) worst = std::min(worst, (real_part(inner(ax, x)) - lambda * xx * xx) / (xx * xx));
    }
    return {worst > 0.0, worst, 0.0};
}

/// Worst relative violation of the sandwich inequalities at one vector x:
/// lambda ||x|| <= ||Ax|| <= mu ||x||, its squared form
/// lambda^2 <x,x> <= <A^2 x,x> <= mu^2 <x,x>, and for A >= 0 the form bounds
/// lambda <x,x> <= <Ax,x> <= mu <x,x>. Values <= 0 mean all hold.
template <Field T>
double sandwich_violation(const HermitianMatrix<T>& a, double lambda, double mu, const Vector<T>& x,
                          bool psd) {
    const double xx = norm(x);
    if (xx == 0.0) return 0.0;
    const auto ax = a * x;
    const double n1 = norm(ax) / xx;
    const double q2 = n1 * n1;
    double v = std::max(lambda - n1, n1 - mu) / std::max(mu, 1.0);
    v = std::max(v, std::max(lambda * lambda - q2, q2 - mu * mu) / std::max(mu * mu, 1.0));
    if (psd) {
        const double q1 = real_part(inner(ax, x)) / (xx * xx);
        v = std::max(v, std::max(lambda - q1, q1 - mu) / std::max(mu, 1.0));
    }
    return v;
}

inline constexpr double sandwich_slack = 1e-10;

/// Pointwise sandwich check, including the degenerate lambda == mu case at an
/// eigenvector. `psd` selects the extra form bounds that hold for A >= 0.
template <Field T>
CheckResult check_sandwich_at(const HermitianMatrix<T>& a, double lambda, double mu,
                              const Vector<T>& x, bool psd) {
    if (lambda > mu) throw PreconditionError("check_sandwich_at: lambda > mu");
    const double v = sandwich_violation(a, lambda, mu, x, psd);
    return {v <= sandwich_slack, v, sandwich_slack};
}

template <Field T>
CheckResult check_sandwich_at(const HermitianMatrix<T>& a, double lambda, double mu,
                              const Vector<T>& x) {
    return check_sandwich_at(a, lambda, mu, x, detail::nonnegative(eigen_oracle(a), a.frobenius()));
}

/// Random x in the shell F(A,mu) ∩ F(A,lambda)^perp satisfy the sandwich bounds.
template <Field T>
CheckResult check_sandwich(const HermitianMatrix<T>& a, double lambda, double mu, int trials,
                           Rng& rng) {
    if (lambda > mu) throw PreconditionError("check_sandwich: lambda > mu");
    const auto eig = eigen_oracle(a);
    const auto inner_sub = subspace(a, lambda, eig);
    const auto outer_sub = subspace(a, mu, eig);
    // Both are spans of oracle eigenvectors, so the shell is spanned by the
    // eigenvectors in the outer set but not the inner one.
    std::vector<std::size_t> shell;
    const double floor = kernel_rel_tol * a.frobenius();
    const double lo = std::max(floor, lambda * (1.0 + classification_rel_tol));
    const double hi = std::max(floor, mu * (1.0 + classification_rel_tol));
    for (std::size_t j = 0; j < eig.dim(); ++j) {
        const double m = std::abs(eig.eigenvalues[j]);
        if (m > lo && m <= hi) shell.push_back(j);
    }
    if (shell.empty()) throw PreconditionError("check_sandwich: F(A,mu) ∩ F(A,lambda)^perp is {0}");
    if (inner_sub.dim() + shell.size() != outer_sub.dim()) {
        throw Error("check_sandwich: shell dimension inconsistent with nested subspaces");
    }
    const auto basis = select_columns(eig.eigenvectors, shell);
    const bool psd = detail::nonnegative(eig, a.frobenius());
    double worst = -std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        worst = std::max(worst, sandwich_violation(a, lambda, mu, random_in_span(basis, rng), psd));
    }
    return {worst <= sandwich_slack, worst, sandwich_slack};
}

}  // namespace specfam
