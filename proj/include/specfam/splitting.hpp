#pragma once

// Positive/negative splitting A = A_- ⊕ A_+ with A_- <= 0 <= A_+.
//
// B = A (1 + A^2)^{-1} is bounded by 1/2 and has the sign pattern of A, so
// the geometric subspace H_- = F(B + beta, beta) of the nonnegative operator
// B + beta collects exactly the spectral directions where A <= 0. Its
// projector commutes with A, hence both H_- and H_+ = H_-^perp reduce A.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specfam/geometric_subspace.hpp"
#include "specfam/linalg.hpp"
#include "specfam/random.hpp"

namespace specfam {

inline constexpr double default_beta = 1.5;

/// B = A (I + A^2)^{-1}, via a Cholesky solve of (I + A^2) B = A.
template <Field T>
HermitianMatrix<T> bounded_transform(const HermitianMatrix<T>& a) {
    const auto m = shifted(squared(a), 1.0);
    return HermitianMatrix<T>(solve_hpd(m, a.matrix()));
}

template <Field T>
struct SplitDecomposition {
    double beta = default_beta;
    HermitianMatrix<T> a;
    HermitianMatrix<T> b;
    Projector<T> e;  ///< onto H_-
    OrthoBasis<T> basis_minus;
    OrthoBasis<T> basis_plus;
    HermitianMatrix<T> a_minus;  ///< V_-^* A V_-
    HermitianMatrix<T> a_plus;   ///< V_+^* A V_+

    std::size_t rank_minus() const noexcept { return basis_minus.size(); }
    std::size_t rank_plus() const noexcept { return basis_plus.size(); }
};

/// beta must make B + beta >= 1; with ||B|| <= 1/2 the default 3/2 always does.
template <Field T>
SplitDecomposition<T> split(const HermitianMatrix<T>& a, double beta = default_beta) {
    SplitDecomposition<T> s;
    s.beta = beta;
    s.a = a;
    s.b = bounded_transform(a);
    const auto c = shifted(s.b, beta);
    const auto eig = eigen_oracle(c);
    if (!eig.eigenvalues.empty() && eig.eigenvalues.front() < 1.0 - 1e-12) {
        throw PreconditionError("split: B + beta must be >= 1, smallest eigenvalue is " +
                                std::to_string(eig.eigenvalues.front()));
    }
    auto sub = subspace(c, beta, eig);
    s.e = std::move(sub.projector);
    s.basis_minus = std::move(sub.basis);
    s.basis_plus = std::move(sub.complement);
    s.a_minus = compress(a, s.basis_minus);
    s.a_plus = compress(a, s.basis_plus);
    return s;
}

/// Residuals of the structural identities a split must satisfy.
struct SplitDiagnostics {
    double commute_a = 0.0;         ///< ||EA - AE||_F
    double commute_b = 0.0;         ///< ||EB - BE||_F
    double commute_resolvent = 0.0; ///< ||E R - R E||_F, R = (I + A^2)^{-1}
    double max_minus = -std::numeric_limits<double>::infinity();  ///< largest eigenvalue of A_-
    double min_plus = std::numeric_limits<double>::infinity();    ///< smallest eigenvalue of A_+
    double reconstruction = 0.0;    ///< ||V_- A_- V_-^* + V_+ A_+ V_+^* - A||_F
    double idempotence = 0.0;
    std::vector<double> spectrum_minus;
    std::vector<double> spectrum_plus;
};

template <Field T>
SplitDiagnostics diagnose(const SplitDecomposition<T>& s) {
    SplitDiagnostics d;
    const auto& e = s.e.matrix();
    const auto& a = s.a.matrix();
    d.commute_a = frobenius_norm(e * a - a * e);
    d.commute_b = frobenius_norm(e * s.b.matrix() - s.b.matrix() * e);
    const auto r = solve_hpd(shifted(squared(s.a), 1.0), Matrix<T>::identity(s.a.dim()));
    d.commute_resolvent = frobenius_norm(e * r - r * e);
    d.spectrum_minus = eigen_oracle(s.a_minus).eigenvalues;
    d.spectrum_plus = eigen_oracle(s.a_plus).eigenvalues;
    if (!d.spectrum_minus.empty()) d.max_minus = d.spectrum_minus.back();
    if (!d.spectrum_plus.empty()) d.min_plus = d.spectrum_plus.front();
    const auto rebuilt = lift(s.a_minus, s.basis_minus).matrix() + lift(s.a_plus, s.basis_plus).matrix();
    d.reconstruction = frobenius_norm(rebuilt - a);
    d.idempotence = s.e.idempotence_defect();
    return d;
}

/// |<Ax,x> - <Bx,x> - <B Ax, Ax>|; vanishes because A = (I + A^2) B.
template <Field T>
double check_form_identity(const HermitianMatrix<T>& a, const HermitianMatrix<T>& b,
                           const Vector<T>& x) {
    const auto ax = a * x;
    const T lhs = inner(ax, x);
    const T rhs = inner(b * x, x) + inner(b * ax, ax);
    return magnitude(lhs - rhs);
}

template <Field T>
double check_form_identity(const HermitianMatrix<T>& a, const Vector<T>& x) {
    return check_form_identity(a, bounded_transform(a), x);
}

/// Tolerance for the form identity residual: 1e-9 (1 + ||A||_F^2) ||x||^2.
template <Field T>
double form_identity_tolerance(const HermitianMatrix<T>& a, const Vector<T>& x) {
    const double s = a.frobenius();
    const double n = norm(x);
    return 1e-9 * (1.0 + s * s) * n * n;
}

/// Random x in H_- give <Bx,x> <= 0 and <Ax,x> <= 0; random x in H_+ give both >= 0.
/// Residual is the worst signed violation, relative to ||x||^2.
template <Field T>
CheckResult check_sign_inequalities(const SplitDecomposition<T>& s, int trials, Rng& rng) {
    const double scale_a = s.a.frobenius();
    const double tol_b = 1e-10;
    const double tol_a = 1e-9 * scale_a;
    double worst = -std::numeric_limits<double>::infinity();
    bool ok = true;
    auto probe = [&](const OrthoBasis<T>& basis, double sign) {
        if (basis.empty()) return;
        for (int t = 0; t < trials; ++t) {
            const auto x = random_in_span(basis, rng);
            const double xx = norm(x);
            if (xx == 0.0) continue;
            const double qb = sign * real_part(form(s.b, x)) / (xx * xx);
            const double qa = sign * real_part(form(s.a, x)) / (xx * xx);
            // sign = +1 on H_- (forms must be <= 0), -1 on H_+ (forms must be >= 0)
            worst = std::max({worst, qb, qa});
            ok = ok && qb <= tol_b && qa <= tol_a;
        }
    };
    probe(s.basis_minus, 1.0);
    probe(s.basis_plus, -1.0);
    if (worst == -std::numeric_limits<double>::infinity()) worst = 0.0;
    return {ok, worst, tol_a};
}

}  // namespace specfam
