#pragma once

// Finite-dimensional spectral families, stored exactly as jump lists.
//
// E(lambda) = sum of increments whose jump point is <= lambda. The "<=" makes
// every family right-continuous by construction, and E is 0 below the first
// jump and I from the last one on.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specfam/error.hpp"
#include "specfam/geometric_subspace.hpp"
#include "specfam/linalg.hpp"
#include "specfam/splitting.hpp"

namespace specfam {

/// Eigenvalues closer than this (relative to the largest |eigenvalue|) form one jump.
inline constexpr double cluster_rel_tol = 1e-9;

template <Field T>
struct Jump {
    double lambda = 0.0;
    Projector<T> increment;
};

template <Field T>
class SpectralFamily {
public:
    SpectralFamily() = default;

    /// Jump points must be strictly increasing; increments must be d x d.
    SpectralFamily(std::size_t dim, std::vector<Jump<T>> jumps) : dim_(dim), jumps_(std::move(jumps)) {
        for (std::size_t j = 0; j < jumps_.size(); ++j) {
            if (jumps_[j].increment.dim() != dim_) {
                throw DimensionError("spectral family: increment has wrong dimension");
            }
            if (j > 0 && !(jumps_[j - 1].lambda < jumps_[j].lambda)) {
                throw PreconditionError("spectral family: jump points must be strictly increasing");
            }
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    const std::vector<Jump<T>>& jumps() const noexcept { return jumps_; }

    std::vector<double> jump_points() const {
        std::vector<double> out;
        for (const auto& j : jumps_) out.push_back(j.lambda);
        return out;
    }

    std::vector<std::size_t> ranks() const {
        std::vector<std::size_t> out;
        for (const auto& j : jumps_) out.push_back(j.increment.rank());
        return out;
    }

    /// E(lambda): sum of increments with jump point <= lambda.
    Projector<T> evaluate(double lambda) const {
        Matrix<T> m(dim_, dim_);
        for (const auto& j : jumps_) {
            if (j.lambda > lambda) break;
            m += j.increment.matrix();
        }
        return Projector<T>::from_matrix(HermitianMatrix<T>(m));
    }

    /// E(lambda) x without forming E(lambda).
    Vector<T> apply(double lambda, const Vector<T>& x) const {
        Vector<T> y(dim_);
        for (const auto& j : jumps_) {
            if (j.lambda > lambda) break;
            y = y + j.increment * x;
        }
        return y;
    }

    friend bool operator==(const SpectralFamily& a, const SpectralFamily& b) {
        if (a.dim_ != b.dim_ || a.jumps_.size() != b.jumps_.size()) return false;
        for (std::size_t j = 0; j < a.jumps_.size(); ++j) {
            if (a.jumps_[j].lambda != b.jumps_[j].lambda ||
                !(a.jumps_[j].increment.hermitian() == b.jumps_[j].increment.hermitian())) {
                return false;
            }
        }
        return true;
    }

private:
    std::size_t dim_ = 0;
    std::vector<Jump<T>> jumps_;
};

/// Residuals of the spectral-family axioms.
struct FamilyDiagnostics {
    double orthogonality = 0.0;  ///< max ||inc_i inc_j||_F, i != j
    double completeness = 0.0;   ///< ||sum inc_j - I||_F
    double idempotence = 0.0;    ///< max ||inc^2 - inc||_F
    double monotonicity = 0.0;   ///< max ||E(b) E(a) - E(a)||_F over consecutive evaluation points a < b
};

/// Points where two families of the same operator can be compared robustly:
/// below all jumps, midpoints between consecutive distinct jumps, above all jumps.
inline std::vector<double> evaluation_points(std::vector<double> jumps) {
    std::sort(jumps.begin(), jumps.end());
    std::vector<double> out;
    if (jumps.empty()) {
        out.push_back(0.0);
        return out;
    }
    double scale = 0.0;
    for (double j : jumps) scale = std::max(scale, std::abs(j));
    const double merge = cluster_rel_tol * scale;
    std::vector<double> distinct{jumps.front()};
    for (double j : jumps)
        if (j - distinct.back() > merge) distinct.push_back(j);
    const double pad = std::max(1.0, scale);
    out.push_back(distinct.front() - pad);
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
        out.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    out.push_back(distinct.back() + pad);
    return out;
}

template <Field T>
FamilyDiagnostics diagnose(const SpectralFamily<T>& f) {
    FamilyDiagnostics d;
    const auto& js = f.jumps();
    Matrix<T> sum(f.dim(), f.dim());
    for (std::size_t i = 0; i < js.size(); ++i) {
        sum += js[i].increment.matrix();
        d.idempotence = std::max(d.idempotence, js[i].increment.idempotence_defect());
    }
    // ||inc_i inc_j||_F = ||inc_i V_j||_F with V_j an orthonormal basis of range(inc_j).
    std::vector<Matrix<T>> ranges;
    for (const auto& j : js) ranges.push_back(orthonormalize(j.increment.matrix()).columns());
    for (std::size_t i = 0; i < js.size(); ++i) {
        for (std::size_t j = 0; j < js.size(); ++j) {
            if (i == j || ranges[j].cols() == 0) continue;
            d.orthogonality =
                std::max(d.orthogonality, frobenius_norm(js[i].increment.matrix() * ranges[j]));
        }
    }
    d.completeness = frobenius_norm(sum - Matrix<T>::identity(f.dim()));
    // Monotonicity at jump points and at the robust points between them.
    auto pts = evaluation_points(f.jump_points());
    for (double j : f.jump_points()) pts.push_back(j);
    std::sort(pts.begin(), pts.end());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        d.monotonicity =
            std::max(d.monotonicity, order_residual(f.evaluate(pts[i]), f.evaluate(pts[i + 1])));
    }
    return d;
}

/// Groups ascending eigenvalues into clusters closer than cluster_rel_tol * max|mu|.
/// Returns [first, last) index ranges.
inline std::vector<std::pair<std::size_t, std::size_t>> cluster_eigenvalues(
    std::span<const double> sorted) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    double scale = 0.0;
    for (double v : sorted) scale = std::max(scale, std::abs(v));
    const double tol = cluster_rel_tol * scale;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
        if (i == sorted.size() || sorted[i] - sorted[i - 1] > tol) {
            out.emplace_back(start, i);
            start = i;
        }
    }
    if (sorted.empty()) out.clear();
    return out;
}

/// Family of A >= 0 from the geometric subspaces: E(lambda) = P_{F(A,lambda)}.
/// Jump points are the clustered eigenvalues; increment j is
/// P_{F(A,lambda_j)} - P_{F(A,lambda_{j-1})}.
template <Field T>
SpectralFamily<T> build_positive(const HermitianMatrix<T>& a) {
    const std::size_t d = a.dim();
    if (d == 0) return SpectralFamily<T>(0, {});
    const auto eig = eigen_oracle(a);
    const double floor = -1e-10 * a.frobenius();
    if (eig.eigenvalues.front() < floor) {
        throw PreconditionError("build_positive: operator is not >= 0, eigenvalue " +
                                std::to_string(eig.eigenvalues.front()));
    }
    // Eigenvalues under the kernel floor are zero as far as F(A,0) is concerned.
    const double kernel = kernel_rel_tol * a.frobenius();
    std::vector<double> clamped = eig.eigenvalues;
    for (auto& v : clamped) v = v <= kernel ? 0.0 : v;

    std::vector<Jump<T>> jumps;
    Matrix<T> previous(d, d);
    for (auto [first, last] : cluster_eigenvalues(clamped)) {
        // Threshold covers every raw member, including slightly negative ones clamped to 0.
        double threshold = clamped[last - 1];
        if (threshold > 0.0) {
            for (std::size_t i = first; i < last; ++i)
                threshold = std::max(threshold, std::abs(eig.eigenvalues[i]));
        }
        const auto sub = subspace(a, threshold, eig);
        if (sub.dim() != last) {
            throw Error("build_positive: F(A," + std::to_string(threshold) + ") has dimension " +
                        std::to_string(sub.dim()) + ", expected " + std::to_string(last));
        }
        const Matrix<T>& current = sub.projector.matrix();
        jumps.push_back({clamped[last - 1],
                         Projector<T>::from_matrix(HermitianMatrix<T>(current - previous))});
        previous = current;
    }
    return SpectralFamily<T>(d, std::move(jumps));
}

/// Family of A + c from the family of A: lambda -> lambda + c.
template <Field T>
SpectralFamily<T> shift_family(const SpectralFamily<T>& e, double c) {
    std::vector<Jump<T>> jumps = e.jumps();
    for (auto& j : jumps) j.lambda += c;
    // A large shift can merge neighbouring jump points in floating point.
    std::vector<Jump<T>> merged;
    for (auto& j : jumps) {
        if (!merged.empty() && !(merged.back().lambda < j.lambda)) {
            merged.back().increment = Projector<T>::from_matrix(
                HermitianMatrix<T>(merged.back().increment.matrix() + j.increment.matrix()));
        } else {
            merged.push_back(std::move(j));
        }
    }
    return SpectralFamily<T>(e.dim(), std::move(merged));
}

/// Family of -A: jump points negated and reversed. Evaluating with "<=" gives
/// the right-continuous regularization of I - E(-lambda).
template <Field T>
SpectralFamily<T> negate_family(const SpectralFamily<T>& e) {
    std::vector<Jump<T>> jumps(e.jumps().rbegin(), e.jumps().rend());
    for (auto& j : jumps) j.lambda = -j.lambda;
    return SpectralFamily<T>(e.dim(), std::move(jumps));
}

/// E(lambda) = E_-(lambda) ⊕ E_+(lambda) on H = H_- ⊕ H_+.
template <Field T>
SpectralFamily<T> merge_families(const SpectralFamily<T>& minus, const SpectralFamily<T>& plus,
                                 const OrthoBasis<T>& embed_minus, const OrthoBasis<T>& embed_plus) {
    const std::size_t d = embed_minus.dim();
    if (embed_plus.dim() != d) throw DimensionError("merge_families: embeddings live in different spaces");
    if (minus.dim() != embed_minus.size() || plus.dim() != embed_plus.size()) {
        throw DimensionError("merge_families: family dimension differs from its embedding");
    }
    if (embed_minus.size() + embed_plus.size() != d) {
        throw PreconditionError("merge_families: embeddings do not span the space (" +
                                std::to_string(embed_minus.size()) + " + " +
                                std::to_string(embed_plus.size()) + " != " + std::to_string(d) + ")");
    }
    if (!embed_minus.empty() && !embed_plus.empty() &&
        max_abs_entry(adjoint_times(embed_minus.columns(), embed_plus.columns())) > 1e-10) {
        throw PreconditionError("merge_families: embeddings are not mutually orthogonal");
    }

    std::vector<Jump<T>> all;
    for (const auto& j : minus.jumps())
        all.push_back({j.lambda, Projector<T>::from_matrix(lift(j.increment.hermitian(), embed_minus))});
    for (const auto& j : plus.jumps())
        all.push_back({j.lambda, Projector<T>::from_matrix(lift(j.increment.hermitian(), embed_plus))});
    std::stable_sort(all.begin(), all.end(),
                     [](const Jump<T>& x, const Jump<T>& y) { return x.lambda < y.lambda; });

    double scale = 0.0;
    for (const auto& j : all) scale = std::max(scale, std::abs(j.lambda));
    const double tol = cluster_rel_tol * scale;
    std::vector<Jump<T>> merged;
    for (auto& j : all) {
        if (!merged.empty() && j.lambda - merged.back().lambda <= tol) {
            merged.back().increment = Projector<T>::from_matrix(
                HermitianMatrix<T>(merged.back().increment.matrix() + j.increment.matrix()));
        } else {
            merged.push_back(std::move(j));
        }
    }
    return SpectralFamily<T>(d, std::move(merged));
}

enum class Route { shift, split };

inline const char* route_name(Route r) { return r == Route::shift ? "shift" : "split"; }

/// Family of an arbitrary self-adjoint A.
///  shift: c = 2 ||A||_F makes A + c >= ||A||_F; build it, then shift back by -c.
///  c scales with A so the round trip costs only relative rounding.
///  split: A = A_- ⊕ A_+; E_+ directly, E_- as the negation of the family of -A_-; merge.
template <Field T>
SpectralFamily<T> build_general(const HermitianMatrix<T>& a, Route route, double beta = default_beta) {
    if (route == Route::shift) {
        const double c = 2.0 * a.frobenius();
        return shift_family(build_positive(shifted(a, c)), -c);
    }
    const auto s = split(a, beta);
    const auto plus = build_positive(s.a_plus);
    const auto minus = negate_family(build_positive(negated(s.a_minus)));
    return merge_families(minus, plus, s.basis_minus, s.basis_plus);
}

/// The family read straight off an eigendecomposition (the reference the
/// geometric constructions are compared against).
template <Field T>
SpectralFamily<T> family_from_eigen(const EigenDecomposition<T>& eig) {
    std::vector<Jump<T>> jumps;
    for (auto [first, last] : cluster_eigenvalues(eig.eigenvalues)) {
        std::vector<std::size_t> idx;
        for (std::size_t i = first; i < last; ++i) idx.push_back(i);
        jumps.push_back(
            {eig.eigenvalues[last - 1], projector_from_basis(select_columns(eig.eigenvectors, idx))});
    }
    return SpectralFamily<T>(eig.dim(), std::move(jumps));
}

/// max ||E1(p) - E2(p)||_F over the robust evaluation points of both families.
template <Field T>
double family_distance(const SpectralFamily<T>& e1, const SpectralFamily<T>& e2) {
    if (e1.dim() != e2.dim()) throw DimensionError("family_distance: dimension mismatch");
    auto pts = e1.jump_points();
    const auto p2 = e2.jump_points();
    pts.insert(pts.end(), p2.begin(), p2.end());
    double worst = 0.0;
    for (double p : evaluation_points(pts)) {
        worst = std::max(worst, frobenius_norm(e1.evaluate(p).matrix() - e2.evaluate(p).matrix()));
    }
    return worst;
}

/// max ||E(lambda) A - A E(lambda)||_F over jump points and evaluation points.
template <Field T>
double commutation_residual(const SpectralFamily<T>& e, const HermitianMatrix<T>& a) {
    auto pts = evaluation_points(e.jump_points());
    for (double j : e.jump_points()) pts.push_back(j);
    double worst = 0.0;
    for (double p : pts) {
        const auto ep = e.evaluate(p);
        worst = std::max(worst, frobenius_norm(ep.matrix() * a.matrix() - a.matrix() * ep.matrix()));
    }
    return worst;
}

struct DomainProfile {
    std::vector<double> cut_points;
    std::vector<double> norms;  ///< ||A E(n_k) x||
    bool monotone = true;
    bool saturated = false;       ///< E(last cut) == I
    double terminal_error = 0.0;  ///< | last norm - ||Ax|| | / max(||Ax||, tiny), when saturated
};

/// ||A P_n x|| along the truncations P_n = E(n_k); nondecreasing in k and
/// equal to ||Ax|| once P_n = I.
template <Field T>
DomainProfile domain_profile(const HermitianMatrix<T>& a, const SpectralFamily<T>& e,
                             const Vector<T>& x, std::span<const double> cuts) {
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        if (!(cuts[i - 1] < cuts[i])) throw PreconditionError("domain_profile: cuts must increase");
    }
    DomainProfile p;
    p.cut_points.assign(cuts.begin(), cuts.end());
    for (double c : cuts) p.norms.push_back(norm(a * e.apply(c, x)));
    for (std::size_t i = 1; i < p.norms.size(); ++i) {
        if (p.norms[i] < p.norms[i - 1] * (1.0 - 1e-12) - 1e-300) p.monotone = false;
    }
    const auto& js = e.jumps();
    p.saturated = !cuts.empty() && (js.empty() || js.back().lambda <= cuts.back());
    if (p.saturated) {
        const double ax = norm(a * x);
        p.terminal_error = std::abs(p.norms.back() - ax) / std::max(ax, 1e-300);
        if (ax == 0.0) p.terminal_error = p.norms.back();
    }
    return p;
}

/// Every vector lies in F(A, eps*) with eps* = max|mu| (1 + 1e-9).
template <Field T>
CheckResult density_check(const HermitianMatrix<T>& a) {
    const auto eig = eigen_oracle(a);
    const double eps = eig.max_abs_eigenvalue() * (1.0 + 1e-9);
    const auto sub = subspace(a, eps, eig);
    const double r = frobenius_norm(sub.projector.matrix() - Matrix<T>::identity(a.dim()));
    return {r <= 1e-9, r, 1e-9};
}

}  // namespace specfam
