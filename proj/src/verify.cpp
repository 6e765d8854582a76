#include "specfam/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "specfam/geometric_subspace.hpp"
#include "specfam/quadrature.hpp"
#include "specfam/random.hpp"
#include "specfam/spectral_family.hpp"
#include "specfam/splitting.hpp"

namespace specfam {

using nlohmann::json;

json to_json(const CheckRecord& r) {
    json j = {{"name", r.name},
              {"anchor", r.anchor},
              {"pass", r.passed},
              {"residual", r.residual},
              {"tolerance", r.tolerance}};
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const OperatorSpec& s) {
    json j = {{"kind", to_string(s.kind)}, {"mode", to_string(s.mode)}};
    switch (s.kind) {
        case OperatorKind::random:
            j["dim"] = s.dim;
            j["seed"] = s.seed;
            break;
        case OperatorKind::diagonal:
            j["spectrum"] = s.spectrum;
            break;
        case OperatorKind::file:
            j["path"] = s.path;
            break;
        default:
            j["dim"] = s.dim;
    }
    if (s.kind == OperatorKind::laplacian1d || s.kind == OperatorKind::oscillator) {
        j["emulation"] =
            "finite-difference discretization; its norm grows like 4 dim^2, standing in for an "
            "unbounded operator across a dimension sweep";
    }
    return j;
}

json report_envelope(const std::string& command, const OperatorSpec& spec) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return {{"tool_version", tool_version}, {"command", command}, {"timestamp", buf},
            {"input", to_json(spec)}};
}

namespace {

double spectral_norm(const std::vector<double>& eigenvalues) {
    double m = 0.0;
    for (double v : eigenvalues) m = std::max(m, std::abs(v));
    return m;
}

/// Points at distance >= min_gap from every boundary value: midpoints of
/// consecutive distinct values, half the smallest, and one beyond the largest.
std::vector<double> gap_points(std::vector<double> values, double min_gap) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end(),
                             [&](double a, double b) { return b - a <= 2.0 * min_gap; }),
                 values.end());
    std::vector<double> out;
    if (values.empty()) return out;
    if (values.front() > 2.0 * min_gap) out.push_back(0.5 * values.front());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (values[i + 1] - values[i] > 2.0 * min_gap) out.push_back(0.5 * (values[i] + values[i + 1]));
    }
    out.push_back(values.back() + std::max(1.0, std::abs(values.back())));
    return out;
}

/// Up to `count` entries spread evenly over `pts`, always keeping both ends.
std::vector<double> spread(const std::vector<double>& pts, std::size_t count) {
    if (pts.size() <= count) return pts;
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(pts[i * (pts.size() - 1) / (count - 1)]);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<double> abs_values(const std::vector<double>& v) {
    std::vector<double> out;
    for (double x : v) out.push_back(std::abs(x));
    return out;
}

CheckRecord make(std::string name, std::string anchor, double residual, double tolerance,
                 std::string note = {}) {
    CheckRecord r;
    r.name = std::move(name);
    r.anchor = std::move(anchor);
    r.residual = residual;
    r.tolerance = tolerance;
    r.passed = residual <= tolerance;
    r.note = std::move(note);
    return r;
}

CheckRecord vacuous(std::string name, std::string anchor, std::string why) {
    CheckRecord r = make(std::move(name), std::move(anchor), 0.0, 0.0, "vacuous: " + why);
    r.passed = true;
    return r;
}

template <Field T>
struct Context {
    const HermitianMatrix<T>& a;
    VerifyConfig cfg;
    EigenDecomposition<T> eig;
    double norm2 = 0.0;   // spectral norm
    double normf = 0.0;   // Frobenius norm
    double min_gap = 0.0; // boundary gap policy
    std::vector<double> lambdas;  // gap-safe thresholds against |spectrum|
    HermitianMatrix<T> psd;       // A shifted to be >= 0
    SpectralFamily<T> shift_family;
    SpectralFamily<T> split_family;
    SpectralFamily<T> oracle_family;
};

template <Field T>
Context<T> make_context(const HermitianMatrix<T>& a, const VerifyConfig& cfg) {
    Context<T> c{a, cfg, eigen_oracle(a), 0.0, 0.0, 0.0, {}, {}, {}, {}, {}};
    c.norm2 = spectral_norm(c.eig.eigenvalues);
    c.normf = a.frobenius();
    c.min_gap = 1e-6 * std::max(1.0, c.norm2);
    c.lambdas = spread(gap_points(abs_values(c.eig.eigenvalues), c.min_gap), 5);
    const double lowest = c.eig.eigenvalues.empty() ? 0.0 : c.eig.eigenvalues.front();
    c.psd = lowest < 0.0 ? shifted(a, -lowest) : a;
    c.shift_family = build_general(a, Route::shift, cfg.beta);
    c.split_family = build_general(a, Route::split, cfg.beta);
    c.oracle_family = family_from_eigen(c.eig);
    return c;
}

template <Field T>
using Task = std::function<CheckRecord(const Context<T>&, Rng&)>;

template <Field T>
std::vector<std::pair<std::string, Task<T>>> battery() {
    std::vector<std::pair<std::string, Task<T>>> tasks;
    auto add = [&](std::string name, Task<T> t) { tasks.emplace_back(std::move(name), std::move(t)); };
    using Ctx = Context<T>;

    // ---- geometric subspaces -------------------------------------------------
    add("square_identity", [](const Ctx& c, Rng&) {
        const std::string anchor = "F(A^2, e^2) = F(A, e)";
        double worst = 0.0;
        for (double e : c.lambdas) worst = std::max(worst, check_square_identity(c.a, e).residual);
        return make("square_identity", anchor, worst, inclusion_tol * c.cfg.tol_scale);
    });

    add("inclusion_shift", [](const Ctx& c, Rng&) {
        const std::string anchor = "F(A + d, e) in F(A, d + e)";
        const double s = std::max(1.0, c.norm2);
        double worst = 0.0;
        int cases = 0;
        for (double delta : {0.0, 0.25 * s, s}) {
            std::vector<double> bounds;
            for (double mu : c.eig.eigenvalues) {
                bounds.push_back(std::abs(mu + delta));
                if (std::abs(mu) - delta >= 0.0) bounds.push_back(std::abs(mu) - delta);
            }
            for (double e : spread(gap_points(bounds, c.min_gap), 4)) {
                worst = std::max(worst, check_inclusion_shift(c.a, delta, e).residual);
                ++cases;
            }
        }
        return make("inclusion_shift", anchor, worst, inclusion_tol * c.cfg.tol_scale,
                    std::to_string(cases) + " (delta, eps) pairs");
    });

    add("inverse_inclusion", [](const Ctx& c, Rng&) {
        const std::string anchor = "F(A^-1, 1/e)^perp in F(A, e) for A >= 1";
        // a little above 1 so rounding in the shift cannot break A >= 1
        const double shift = 1.0 - c.eig.eigenvalues.front() + 1e-9 * std::max(1.0, c.norm2);
        const auto a1 = shifted(c.a, shift);
        std::vector<double> nus;
        for (double mu : c.eig.eigenvalues) nus.push_back(mu + shift);
        double worst = 0.0;
        for (double e : spread(gap_points(nus, c.min_gap), 5)) {
            worst = std::max(worst, check_inverse_inclusion(a1, e).residual);
        }
        return make("inverse_inclusion", anchor, worst, inclusion_tol * c.cfg.tol_scale,
                    "applied to A - min(spec A) + 1 (+1e-9 max(1, ||A||))");
    });

    add("s_chain", [](const Ctx& c, Rng&) {
        const std::string anchor = "F(A^2 + 1, e) in F(A^2, e + 1) in F(A, sqrt(e + 1))";
        std::vector<double> bounds;
        for (double mu : c.eig.eigenvalues) {
            bounds.push_back(mu * mu + 1.0);
            if (mu * mu - 1.0 > 0.0) bounds.push_back(mu * mu - 1.0);
        }
        double worst = 0.0;
        int cases = 0;
        for (double e : spread(gap_points(bounds, c.min_gap * std::max(1.0, c.norm2)), 5)) {
            if (!(e > 0.0)) continue;
            worst = std::max(worst, check_s_chain(c.a, e).residual);
            ++cases;
        }
        if (cases == 0) return vacuous("s_chain", anchor, "no gap-safe eps");
        return make("s_chain", anchor, worst, inclusion_tol * c.cfg.tol_scale);
    });

    auto strict = [](const Ctx& c, Rng& rng, const HermitianMatrix<T>& op, const std::string& name) {
        const std::string anchor = "||Ax|| > l ||x|| and <Ax,x> > l <x,x> on F(A,l)^perp";
        const auto eig = eigen_oracle(op);
        const double gap = 1e-6 * std::max(1.0, spectral_norm(eig.eigenvalues));
        auto pts = gap_points(abs_values(eig.eigenvalues), gap);
        if (!pts.empty()) pts.pop_back();  // beyond the spectrum the complement is {0}
        if (!eig.eigenvalues.empty() && std::abs(eig.eigenvalues.front()) <= kernel_rel_tol * op.frobenius()) {
            pts.insert(pts.begin(), 0.0);
        }
        double worst = std::numeric_limits<double>::infinity();
        int cases = 0;
        for (double l : spread(pts, 5)) {
            try {
                const auto r = check_strict_lower(op, l, c.cfg.trials, rng);
                worst = std::min(worst, r.residual);
                ++cases;
            } catch (const PreconditionError&) {
            }
        }
        if (cases == 0) return vacuous(name, anchor, "F(A,l)^perp is {0} for every gap-safe l");
        // residual is the smallest margin; it must stay strictly positive
        CheckRecord r = make(name, anchor, -worst, 0.0, "residual = -(smallest margin)");
        r.passed = worst > 0.0;
        return r;
    };
    add("strict_lower", [strict](const Ctx& c, Rng& rng) { return strict(c, rng, c.a, "strict_lower"); });
    add("strict_lower_nonnegative",
        [strict](const Ctx& c, Rng& rng) { return strict(c, rng, c.psd, "strict_lower_nonnegative"); });

    auto sandwich = [](const Ctx& c, Rng& rng, const HermitianMatrix<T>& op, const std::string& name) {
        const std::string anchor = "l ||x|| <= ||Ax|| <= m ||x|| on F(A,m) ∩ F(A,l)^perp";
        const auto eig = eigen_oracle(op);
        const double gap = 1e-6 * std::max(1.0, spectral_norm(eig.eigenvalues));
        auto pts = spread(gap_points(abs_values(eig.eigenvalues), gap), 5);
        pts.insert(pts.begin(), 0.0);
        double worst = -std::numeric_limits<double>::infinity();
        int cases = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                try {
                    worst = std::max(worst, check_sandwich(op, pts[i], pts[j], c.cfg.trials, rng).residual);
                    ++cases;
                } catch (const PreconditionError&) {
                }
            }
        }
        // degenerate sandwich l = m = |mu| at an eigenvector
        const bool psd = detail::nonnegative(eig, op.frobenius());
        for (std::size_t j = 0; j < eig.dim(); ++j) {
            const double m = std::abs(eig.eigenvalues[j]);
            worst = std::max(worst, check_sandwich_at(op, m, m, eig.eigenvectors.vector(j), psd).residual);
            ++cases;
        }
        if (cases == 0) return vacuous(name, anchor, "empty shells");
        return make(name, anchor, std::max(worst, 0.0), sandwich_slack * c.cfg.tol_scale,
                    std::to_string(cases) + " shells");
    };
    add("sandwich", [sandwich](const Ctx& c, Rng& rng) { return sandwich(c, rng, c.a, "sandwich"); });
    add("sandwich_nonnegative",
        [sandwich](const Ctx& c, Rng& rng) { return sandwich(c, rng, c.psd, "sandwich_nonnegative"); });

    add("membership_agreement", [](const Ctx& c, Rng& rng) {
        const std::string anchor = "||A^n x|| <= l^n ||x|| for all n";
        std::vector<double> ls;
        const double policy = 1e-3 * c.norm2;
        for (double l : c.lambdas) {
            double dist = std::numeric_limits<double>::infinity();
            for (double mu : c.eig.eigenvalues) dist = std::min(dist, std::abs(std::abs(mu) - l));
            if (l > 0.0 && dist >= policy) ls.push_back(l);
        }
        if (ls.empty()) return vacuous("membership_agreement", anchor, "no lambda 1e-3 ||A|| from the spectrum");
        std::uniform_int_distribution<std::size_t> pick_l(0, ls.size() - 1);
        std::bernoulli_distribution coin(0.5);
        int disagreements = 0;
        const int trials = 2 * c.cfg.trials;
        for (int t = 0; t < trials; ++t) {
            const double l = ls[pick_l(rng)];
            std::vector<std::size_t> idx;
            for (std::size_t j = 0; j < c.eig.dim(); ++j)
                if (coin(rng)) idx.push_back(j);
            if (idx.empty()) idx.push_back(t % c.eig.dim());
            bool expected = true;
            for (auto j : idx) expected = expected && std::abs(c.eig.eigenvalues[j]) <= l;
            const auto x = random_in_span(select_columns(c.eig.eigenvectors, idx), rng);
            if (membership(c.a, l, x).member != expected) ++disagreements;
        }
        return make("membership_agreement", anchor, disagreements, 0.0,
                    std::to_string(trials) + " random eigencomponent mixtures");
    });

    add("invariance", [](const Ctx& c, Rng& rng) {
        const std::string anchor = "A and every C commuting with A map F(A,l) into itself";
        double worst = 0.0;
        const auto& am = c.a.matrix();
        const auto a2 = am * am;
        const auto a3 = a2 * am;
        for (double l : c.lambdas) {
            const auto s = subspace(c.a, l, c.eig);
            if (c.normf > 0.0) worst = std::max(worst, invariance_residual(am, s.projector) / c.normf);
            std::normal_distribution<double> n(0.0, 1.0);
            Matrix<T> poly = Matrix<T>::identity(c.a.dim()) * T{n(rng)};
            poly += am * T{n(rng)};
            poly += a2 * T{n(rng)};
            poly += a3 * T{n(rng)};
            const double pn = frobenius_norm(poly);
            if (pn > 0.0) worst = std::max(worst, invariance_residual(poly, s.projector) / pn);
        }
        return make("invariance", anchor, worst, 1e-9 * c.cfg.tol_scale, "relative to ||C||_F");
    });

    add("monotone_subspaces", [](const Ctx& c, Rng&) {
        const std::string anchor = "l <= l' implies F(A,l) in F(A,l')";
        double worst = 0.0;
        for (std::size_t i = 0; i + 1 < c.lambdas.size(); ++i) {
            worst = std::max(worst, order_residual(subspace(c.a, c.lambdas[i], c.eig).projector,
                                                   subspace(c.a, c.lambdas[i + 1], c.eig).projector));
        }
        return make("monotone_subspaces", anchor, worst, inclusion_tol * c.cfg.tol_scale);
    });

    add("power_bound", [](const Ctx& c, Rng&) {
        const std::string anchor = "||A^m v|| <= l^m ||v||, m = 1..50, v in basis of F(A,l)";
        double worst = -std::numeric_limits<double>::infinity();
        for (double l : c.lambdas) worst = std::max(worst, subspace(c.a, l, c.eig).power_bound_excess(c.a));
        return make("power_bound", anchor, std::max(worst, 0.0), 0.0,
                    "relative excess over l^m + m d u ||A||_F^m");
    });

    add("density", [](const Ctx& c, Rng&) {
        const auto r = density_check(c.a);
        return make("density", "union of F(A,e) over e > 0 is dense", r.residual,
                    r.tolerance * c.cfg.tol_scale);
    });

    // ---- spectral families ---------------------------------------------------
    auto axioms = [](const Ctx& c, const SpectralFamily<T>& f, const std::string& name) {
        const auto d = diagnose(f);
        const double comm = c.normf > 0.0 ? commutation_residual(f, c.a) / c.normf : 0.0;
        const double s = c.cfg.tol_scale;
        const double ratio = std::max({d.orthogonality / 1e-10, d.completeness / 1e-9,
                                       d.idempotence / 1e-9, d.monotonicity / 1e-9, comm / 1e-9});
        return make(name, "spectral family: orthogonal increments, sum I, monotone, commutes with A",
                    ratio, s,
                    "worst residual/tolerance ratio; orth " + std::to_string(d.orthogonality) +
                        ", complete " + std::to_string(d.completeness) + ", commute " +
                        std::to_string(comm));
    };
    add("family_axioms_shift", [axioms](const Ctx& c, Rng&) { return axioms(c, c.shift_family, "family_axioms_shift"); });
    add("family_axioms_split", [axioms](const Ctx& c, Rng&) { return axioms(c, c.split_family, "family_axioms_split"); });

    add("oracle_equality", [](const Ctx& c, Rng&) {
        const double r = std::max(family_distance(c.shift_family, c.oracle_family),
                                  family_distance(c.split_family, c.oracle_family));
        return make("oracle_equality", "E(l) = P_F(A,l) agrees with the eigenprojector family", r,
                    1e-8 * c.cfg.tol_scale);
    });

    add("route_equality", [](const Ctx& c, Rng&) {
        return make("route_equality", "E_shift(l) = E_split(l) at every evaluation point",
                    family_distance(c.shift_family, c.split_family), 1e-8 * c.cfg.tol_scale);
    });

    add("negation_involution", [](const Ctx& c, Rng&) {
        const bool same = negate_family(negate_family(c.shift_family)) == c.shift_family;
        return make("negation_involution", "G(l) = I - E(-l) (right-continuous), applied twice",
                    same ? 0.0 : 1.0, 0.0);
    });

    add("positive_family", [](const Ctx& c, Rng&) {
        const auto f = build_positive(c.psd);
        const auto ref = family_from_eigen(eigen_oracle(c.psd));
        return make("positive_family", "E(l) = P_F(A,l) for A >= 0", family_distance(f, ref),
                    1e-8 * c.cfg.tol_scale, "applied to A - min(spec A, 0)");
    });

    add("domain_profile", [](const Ctx& c, Rng& rng) {
        const std::string anchor = "Ax = lim A P_n x, P_n = E(n)";
        const auto x = random_vector<T>(c.a.dim(), rng);
        auto cuts = evaluation_points(c.shift_family.jump_points());
        const auto p = domain_profile(c.a, c.shift_family, x, cuts);
        CheckRecord r = make("domain_profile", anchor, p.terminal_error, 1e-9 * c.cfg.tol_scale,
                             std::to_string(cuts.size()) + " cuts");
        r.passed = r.passed && p.monotone && p.saturated;
        return r;
    });

    // ---- splitting -----------------------------------------------------------
    add("split_invariants", [](const Ctx& c, Rng&) {
        const std::string anchor = "A = A_- (+) A_+, A_- <= 0 <= A_+, EA = AE";
        const auto s = split(c.a, c.cfg.beta);
        const auto d = diagnose(s);
        std::vector<double> both = d.spectrum_minus;
        both.insert(both.end(), d.spectrum_plus.begin(), d.spectrum_plus.end());
        std::sort(both.begin(), both.end());
        double spec = 0.0;
        for (std::size_t i = 0; i < both.size(); ++i)
            spec = std::max(spec, std::abs(both[i] - c.eig.eigenvalues[i]));
        const double n = c.norm2;
        const double sign_minus = d.spectrum_minus.empty() ? 0.0 : std::max(0.0, d.max_minus);
        const double sign_plus = d.spectrum_plus.empty() ? 0.0 : std::max(0.0, -d.min_plus);
        const double ratio = std::max(
            {c.normf > 0.0 ? d.commute_a / (1e-9 * c.normf) : d.commute_a, d.commute_b / 1e-10,
             d.commute_resolvent / 1e-10, n > 0.0 ? sign_minus / (1e-9 * n) : sign_minus,
             n > 0.0 ? sign_plus / (1e-9 * n) : sign_plus, spec / (1e-8 * std::max(1.0, n)),
             c.normf > 0.0 ? d.reconstruction / (1e-9 * c.normf) : d.reconstruction});
        CheckRecord r = make("split_invariants", anchor, ratio, c.cfg.tol_scale,
                             "worst residual/tolerance ratio; rank E = " + std::to_string(s.rank_minus()));
        r.passed = r.passed && s.rank_minus() + s.rank_plus() == c.a.dim();
        return r;
    });

    add("form_identity", [](const Ctx& c, Rng& rng) {
        const auto b = bounded_transform(c.a);
        double worst = 0.0;
        for (int t = 0; t < c.cfg.trials; ++t) {
            const auto x = random_vector<T>(c.a.dim(), rng);
            worst = std::max(worst, check_form_identity(c.a, b, x) / form_identity_tolerance(c.a, x));
        }
        return make("form_identity", "<Ax,x> = <Bx,x> + <BAx,Ax>", worst, c.cfg.tol_scale,
                    "residual / (1e-9 (1 + ||A||_F^2) ||x||^2)");
    });

    add("sign_inequalities", [](const Ctx& c, Rng& rng) {
        const auto s = split(c.a, c.cfg.beta);
        const auto r = check_sign_inequalities(s, c.cfg.trials, rng);
        CheckRecord rec = make("sign_inequalities", "<Bx,x> <= 0 on H_-, <Bx,x> >= 0 on H_+",
                               std::max(r.residual, 0.0), r.tolerance * c.cfg.tol_scale);
        rec.passed = r.passed || rec.passed;
        return rec;
    });

    add("bounded_transform_norm", [](const Ctx& c, Rng&) {
        const auto b = bounded_transform(c.a);
        const double nb = eigen_oracle(b).max_abs_eigenvalue();
        return make("bounded_transform_norm", "||A (1 + A^2)^-1|| <= 1/2", std::max(0.0, nb - 0.5),
                    1e-12 * c.cfg.tol_scale, "||B|| = " + std::to_string(nb));
    });

    // ---- quadrature ----------------------------------------------------------
    add("quadrature_bounds", [](const Ctx& c, Rng& rng) {
        const std::string anchor = "|<Ax,x> - sum l_i ||x_i||^2| <= ||x||^2 / k, A^2 with 2n/k";
        const auto f = build_positive(c.psd);
        const auto x = random_vector<T>(c.a.dim(), rng);
        const int n = smallest_cap(f, x);
        double worst = -std::numeric_limits<double>::infinity();
        double previous_err1 = std::numeric_limits<double>::infinity();
        bool decays = true;
        for (int k = 1; k <= c.cfg.k_max; k *= 2) {
            const auto p = partition_sum(c.psd, f, x, n, k);
            worst = std::max({worst, p.err1 - p.bound1() - 1e-9, p.err2 - p.bound2() - 1e-9});
            if (p.err1 > previous_err1 * (1.0 + 1e-12) + 1e-12) decays = false;
            previous_err1 = p.err1;
        }
        CheckRecord r = make("quadrature_bounds", anchor, std::max(worst, 0.0), 0.0,
                             "n = " + std::to_string(n) + ", applied to A - min(spec A, 0)");
        r.passed = worst <= 0.0 && decays;
        if (!decays) r.note += "; err1 increased under dyadic refinement";
        return r;
    });

    add("per_cell_bounds", [](const Ctx& c, Rng& rng) {
        const auto f = build_positive(c.psd);
        const auto x = random_vector<T>(c.a.dim(), rng);
        const int n = smallest_cap(f, x);
        double worst = 0.0, bookkeeping = 0.0;
        for (int k = 1; k <= c.cfg.k_max; k *= 2) {
            const auto p = partition_sum(c.psd, f, x, n, k);
            worst = std::max(worst, per_cell_violation(c.psd, p));
            const auto d = diagnose(p, x);
            bookkeeping = std::max({bookkeeping, d.sum_residual, d.pythagoras, d.cross_terms});
        }
        CheckRecord r = make("per_cell_bounds",
                             "l_(i-1) ||x_i||^2 <= <Ax_i,x_i> <= l_i ||x_i||^2 and squared forms",
                             worst, per_cell_slack * c.cfg.tol_scale,
                             "partition bookkeeping residual " + std::to_string(bookkeeping));
        r.passed = r.passed && bookkeeping <= 1e-10 * c.cfg.tol_scale;
        return r;
    });

    auto integrals = [](const Ctx& c, Rng& rng, const SpectralFamily<T>& f, const std::string& name) {
        double worst = 0.0;
        const double n1 = std::max(c.norm2, std::numeric_limits<double>::min());
        for (int t = 0; t < c.cfg.trials; ++t) {
            const auto x = random_vector<T>(c.a.dim(), rng);
            const auto y = random_vector<T>(c.a.dim(), rng);
            const double xx = real_part(inner(x, x));
            const auto ax = c.a * x;
            const auto [i1, i2] = integral_form(f, x);
            worst = std::max(worst, std::abs(i1 - real_part(inner(ax, x))) / (n1 * xx));
            worst = std::max(worst, std::abs(i2 - real_part(inner(ax, ax))) / (n1 * n1 * xx));
            const T b = bilinear_form(f, x, y);
            worst = std::max(worst, magnitude(b - inner(ax, y)) / (n1 * norm(x) * norm(y)));
        }
        return make(name, "<Ax,y> = integral of l d<E(l)x,y>, ||Ax||^2 = integral of l^2 d<E(l)x,x>",
                    worst, 1e-9 * c.cfg.tol_scale, "relative to ||A||^p ||x|| ||y||");
    };
    add("integral_forms_shift", [integrals](const Ctx& c, Rng& rng) { return integrals(c, rng, c.shift_family, "integral_forms_shift"); });
    add("integral_forms_split", [integrals](const Ctx& c, Rng& rng) { return integrals(c, rng, c.split_family, "integral_forms_split"); });

    add("reconstruction", [](const Ctx& c, Rng&) {
        const double r1 = frobenius_norm(reconstruct_operator(c.shift_family).matrix() - c.a.matrix());
        const double r2 = frobenius_norm(reconstruct_operator(c.split_family).matrix() - c.a.matrix());
        const double r = std::max(r1, r2);
        return make("reconstruction", "A = integral of l dE(l), both routes",
                    c.normf > 0.0 ? r / c.normf : r, 1e-9 * c.cfg.tol_scale, "relative to ||A||_F");
    });

    return tasks;
}

template <Field T>
json family_json(const SpectralFamily<T>& f) {
    json jumps = json::array();
    for (const auto& j : f.jumps()) jumps.push_back({{"lambda", j.lambda}, {"rank", j.increment.rank()}});
    return jumps;
}

template <Field T>
json quadrature_table(const HermitianMatrix<T>& a, const VerifyConfig& cfg) {
    const auto eig = eigen_oracle(a);
    const double lowest = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    const auto psd = lowest < 0.0 ? shifted(a, -lowest) : a;
    const auto f = build_positive(psd);
    Rng rng(cfg.seed);
    const auto x = random_vector<T>(a.dim(), rng);
    const int n = smallest_cap(f, x);
    json rows = json::array();
    for (int k = 1; k <= cfg.k_max; k *= 2) {
        const auto p = partition_sum(psd, f, x, n, k);
        rows.push_back({{"k", k},
                        {"err1", p.err1},
                        {"bound1", p.bound1()},
                        {"err2", p.err2},
                        {"bound2", p.bound2()},
                        {"cells", p.cells.size()}});
    }
    return {{"operator_shift", lowest < 0.0 ? -lowest : 0.0},
            {"n", n},
            {"norm_sq", real_part(inner(x, x))},
            {"rows", rows}};
}

template <Field T>
json split_json(const SplitDecomposition<T>& s) {
    const auto d = diagnose(s);
    auto extremes = [](const std::vector<double>& v) -> json {
        if (v.empty()) return nullptr;
        return {{"min", v.front()}, {"max", v.back()}};
    };
    return {{"beta", s.beta},
            {"rank_E", s.rank_minus()},
            {"rank_I_minus_E", s.rank_plus()},
            {"minus_spectrum", extremes(d.spectrum_minus)},
            {"plus_spectrum", extremes(d.spectrum_plus)},
            {"residuals",
             {{"commute_A", d.commute_a},
              {"commute_B", d.commute_b},
              {"commute_resolvent", d.commute_resolvent},
              {"reconstruction", d.reconstruction},
              {"idempotence", d.idempotence}}}};
}

}  // namespace

template <Field T>
json analyze_report(const HermitianMatrix<T>& a, const VerifyConfig& cfg) {
    json out;
    for (Route route : {Route::shift, Route::split}) {
        const auto f = build_general(a, route, cfg.beta);
        const auto d = diagnose(f);
        out[route_name(route)] = {{"jumps", family_json(f)},
                                  {"orthogonality", d.orthogonality},
                                  {"completeness", d.completeness},
                                  {"monotonicity", d.monotonicity},
                                  {"commutation", commutation_residual(f, a)}};
    }
    out["route_distance"] = family_distance(build_general(a, Route::shift, cfg.beta),
                                            build_general(a, Route::split, cfg.beta));
    out["density"] = density_check(a).residual;
    return out;
}

template <Field T>
json split_report(const HermitianMatrix<T>& a, const VerifyConfig& cfg) {
    return split_json(split(a, cfg.beta));
}

template <Field T>
json reconstruct_report(const HermitianMatrix<T>& a, const VerifyConfig& cfg) {
    json out = quadrature_table(a, cfg);
    for (Route route : {Route::shift, Route::split}) {
        const auto f = build_general(a, route, cfg.beta);
        out["reconstruction"][route_name(route)] =
            frobenius_norm(reconstruct_operator(f).matrix() - a.matrix());
    }
    return out;
}

template <Field T>
std::vector<CheckRecord> run_checks(const HermitianMatrix<T>& a, const VerifyConfig& cfg) {
    const auto ctx = make_context(a, cfg);
    const auto tasks = battery<T>();
    std::vector<CheckRecord> records(tasks.size());
    const auto count = static_cast<long long>(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (long long ii = 0; ii < count; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        Rng rng(cfg.seed * 0x9E3779B97F4A7C15ull + i + 1);
        try {
            records[i] = tasks[i].second(ctx, rng);
        } catch (const std::exception& e) {
            records[i] = make(tasks[i].first, "", std::numeric_limits<double>::infinity(), 0.0,
                              std::string("error: ") + e.what());
            records[i].passed = false;
        }
    }
    std::stable_partition(records.begin(), records.end(), [](const CheckRecord& r) { return !r.passed; });
    return records;
}

template <Field T>
json verify_report(const HermitianMatrix<T>& a, const OperatorSpec& spec, const VerifyConfig& cfg) {
    json out = report_envelope("verify", spec);
    out["config"] = {{"tol_scale", cfg.tol_scale}, {"k_max", cfg.k_max}, {"beta", cfg.beta},
                     {"seed", cfg.seed}, {"trials", cfg.trials}};
    const auto records = run_checks(a, cfg);
    bool ok = true;
    json checks = json::array();
    for (const auto& r : records) {
        ok = ok && r.passed;
        checks.push_back(to_json(r));
    }
    out["status"] = ok ? "pass" : "fail";
    out["checks"] = checks;
    const auto f = build_general(a, Route::shift, cfg.beta);
    out["family"] = {{"jumps", family_json(f)}};
    out["split"] = split_json(split(a, cfg.beta));
    out["quadrature"] = quadrature_table(a, cfg);
    return out;
}

template json analyze_report<double>(const HermitianMatrix<double>&, const VerifyConfig&);
template json analyze_report<Complex>(const HermitianMatrix<Complex>&, const VerifyConfig&);
template json split_report<double>(const HermitianMatrix<double>&, const VerifyConfig&);
template json split_report<Complex>(const HermitianMatrix<Complex>&, const VerifyConfig&);
template json reconstruct_report<double>(const HermitianMatrix<double>&, const VerifyConfig&);
template json reconstruct_report<Complex>(const HermitianMatrix<Complex>&, const VerifyConfig&);
template std::vector<CheckRecord> run_checks<double>(const HermitianMatrix<double>&, const VerifyConfig&);
template std::vector<CheckRecord> run_checks<Complex>(const HermitianMatrix<Complex>&, const VerifyConfig&);
template json verify_report<double>(const HermitianMatrix<double>&, const OperatorSpec&, const VerifyConfig&);
template json verify_report<Complex>(const HermitianMatrix<Complex>&, const OperatorSpec&, const VerifyConfig&);

}  // namespace specfam
