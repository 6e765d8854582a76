#include <cmath>
#include <vector>

#include "doctest.h"
#include "specfam/kernels.hpp"
#include "specfam/linalg.hpp"
#include "specfam/random.hpp"
#include "support.hpp"

using namespace specfam;
using specfam::testing::random_hermitian;

TEST_CASE("inner product is conjugate-linear in the second slot") {
    const auto e1 = unit_vector<double>(2, 0);
    const auto e2 = unit_vector<double>(2, 1);
    CHECK(inner(e1, e1) == 1.0);
    CHECK(inner(e1, e2) == 0.0);

    const Complex i{0.0, 1.0};
    const Vector<Complex> x{1.0, i};
    const Vector<Complex> y{i, 1.0};
    // 1 * conj(i) + i * conj(1) = -i + i
    CHECK(std::abs(inner(x, y)) == 0.0);
    CHECK(inner(Vector<Complex>{i, 0.0}, Vector<Complex>{1.0, 0.0}) == i);

    CHECK_THROWS_AS(inner(e1, Vector<double>{1.0}), DimensionError);
}

TEST_CASE("orthonormalize drops dependent vectors") {
    const std::vector<Vector<double>> collinear{{1.0, 0.0}, {2.0, 0.0}};
    const auto b1 = orthonormalize<double>(2, collinear);
    REQUIRE(b1.size() == 1);
    CHECK(std::abs(std::abs(b1.vector(0)[0]) - 1.0) < 1e-15);

    const std::vector<Vector<double>> axes{{1.0, 0.0}, {0.0, 1.0}};
    const auto b2 = orthonormalize<double>(2, axes);
    CHECK(b2.columns() == Matrix<double>::identity(2));
}

TEST_CASE_TEMPLATE("orthonormalize: random overcomplete sets", T, double, Complex) {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        std::vector<Vector<T>> vs;
        for (int j = 0; j < 6; ++j) vs.push_back(random_vector<T>(4, rng));
        const auto b = orthonormalize<T>(4, vs);
        CHECK(b.size() <= 4);
        CHECK(b.orthonormality_defect() <= 1e-12);
    }
}

TEST_CASE("eigen_oracle closed forms") {
    const std::vector<double> d{3.0, 1.0, 2.0};
    const auto e = eigen_oracle(HermitianMatrix<double>::diagonal(d));
    CHECK(e.eigenvalues == std::vector<double>{1.0, 2.0, 3.0});

    const auto swap = eigen_oracle(HermitianMatrix<double>(Matrix<double>{{0.0, 1.0}, {1.0, 0.0}}));
    CHECK(swap.eigenvalues[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(swap.eigenvalues[1] == doctest::Approx(1.0).epsilon(1e-14));

    const auto z = eigen_oracle(HermitianMatrix<Complex>::zero(3));
    CHECK(z.eigenvalues == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(z.sweeps == 0);
}

TEST_CASE_TEMPLATE("eigen_oracle residual invariants on random matrices", T, double, Complex) {
    Rng rng(5);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 1 + t % 10;
        Matrix<T> g(n, n);
        for (auto& x : g.data()) x = gaussian<T>(rng);
        const HermitianMatrix<T> a(g);
        const auto e = eigen_oracle(a);
        const double s = std::max(a.frobenius(), 1e-300);
        CHECK(e.eigenvectors.orthonormality_defect() <= 1e-12);
        CHECK(frobenius_norm(e.reconstruct().matrix() - a.matrix()) <= 1e-12 * s);
        CHECK(std::is_sorted(e.eigenvalues.begin(), e.eigenvalues.end()));
        for (std::size_t j = 0; j < n; ++j) {
            auto r = a * e.eigenvectors.vector(j);
            axpy(T{-e.eigenvalues[j]}, e.eigenvectors.vector(j), r);
            CHECK(norm(r) <= 1e-12 * s);
        }
    }
}

TEST_CASE("projector_from_basis examples") {
    const auto e1 = OrthoBasis<double>::from_orthonormal_columns(Matrix<double>{{1.0}, {0.0}});
    CHECK(projector_from_basis(e1).matrix() == Matrix<double>{{1.0, 0.0}, {0.0, 0.0}});

    const auto full = OrthoBasis<double>::from_orthonormal_columns(Matrix<double>::identity(3));
    CHECK(projector_from_basis(full).matrix() == Matrix<double>::identity(3));

    const double r = 1.0 / std::sqrt(2.0);
    const auto diag = OrthoBasis<double>::from_orthonormal_columns(Matrix<double>{{r}, {r}});
    const auto p = projector_from_basis(diag);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(p.matrix()(i, j) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(p.rank() == 1);
    CHECK(p.idempotence_defect() <= 1e-15);
}

TEST_CASE("hermitian construction reports the symmetrization defect") {
    const HermitianMatrix<double> exact(Matrix<double>{{2.0, -1.0}, {-1.0, 2.0}});
    CHECK(exact.symmetrization_defect() == 0.0);

    const HermitianMatrix<double> skewed(Matrix<double>{{0.0, 1.0}, {0.0, 0.0}});
    CHECK(skewed(0, 1) == 0.5);
    CHECK(skewed(1, 0) == 0.5);
    CHECK(skewed.symmetrization_defect() == doctest::Approx(std::sqrt(2.0)));

    const HermitianMatrix<Complex> c(Matrix<Complex>{{Complex{1.0, 3.0}}});
    CHECK(c(0, 0) == Complex{1.0, 0.0});
}

TEST_CASE_TEMPLATE("solve_hpd inverts positive definite systems", T, double, Complex) {
    Rng rng(3);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 1 + t % 7;
        const auto a = random_hermitian<T>(n, rng, 0.5, 4.0, 1e-3);
        Matrix<T> rhs(n, 2);
        for (auto& x : rhs.data()) x = gaussian<T>(rng);
        const auto x = solve_hpd(a, rhs);
        CHECK(frobenius_norm(a.matrix() * x - rhs) <= 1e-12 * (1.0 + frobenius_norm(rhs)) * 8.0);
    }
    CHECK_THROWS_AS(solve_hpd(HermitianMatrix<T>::diagonal(std::vector<double>{1.0, -1.0}),
                              Matrix<T>::identity(2)),
                    PreconditionError);
}

TEST_CASE_TEMPLATE("parallel kernels match the serial reference exactly", T, double, Complex) {
    Rng rng(17);
    for (std::size_t n : {3u, 40u, 70u}) {
        Matrix<T> a(n, n + 1), b(n + 1, n - 1);
        for (auto& x : a.data()) x = gaussian<T>(rng);
        for (auto& x : b.data()) x = gaussian<T>(rng);

        std::vector<T> c1(n * (n - 1)), c2(n * (n - 1));
        kernels::gemm<T>(a.data(), b.data(), c1, n, n + 1, n - 1);
        kernels::reference::gemm<T>(a.data(), b.data(), c2, n, n + 1, n - 1);
        CHECK(c1 == c2);

        // a^* a with a stored n x (n+1): result is (n+1) x (n+1)
        std::vector<T> h1((n + 1) * (n + 1)), h2((n + 1) * (n + 1));
        kernels::gemm_adjoint<T>(a.data(), a.data(), h1, n + 1, n, n + 1);
        kernels::reference::gemm_adjoint<T>(a.data(), a.data(), h2, n + 1, n, n + 1);
        CHECK(h1 == h2);

        const auto x = random_vector<T>(n + 1, rng);
        std::vector<T> y1(n), y2(n);
        kernels::gemv<T>(a.data(), x, y1, n, n + 1);
        kernels::reference::gemv<T>(a.data(), x, y2, n, n + 1);
        CHECK(y1 == y2);
    }
}

TEST_CASE("matrix shape errors") {
    CHECK_THROWS_AS((Matrix<double>{{1.0, 2.0}, {3.0}}), DimensionError);
    CHECK_THROWS_AS(Matrix<double>(2, 2) * Matrix<double>(3, 3), DimensionError);
    CHECK_THROWS_AS(HermitianMatrix<double>(Matrix<double>(2, 3)), DimensionError);
}
