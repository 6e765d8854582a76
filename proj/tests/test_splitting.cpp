#include <cmath>
#include <vector>

#include "doctest.h"
#include "specfam/splitting.hpp"
#include "support.hpp"

using namespace specfam;
using namespace specfam::testing;

TEST_CASE("bounded_transform examples") {
    CHECK(bounded_transform(HermitianMatrix<double>::zero(3)).matrix() == Matrix<double>(3, 3));
    const auto b = bounded_transform(HermitianMatrix<double>::identity(1));
    CHECK(b(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
    // t / (1 + t^2) on a diagonal
    const auto d = bounded_transform(HermitianMatrix<double>::diagonal(std::vector<double>{-1.0, 2.0, 10.0}));
    CHECK(d(0, 0) == doctest::Approx(-0.5));
    CHECK(d(1, 1) == doctest::Approx(0.4));
    CHECK(d(2, 2) == doctest::Approx(10.0 / 101.0));
}

TEST_CASE_TEMPLATE("the bounded transform has norm at most 1/2", T, double, Complex) {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
        const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-2.0, 3.0)(rng));
        const auto a = random_hermitian<T>(random_dim(rng, 1, 8), rng, -scale, scale, 0.0);
        const auto b = bounded_transform(a);
        CHECK(eigen_oracle(b).max_abs_eigenvalue() <= 0.5 + 1e-12);
        // B agrees with the oracle functional calculus
        const auto ref = eigen_oracle(a).apply([](double mu) { return mu / (1.0 + mu * mu); });
        CHECK(distance(b.matrix(), ref.matrix()) <= 1e-10);
    }
}

TEST_CASE("split examples") {
    const auto s = split(HermitianMatrix<double>::diagonal(std::vector<double>{-1.0, 2.0}));
    REQUIRE(s.rank_minus() == 1);
    REQUIRE(s.rank_plus() == 1);
    CHECK(std::abs(s.basis_minus.vector(0)[0]) == doctest::Approx(1.0));
    CHECK(s.a_minus(0, 0) == doctest::Approx(-1.0));
    CHECK(s.a_plus(0, 0) == doctest::Approx(2.0));

    const auto z = split(HermitianMatrix<double>::zero(3));
    CHECK(z.rank_minus() == 3);
    CHECK(z.rank_plus() == 0);
    CHECK(z.b.matrix() == Matrix<double>(3, 3));

    // B + beta must dominate 1
    CHECK_THROWS_AS(split(HermitianMatrix<double>::identity(2), 0.25), PreconditionError);
}

TEST_CASE_TEMPLATE("split: random indefinite matrices", T, double, Complex) {
    Rng rng(32);
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = random_dim(rng, 1, 10);
        auto spec = spectrum_with_gap(n, -3.0, 3.0, 1e-3, rng);
        for (double& mu : spec)
            if (mu < 0.0 && mu > -1e-8) mu = -1e-3;  // gap policy: nothing in (-1e-8, 0)
        const auto a = hermitian_with_spectrum<T>(spec, rng);
        const auto s = split(a);
        const auto eig = eigen_oracle(a);
        std::size_t nonpositive = 0;
        for (double mu : eig.eigenvalues) nonpositive += mu <= 0.0;
        CHECK(s.rank_minus() == nonpositive);
        CHECK(distance(s.e.matrix(), oracle_projector(eig, [](double mu) { return mu <= 0.0; })) <= 1e-8);

        const auto d = diagnose(s);
        CHECK(d.commute_a <= 1e-9 * a.frobenius());
        CHECK(d.commute_b <= 1e-10);
        CHECK(d.commute_resolvent <= 1e-10);
        CHECK(d.reconstruction <= 1e-9 * a.frobenius());
        if (s.rank_minus() > 0) CHECK(d.max_minus <= 0.0);
        if (s.rank_plus() > 0) CHECK(d.min_plus >= 0.0);
        CHECK(check_sign_inequalities(s, 20, rng).passed);
    }
}

TEST_CASE("form identity") {
    const auto one = HermitianMatrix<double>::identity(1);
    CHECK(check_form_identity(one, Vector<double>{1.0}) <= 4e-16);
    CHECK(check_form_identity(one, Vector<double>{0.0}) == 0.0);
}

TEST_CASE_TEMPLATE("form identity: random pairs", T, double, Complex) {
    Rng rng(33);
    for (int t = 0; t < 300; ++t) {
        const double scale = std::pow(10.0, std::uniform_real_distribution<double>(-1.0, 2.0)(rng));
        const auto a = random_hermitian<T>(random_dim(rng, 1, 8), rng, -scale, scale, 0.0);
        const auto x = random_vector<T>(a.dim(), rng);
        CHECK(check_form_identity(a, x) <= form_identity_tolerance(a, x));
    }
}

TEST_CASE("sign inequalities on the axes") {
    const auto a = HermitianMatrix<double>::diagonal(std::vector<double>{-1.0, 2.0});
    const auto b = bounded_transform(a);
    CHECK(real_part(form(b, unit_vector<double>(2, 0))) == doctest::Approx(-0.5));
    CHECK(real_part(form(b, unit_vector<double>(2, 1))) == doctest::Approx(0.4));
    Rng rng(3);
    CHECK(check_sign_inequalities(split(a), 50, rng).passed);
}
