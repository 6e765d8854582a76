#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "specfam/error.hpp"
#include "specfam/gallery.hpp"
#include "specfam/matrix_market.hpp"
#include "support.hpp"

using namespace specfam;

TEST_CASE("generate: closed forms") {
    OperatorSpec d;
    d.kind = OperatorKind::diagonal;
    d.spectrum = {-1.0, 2.0};
    CHECK(generate<double>(d).matrix() == Matrix<double>{{-1.0, 0.0}, {0.0, 2.0}});

    OperatorSpec l;
    l.kind = OperatorKind::laplacian1d;
    l.dim = 2;
    const auto a = generate<double>(l);
    CHECK(a.matrix() == Matrix<double>{{8.0, -4.0}, {-4.0, 8.0}});
    const auto e = eigen_oracle(a);
    CHECK(e.eigenvalues[0] == doctest::Approx(4.0));
    CHECK(e.eigenvalues[1] == doctest::Approx(12.0));

    OperatorSpec o;
    o.kind = OperatorKind::oscillator;
    o.dim = 4;
    const auto osc = generate<double>(o);
    l.dim = 4;
    const auto lap = generate<double>(l);
    // potential g_i^2 with g_i = (i - 2) / 2
    const std::vector<double> pot{1.0, 0.25, 0.0, 0.25};
    for (std::size_t i = 0; i < 4; ++i) CHECK(osc(i, i) - lap(i, i) == doctest::Approx(pot[i]));
}

TEST_CASE_TEMPLATE("generate: random is deterministic and self-adjoint", T, double, Complex) {
    OperatorSpec r;
    r.kind = OperatorKind::random;
    r.dim = 9;
    r.seed = 77;
    const auto a = generate<T>(r);
    const auto b = generate<T>(r);
    CHECK(a.matrix() == b.matrix());
    CHECK(a.matrix() == a.matrix().adjoint());
    for (double mu : eigen_oracle(a).eigenvalues) {
        CHECK(mu >= -1.0 - 1e-12);
        CHECK(mu <= 1.0 + 1e-12);
    }
    r.seed = 78;
    CHECK_FALSE(generate<T>(r).matrix() == a.matrix());
}

TEST_CASE("generate: bad specs") {
    OperatorSpec z;
    z.kind = OperatorKind::laplacian1d;
    z.dim = 0;
    CHECK_THROWS_AS(generate<double>(z), Error);
    OperatorSpec d;
    d.kind = OperatorKind::diagonal;
    CHECK_THROWS_AS(generate<double>(d), Error);
    CHECK_THROWS_AS(parse_kind("hilbert"), Error);
    CHECK_THROWS_AS(parse_mode("quaternion"), Error);
    CHECK(parse_kind(to_string(OperatorKind::oscillator)) == OperatorKind::oscillator);
}

namespace {

template <Field T>
MatrixMarketMatrix<T> parse(const std::string& text) {
    std::istringstream in(text);
    return read_matrix_market<T>(in);
}

}  // namespace

TEST_CASE("matrix market: array symmetric") {
    const auto m = parse<double>(
        "%%MatrixMarket matrix array real symmetric\n"
        "% lower triangle, column-major\n"
        "2 2\n2\n-1\n2\n");
    CHECK(m.matrix.matrix() == Matrix<double>{{2.0, -1.0}, {-1.0, 2.0}});
    CHECK(m.header.format == MatrixMarketHeader::Format::array);
    CHECK(m.defect == 0.0);
}

TEST_CASE("matrix market: coordinate entries are mirrored") {
    const auto m = parse<double>(
        "%%MatrixMarket matrix coordinate real symmetric\n"
        "2 2 2\n1 1 1.5\n2 1 -3\n");
    CHECK(m.matrix.matrix() == Matrix<double>{{1.5, -3.0}, {-3.0, 0.0}});

    const auto h = parse<Complex>(
        "%%MatrixMarket matrix coordinate complex hermitian\n"
        "2 2 1\n2 1 1 2\n");
    CHECK(h.matrix(1, 0) == Complex{1.0, 2.0});
    CHECK(h.matrix(0, 1) == Complex{1.0, -2.0});

    const auto i = parse<double>(
        "%%MatrixMarket matrix coordinate integer general\n"
        "2 2 2\n1 2 4\n2 1 4\n");
    CHECK(i.matrix(0, 1) == 4.0);
}

TEST_CASE("matrix market: errors") {
    CHECK_THROWS_AS(parse<double>("%%MatrixMarket vector array real general\n1 1\n1\n"), ParseError);
    CHECK_THROWS_AS(parse<double>("%%MatrixMarket matrix array real symmetric\n2 3\n1\n"), ParseError);
    CHECK_THROWS_AS(parse<double>("%%MatrixMarket matrix coordinate real symmetric\n2 2 1\n3 1 1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse<double>("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse<double>("%%MatrixMarket matrix coordinate complex hermitian\n1 1 1\n1 1 1 0\n"),
                    ParseError);
    CHECK_THROWS_AS(parse<double>("%%MatrixMarket matrix coordinate real general\n2 2 1\n1 2 1\n"),
                    ParseError);
    CHECK_THROWS_AS(parse<double>("not a header\n"), ParseError);
    CHECK_THROWS_AS(parse<double>(""), ParseError);
    CHECK_THROWS_AS(read_matrix_market<double>(std::string("/nonexistent/m.mtx")), ParseError);
}

TEST_CASE("matrix market: general input is symmetrized with its defect") {
    const auto m = parse<double>(
        "%%MatrixMarket matrix array real general\n"
        "2 2\n1\n2e-8\n0\n1\n");
    CHECK(m.matrix(0, 1) == doctest::Approx(1e-8));
    CHECK(m.defect > 0.0);
    CHECK(m.defect < max_general_defect);
}

TEST_CASE_TEMPLATE("matrix market: write then read is exact", T, double, Complex) {
    Rng rng(51);
    for (int t = 0; t < 10; ++t) {
        const auto a = specfam::testing::random_hermitian<T>(1 + t, rng, -1e3, 1e3, 0.0);
        std::stringstream io;
        write_matrix_market(io, a);
        const auto back = read_matrix_market<T>(io);
        CHECK(back.matrix.matrix() == a.matrix());
    }
}

TEST_CASE("matrix market: file kind through generate") {
    const auto path = std::filesystem::temp_directory_path() / "specfam_gallery_test.mtx";
    {
        std::ofstream f(path);
        f << "%%MatrixMarket matrix coordinate real symmetric\n3 3 2\n1 1 2\n3 2 -1\n";
    }
    OperatorSpec s;
    s.kind = OperatorKind::file;
    s.path = path.string();
    const auto a = generate<double>(s);
    CHECK(a(2, 1) == -1.0);
    CHECK(a(1, 2) == -1.0);
    std::filesystem::remove(path);
}
