#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "specfam/verify.hpp"

using namespace specfam;

namespace {

OperatorSpec diagonal(std::vector<double> s) {
    OperatorSpec spec;
    spec.kind = OperatorKind::diagonal;
    spec.spectrum = std::move(s);
    return spec;
}

}  // namespace

TEST_CASE("verify: zero operator passes every check") {
    const auto spec = diagonal({0.0});
    const auto report = verify_report(generate<double>(spec), spec, VerifyConfig{});
    CHECK(report["status"] == "pass");
    CHECK(report["checks"].size() > 20);
    for (const auto& c : report["checks"]) {
        CHECK_MESSAGE(c["pass"].get<bool>(), c["name"].get<std::string>());
        CHECK_FALSE(c["anchor"].get<std::string>().empty());
    }
}

TEST_CASE("verify: reports are deterministic apart from the timestamp") {
    OperatorSpec spec;
    spec.kind = OperatorKind::random;
    spec.dim = 10;
    spec.seed = 42;
    const auto a = generate<double>(spec);
    VerifyConfig cfg;
    cfg.seed = 42;
    auto r1 = verify_report(a, spec, cfg);
    auto r2 = verify_report(a, spec, cfg);
    CHECK(r1["status"] == "pass");
    r1.erase("timestamp");
    r2.erase("timestamp");
    CHECK(r1.dump() == r2.dump());
}

TEST_CASE("verify: laplacian quadrature table respects 1/k") {
    OperatorSpec spec;
    spec.kind = OperatorKind::laplacian1d;
    spec.dim = 32;
    const auto report = reconstruct_report(generate<double>(spec), VerifyConfig{});
    const double nsq = report["norm_sq"].get<double>();
    int rows = 0;
    for (const auto& row : report["rows"]) {
        const int k = row["k"].get<int>();
        CHECK(row["err1"].get<double>() * k <= nsq * (1.0 + 1e-12));
        CHECK(row["err2"].get<double>() <= row["bound2"].get<double>());
        ++rows;
    }
    CHECK(rows == 7);
    CHECK(report["reconstruction"]["shift"].get<double>() <= 1e-9 * generate<double>(spec).frobenius());
}

TEST_CASE("verify: zero tolerance scale fails and lists failures first") {
    OperatorSpec spec;
    spec.kind = OperatorKind::random;
    spec.dim = 6;
    spec.seed = 3;
    VerifyConfig cfg;
    cfg.tol_scale = 0.0;
    const auto checks = run_checks(generate<Complex>(spec), cfg);
    bool seen_pass = false, any_fail = false;
    for (const auto& c : checks) {
        if (c.passed) seen_pass = true;
        else {
            any_fail = true;
            CHECK_FALSE(seen_pass);
        }
    }
    CHECK(any_fail);
}

TEST_CASE("verify: analyze and split summaries") {
    const auto spec = diagonal({-1.0, 2.0, 2.0});
    const auto a = generate<double>(spec);
    const auto an = analyze_report(a, VerifyConfig{});
    for (const char* route : {"shift", "split"}) {
        const auto& jumps = an[route]["jumps"];
        REQUIRE(jumps.size() == 2);
        CHECK(jumps[0]["rank"] == 1);
        CHECK(jumps[1]["rank"] == 2);
        CHECK(jumps[1]["lambda"].get<double>() == doctest::Approx(2.0));
    }
    const auto sp = split_report(a, VerifyConfig{});
    CHECK(sp["rank_E"] == 1);
    CHECK(sp["rank_I_minus_E"] == 2);
}

TEST_CASE("check records serialize infinite residuals as null") {
    CheckRecord r{"x", "A = A^*", false, std::numeric_limits<double>::infinity(), 1e-9, "threw"};
    const auto j = to_json(r);
    CHECK(j.dump().find("\"residual\":null") != std::string::npos);
    CHECK(j["pass"] == false);
}
