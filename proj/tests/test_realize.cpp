#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "builders.hpp"
#include "clc/realize.hpp"
#include "oracles.hpp"

using namespace clc;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("single point targets give pure powers") {
    for (int k = 1; k <= 4; ++k) {
        RealizationResult r = realize(builders::point(k), 7);
        CHECK(r.success);
        REQUIRE(r.coefficients.size() == size_t(k + 1));
        CHECK(std::abs(r.coefficients[k] - Cpx(1)) < 1e-12);
        for (int i = 0; i < k; ++i) CHECK(std::abs(r.coefficients[i]) < 1e-12);
    }
}

TEST_CASE("paper example target is realized by z^2 - 0.85 up to gauge") {
    Configuration target = extract_config(parse_function("z^2 - sqrt(3.4)*z"), 1.0);
    RealizationResult r = realize(target, 3);
    REQUIRE(r.success);
    REQUIRE(r.coefficients.size() == 3);
    CHECK(config_equal(r.achieved_config, target));
    // monic centered度 2 with critical value -0.85: z^2 - 0.85
    CHECK(std::abs(r.coefficients[2] - Cpx(1)) < 1e-9);
    CHECK(std::abs(r.coefficients[1]) < 1e-9);
    CHECK(std::abs(r.coefficients[0] - Cpx(-0.85, 0)) < 1e-7);
}

TEST_CASE("extract-realize-extract round trip") {
    AnalyticFunction f = parse_function("z^3 - 3*z + 1");
    Rect region{Cpx(-5, -5), Cpx(5, 5)};
    double level = default_extract_level(f, region);
    Configuration target = extract_config(f, level);
    RealizationResult r = realize(target, 11);
    REQUIRE(r.success);
    Configuration again =
        extract_config(AnalyticFunction::from_coeffs(r.coefficients),
                       default_extract_level(AnalyticFunction::from_coeffs(r.coefficients),
                                             region));
    CHECK(config_equal(again, target));
    CHECK(total_degree(target) == 3);
    CHECK(r.coefficients.size() == 4);
}

TEST_CASE("normalize") {
    SUBCASE("2z^2-4z becomes z^2-2 (precomposition gauge only)") {
        std::vector<Cpx> c{Cpx(0), Cpx(-4), Cpx(2)};
        auto n = normalize(c);
        REQUIRE(n.size() == 3);
        CHECK(std::abs(n[2] - Cpx(1)) < 1e-12);
        CHECK(std::abs(n[1]) < 1e-12);
        CHECK(std::abs(n[0] - Cpx(-2, 0)) < 1e-12);
    }
    SUBCASE("z^k is a fixed point") {
        std::vector<Cpx> c{Cpx(0), Cpx(0), Cpx(0), Cpx(1)};
        auto n = normalize(c);
        for (size_t i = 0; i < c.size(); ++i) CHECK(std::abs(n[i] - c[i]) < 1e-14);
    }
    SUBCASE("idempotent on random polynomials") {
        auto rng = oracle::rng(31);
        for (int t = 0; t < 100; ++t) {
            int deg = 1 + int(rng() % 5);
            auto c = oracle::random_monic(rng, deg, 1.0);
            // random non-monic scaling and shift
            Cpx s(1.3, -0.4);
            for (auto& x : c) x *= s;
            auto n1 = normalize(c);
            auto n2 = normalize(n1);
            REQUIRE(n1.size() == n2.size());
            for (size_t i = 0; i < n1.size(); ++i) CHECK(std::abs(n1[i] - n2[i]) < 1e-10);
        }
    }
    SUBCASE("normalization preserves the configuration") {
        std::vector<Cpx> c{Cpx(0), Cpx(-4), Cpx(2)};  // 2z^2-4z
        Configuration a = extract_config(AnalyticFunction::from_coeffs(c), 3.0);
        Configuration b = extract_config(AnalyticFunction::from_coeffs(normalize(c)), 3.0);
        CHECK(config_equal(a, b));
    }
}

TEST_CASE("determinism: same target and seed give identical output") {
    Configuration target = extract_config(parse_function("z^2-1"), 2.0);
    RealizationResult a = realize(target, 42);
    RealizationResult b = realize(target, 42);
    REQUIRE(a.success);
    REQUIRE(b.success);
    REQUIRE(a.coefficients.size() == b.coefficients.size());
    for (size_t i = 0; i < a.coefficients.size(); ++i)
        CHECK(a.coefficients[i] == b.coefficients[i]);
    CHECK(a.attempts == b.attempts);
}

TEST_CASE("degree over the cap is rejected") {
    CHECK_THROWS_AS(realize(builders::point(kDegreeCap + 1), 1), Error);
}

TEST_CASE("poly_roots finds multiple roots") {
    // (z-1)^2 (z+2)
    std::vector<Cpx> c{Cpx(2), Cpx(-3), Cpx(0), Cpx(1)};
    auto r = poly_roots(c);
    REQUIRE(r.size() == 3);
    CHECK(std::abs(r[0] - Cpx(-2, 0)) < 1e-6);
    CHECK(std::abs(r[1] - Cpx(1, 0)) < 1e-5);
    CHECK(std::abs(r[2] - Cpx(1, 0)) < 1e-5);
}

TEST_CASE("synthetic flower target of degree 6 is reported, not silently approximated") {
    // six zeros in three petals at one vertex of multiplicity 2
    Configuration target = builders::flower(1.0, kPi, {2, 2, 2});
    RealizationResult r = realize(target, 5, 6);
    // whether or not the search lands, the contract is explicit reporting
    if (!r.success) {
        CHECK(r.residual >= 0);
        CHECK(r.attempts == 6);
    } else {
        CHECK(config_equal(r.achieved_config, target));
    }
}
