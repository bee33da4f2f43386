#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clc/complexfn.hpp"
#include "oracles.hpp"

using namespace clc;

namespace {
const double kPi = 3.14159265358979323846;
bool close(Cpx a, Cpx b, double tol = 1e-12) { return std::abs(a - b) <= tol; }
}  // namespace

TEST_CASE("eval on the documented examples") {
    CHECK(close(parse_function("z^2").eval(Cpx(1, 1)), Cpx(0, 2)));
    CHECK(close(parse_function("sin(z)").eval(Cpx(kPi / 2, 0)), Cpx(1, 0), 1e-12));
    AnalyticFunction paper = parse_function("z^2 - sqrt(3.4)*z");
    CHECK(close(paper.eval(Cpx(std::sqrt(3.4) / 2, 0)), Cpx(-0.85, 0), 1e-12));
}

TEST_CASE("derivative on the documented examples") {
    CHECK(close(parse_function("z^2").derivative().eval(Cpx(1, 0)), Cpx(2, 0)));
    CHECK(close(parse_function("sin(z)").derivative().eval(Cpx(0, 0)), Cpx(1, 0)));
    AnalyticFunction paper = parse_function("z^2 - sqrt(3.4)*z");
    CHECK(close(paper.derivative().eval(Cpx(0, 0)), Cpx(-std::sqrt(3.4), 0), 1e-12));
}

TEST_CASE("derivative matches central differences at random points") {
    auto g = oracle::rng(7);
    const char* exprs[] = {"z^2 - 1", "sin(z)", "exp(z)*cos(z)", "(z-1)*(z+2)^2",
                           "z^3 - 3*z + 1"};
    for (const char* s : exprs) {
        AnalyticFunction f = parse_function(s);
        AnalyticFunction fp = f.derivative();
        for (int i = 0; i < 100; ++i) {
            Cpx z = oracle::random_in_disk(g, 1.5);
            Cpx exact = fp.eval(z);
            Cpx approx = oracle::central_diff(f, z);
            CHECK(std::abs(exact - approx) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("parser grammar") {
    CHECK(close(parse_function("(z-1)*(z+2)^2").eval(Cpx(0, 0)), Cpx(-4, 0)));
    CHECK(close(parse_function("sqrt(3.4)").eval(Cpx(0, 0)), Cpx(std::sqrt(3.4), 0)));
    CHECK(close(parse_function("-z^2").eval(Cpx(2, 0)), Cpx(-4, 0)));
    CHECK(close(parse_function("2*i*z").eval(Cpx(1, 0)), Cpx(0, 2)));
    CHECK(close(parse_function("cos(pi)").eval(Cpx(0, 0)), Cpx(-1, 0), 1e-12));
    CHECK_THROWS_AS(parse_function("1/z"), Error);
    CHECK_THROWS_AS(parse_function("z^(-1)"), Error);
    CHECK_THROWS_AS(parse_function("log(z)"), Error);
    CHECK_THROWS_AS(parse_function("z +"), Error);
}

TEST_CASE("parser reports line and column") {
    try {
        parse_function("z^2 - w");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("column 7") != std::string::npos);
    }
}

TEST_CASE("polynomial coefficient extraction") {
    auto c = parse_function("(z-1)*(z+2)^2").polynomial_coeffs();
    REQUIRE(c.has_value());
    REQUIRE(c->size() == 4);
    CHECK(close((*c)[0], Cpx(-4, 0)));
    CHECK(close((*c)[1], Cpx(0, 0)));
    CHECK(close((*c)[2], Cpx(3, 0)));
    CHECK(close((*c)[3], Cpx(1, 0)));
    CHECK(!parse_function("sin(z)").polynomial_coeffs().has_value());
}

TEST_CASE("from_coeffs round trip") {
    std::vector<Cpx> c{Cpx(-4, 0), Cpx(0, 1), Cpx(3, 0), Cpx(1, 0)};
    AnalyticFunction f = AnalyticFunction::from_coeffs(c);
    auto back = f.polynomial_coeffs();
    REQUIRE(back.has_value());
    REQUIRE(back->size() == c.size());
    for (size_t i = 0; i < c.size(); ++i) CHECK(close((*back)[i], c[i]));
}

TEST_CASE("non-finite evaluation is an error") {
    AnalyticFunction f = parse_function("exp(z)");
    CHECK_THROWS_AS(f.eval(Cpx(1e9, 0)), Error);
}
