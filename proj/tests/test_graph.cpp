#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "clc/graph.hpp"
#include "oracles.hpp"

using namespace clc;

namespace {
const double kPi = 3.14159265358979323846;

std::vector<LevelGraph> graphs_of(const AnalyticFunction& f, double level, const Rect& region) {
    auto zeros = find_roots(f, region, RootKind::ZeroOfF);
    auto crits = find_roots(f, region, RootKind::ZeroOfFPrime);
    std::vector<OnLevelCritical> on_level;
    std::vector<Cpx> zs;
    for (const auto& c : crits)
        if (std::abs(std::abs(f.eval(c.location)) - level) <= 1e-7 * level)
            on_level.push_back({c.location, c.multiplicity});
    for (const auto& z : zeros) zs.push_back(z.location);
    return build_level_graphs(f, level, region, on_level, zs);
}
}  // namespace

TEST_CASE("lemniscate of Bernoulli: one vertex of degree 4, two bounded faces") {
    AnalyticFunction f = parse_function("z^2-1");
    auto comps = graphs_of(f, 1.0, Rect{Cpx(-3, -3), Cpx(3, 3)});
    REQUIRE(comps.size() == 1);
    const LevelGraph& g = comps[0];
    REQUIRE(g.verts.size() == 1);
    CHECK(std::abs(g.verts[0].pos) < 1e-9);
    CHECK(g.degree(0) == 4);
    CHECK(g.verts[0].vertex_arg == doctest::Approx(kPi).epsilon(1e-9));
    int bounded = 0;
    for (const auto& face : g.faces)
        if (face.bounded) ++bounded;
    CHECK(bounded == 2);
    check_level_graph_invariants(g);
    for (const auto& face : g.faces) {
        if (!face.bounded) continue;
        CHECK(face.zcount == 1);
    }
}

TEST_CASE("z^3 at level 1: a single closed curve, no vertices") {
    AnalyticFunction f = parse_function("z^3");
    auto comps = graphs_of(f, 1.0, Rect{Cpx(-2, -2), Cpx(2, 2)});
    REQUIRE(comps.size() == 1);
    const LevelGraph& g = comps[0];
    CHECK(g.verts.empty());
    REQUIRE(g.arcs.size() == 1);
    CHECK(g.arcs[0].closed());
    int bounded = 0;
    for (const auto& face : g.faces)
        if (face.bounded) ++bounded;
    CHECK(bounded == 1);
    for (Cpx z : g.arcs[0].pts) CHECK(std::abs(std::abs(z) - 1.0) < 1e-6);
    check_level_graph_invariants(g);
}

TEST_CASE("paper polynomial at its critical level") {
    AnalyticFunction f = parse_function("z^2 - sqrt(3.4)*z");
    auto comps = graphs_of(f, 0.85, Rect{Cpx(-3, -3), Cpx(4, 3)});
    REQUIRE(comps.size() == 1);
    const LevelGraph& g = comps[0];
    REQUIRE(g.verts.size() == 1);
    CHECK(std::abs(g.verts[0].pos - Cpx(std::sqrt(3.4) / 2, 0)) < 1e-9);
    CHECK(g.degree(0) == 4);
    int bounded = 0;
    for (const auto& face : g.faces)
        if (face.bounded) ++bounded;
    CHECK(bounded == 2);
    check_level_graph_invariants(g);
}

TEST_CASE("two ovals below the critical level are separate components") {
    AnalyticFunction f = parse_function("z^2-1");
    auto comps = graphs_of(f, 0.5, Rect{Cpx(-3, -3), Cpx(3, 3)});
    REQUIRE(comps.size() == 2);
    for (const auto& g : comps) {
        CHECK(g.verts.empty());
        check_level_graph_invariants(g);
    }
    CHECK(component_containing(comps, Cpx(1, 0)) != component_containing(comps, Cpx(-1, 0)));
}

TEST_CASE("face zero-counts sum to the winding of the outer boundary") {
    auto g = oracle::rng(37);
    for (int trial = 0; trial < 4; ++trial) {
        int deg = 2 + int(g() % 3);
        AnalyticFunction f = AnalyticFunction::from_coeffs(oracle::random_monic(g, deg, 0.8));
        Rect region{Cpx(-4, -4), Cpx(4, 4)};
        auto crits = find_roots(f, region, RootKind::ZeroOfFPrime);
        double maxmod = 0;
        for (const auto& c : crits) maxmod = std::max(maxmod, std::abs(f.eval(c.location)));
        double level = maxmod * 1.7 + 0.2;
        auto comps = graphs_of(f, level, region);
        REQUIRE(comps.size() == 1);
        int sum = 0;
        for (const auto& face : comps[0].faces)
            if (face.bounded) sum += face.zcount;
        CHECK(sum == deg);
    }
}

TEST_CASE("euler characteristic and degree invariants on the three-face chain") {
    // z^3 - 3z has both critical values at modulus 2: one component, two
    // vertices, three bounded faces.
    AnalyticFunction f = parse_function("z^3 - 3*z");
    auto comps = graphs_of(f, 2.0, Rect{Cpx(-3, -3), Cpx(3, 3)});
    REQUIRE(comps.size() == 1);
    const LevelGraph& g = comps[0];
    REQUIRE(g.verts.size() == 2);
    CHECK(g.degree(0) == 4);
    CHECK(g.degree(1) == 4);
    int bounded = 0;
    for (const auto& face : g.faces)
        if (face.bounded) {
            ++bounded;
            CHECK(face.zcount == 1);
        }
    CHECK(bounded == 3);
    check_level_graph_invariants(g);
}

TEST_CASE("point_in_face agrees with the winding oracle") {
    AnalyticFunction f = parse_function("z^2-1");
    auto comps = graphs_of(f, 1.0, Rect{Cpx(-3, -3), Cpx(3, 3)});
    const LevelGraph& g = comps[0];
    for (size_t fi = 0; fi < g.faces.size(); ++fi) {
        if (!g.faces[fi].bounded) continue;
        Cpx inner = g.faces[fi].inner_pt;
        CHECK(point_in_face(g, int(fi), inner));
        CHECK(!point_in_face(g, int(fi), Cpx(5, 5)));
    }
    int f1 = -1, fm1 = -1;
    for (size_t fi = 0; fi < g.faces.size(); ++fi) {
        if (!g.faces[fi].bounded) continue;
        if (point_in_face(g, int(fi), Cpx(1, 0))) f1 = int(fi);
        if (point_in_face(g, int(fi), Cpx(-1, 0))) fm1 = int(fi);
    }
    CHECK(f1 >= 0);
    CHECK(fm1 >= 0);
    CHECK(f1 != fm1);
}
