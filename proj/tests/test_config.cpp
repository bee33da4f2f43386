#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "builders.hpp"
#include "clc/json_io.hpp"

using namespace clc;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("validate accepts the documented examples") {
    CHECK(validate(builders::point(3)).empty());
    Configuration eight = builders::eight(1.0, kPi);
    CHECK(validate(eight).empty());
}

TEST_CASE("validate flags rule violations") {
    SUBCASE("H monotonicity") {
        Configuration eight = builders::eight(1.0, kPi);
        Configuration inner = builders::eight(2.0, kPi);  // H larger than parent
        eight.children[0] = inner;
        eight.member.face_data[0].z = 2;
        eight.member.skeleton.arcs[eight.member.face_data[0].face == 0 ? 0 : 0].marks.push_back(
            eight.member.skeleton.arcs[0].marks[0]);
        auto v = validate(eight);
        bool found = false;
        for (const auto& s : v)
            if (s.find("H monotonicity") != std::string::npos) found = true;
        CHECK(found);
    }
    SUBCASE("zero multiplicity") {
        auto v = validate(builders::point(0));
        REQUIRE(v.size() == 1);
        CHECK(v[0].find("multiplicity") != std::string::npos);
    }
    SUBCASE("Z(child) != z(D)") {
        Configuration eight = builders::eight(1.0, kPi);
        eight.children[0] = builders::point(5);
        auto v = validate(eight);
        bool found = false;
        for (const auto& s : v)
            if (s.find("Z(child) != z(D)") != std::string::npos) found = true;
        CHECK(found);
    }
}

TEST_CASE("canonical form is invariant under relabeling") {
    auto rng = std::mt19937_64(5);
    Configuration base = builders::flower(0.75, 2.0, {1, 2, 3});
    REQUIRE(validate(base).empty());
    std::string code = canonical_form(base);
    for (int i = 0; i < 100; ++i) {
        Configuration r = builders::relabel(base, rng);
        CHECK(validate(r).empty());
        CHECK(canonical_form(r) == code);
    }
}

TEST_CASE("canonical form is invariant under rotation of the starting petal") {
    // same cyclic word (1,2,3) started elsewhere
    Configuration a = builders::flower(0.75, 2.0, {1, 2, 3});
    Configuration b = builders::flower(0.75, 2.0, {2, 3, 1});
    Configuration c = builders::flower(0.75, 2.0, {3, 1, 2});
    CHECK(config_equal(a, b));
    CHECK(config_equal(b, c));
}

TEST_CASE("canonical form distinguishes orientation (chirality)") {
    // mirror image of cyclic (1,2,3) is cyclic (1,3,2)
    Configuration a = builders::flower(0.75, 2.0, {1, 2, 3});
    Configuration m = builders::flower(0.75, 2.0, {1, 3, 2});
    CHECK(!config_equal(a, m));
}

TEST_CASE("mirror of an achiral member equals itself") {
    // the symmetric figure-eight maps onto itself under reflection, so its
    // "mirror" is the same PC_a member
    Configuration a = builders::eight(1.0, kPi);
    Configuration m = builders::flower(1.0, kPi, {1, 1}, kPi);  // petals swapped
    CHECK(config_equal(a, m));
}

TEST_CASE("H differences separate configurations") {
    Configuration a = builders::eight(1.0, kPi);
    Configuration b = builders::eight(0.25, kPi);
    CHECK(!config_equal(a, b));
    SUBCASE("ordinal mode ignores the actual H values") {
        CHECK(config_equal(a, b, HCompare::Ordinal));
    }
    SUBCASE("ordinal mode still sees order violations") {
        Configuration nested_a = builders::eight(1.0, kPi);
        nested_a.member.face_data[0].z = 1;
        CHECK(canonical_form(a, HCompare::Ordinal) == canonical_form(b, HCompare::Ordinal));
    }
}

TEST_CASE("vertex argument differences separate configurations") {
    Configuration a = builders::eight(1.0, kPi);
    Configuration b = builders::eight(1.0, kPi / 2);
    CHECK(!config_equal(a, b));
}

TEST_CASE("config_equal is an equivalence relation on a pool of configs") {
    std::vector<Configuration> pool;
    for (int z = 1; z <= 5; ++z) pool.push_back(builders::point(z));
    for (double h : {0.25, 1.0, 2.0}) {
        pool.push_back(builders::eight(h, kPi));
        pool.push_back(builders::eight(h, kPi / 2));
        pool.push_back(builders::flower(h, 2.0, {1, 2, 3}));
        pool.push_back(builders::flower(h, 2.0, {1, 3, 2}));
        pool.push_back(builders::flower(h, 2.0, {2, 3, 1}));
    }
    pool.push_back(builders::flower(0.5, 1.0, {2, 2}));
    REQUIRE(pool.size() >= 20);
    size_t n = pool.size();
    std::vector<std::string> codes;
    for (const auto& c : pool) codes.push_back(canonical_form(c));
    for (size_t i = 0; i < n; ++i) {
        CHECK(config_equal(pool[i], pool[i]));  // reflexive
        for (size_t j = 0; j < n; ++j) {
            CHECK(config_equal(pool[i], pool[j]) == config_equal(pool[j], pool[i]));
            for (size_t k = 0; k < n; ++k) {
                if (codes[i] == codes[j] && codes[j] == codes[k])
                    CHECK(config_equal(pool[i], pool[k]));
            }
        }
    }
}

TEST_CASE("total_degree") {
    CHECK(total_degree(builders::point(4)) == 4);
    CHECK(total_degree(builders::eight(1.0, kPi)) == 2);
    CHECK(total_degree(builders::flower(1.0, 2.0, {1, 2, 3})) == 6);
}

TEST_CASE("nesting chains decrease H strictly to zero") {
    Configuration outer = builders::eight(1.0, kPi);
    Configuration inner = builders::eight(0.25, kPi / 3);
    outer.member.face_data[0].z = 2;
    // give the outer face a second mark so z(D)=2 stays consistent
    int face0 = outer.member.face_data[0].face;
    for (auto& a : outer.member.skeleton.arcs) {
        bool in_face = false;
        for (const ArcEnd& d : outer.member.skeleton.faces[face0].boundary)
            if (d.arc == a.id) in_face = true;
        if (in_face) {
            DistMark dm = a.marks[0];
            dm.t += 3;
            dm.pos = a.pts[static_cast<size_t>(dm.t)];
            a.marks.push_back(dm);
            break;
        }
    }
    outer.children[0] = inner;
    outer.gradient_offsets[0] = 0;
    assign_levels(outer);
    CHECK(validate(outer).empty());
    CHECK(outer.level == 2);
    CHECK(total_degree(outer) == 3);
}

TEST_CASE("JSON round trip preserves canonical form and bytes") {
    for (Configuration cfg :
         {builders::flower(0.75, 2.0, {1, 2, 3}), builders::eight(1.0, kPi), builders::point(3)}) {
        std::string text = serialize_config(cfg);
        Configuration back = parse_config(text);
        CHECK(validate(back).empty());
        CHECK(config_equal(cfg, back));
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_config("{"), Error);
    CHECK_THROWS_AS(parse_config("{\"pca_version\": 2}"), Error);
}
