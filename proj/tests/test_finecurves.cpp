#include "curvelab/finecurves.hpp"

#include "doctest.h"

#include <random>

using namespace curvelab;
using namespace curvelab::fine;
using tri::PunctureSet;

namespace {

Rational r(std::int64_t p, std::int64_t q) { return Rational(p, q); }

std::string code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

// Crosses the horizontal loop at height 1/10 three times; the region below
// the loop between the second and third crossings contains the lattice point
// (1, 0), the one above between the first two crossings is free.
PolyCurve wiggle() {
    return PolyCurve::validate({{r(1, 4), r(-2, 5)}, {r(1, 4), r(3, 10)}, {r(1, 2), r(3, 10)}, {r(1, 2), r(-2, 5)},
                                {r(6, 5), r(-2, 5)}, {r(6, 5), r(11, 20)}},
                               {1, 1});
}

}  // namespace

TEST_CASE("validation") {
    auto h = straight_loop({0, r(1, 3)}, 1, 0);
    CHECK(h.size() == 1);
    CHECK(code_of([] {
              PolyCurve::validate({{r(1, 10), r(1, 10)}, {r(1, 2), r(1, 2)}, {r(1, 2), r(1, 10)}, {r(1, 10), r(1, 2)}},
                                  {1, 0});
          }) == "self-crossing");
    CHECK(code_of([] {
              PolyCurve::validate({{r(1, 4), r(1, 4)}, {r(3, 4), r(1, 4)}, {r(3, 4), r(3, 4)}, {r(1, 4), r(3, 4)}},
                                  {0, 0});
          }) == "separating/inessential fine curve");
    CHECK(code_of([] { straight_loop({0, 0}, 2, 0); }) == "self-crossing");
    CHECK(code_of([] { straight_loop({0, 0}, 2, 4); }) == "self-crossing");
    CHECK_NOTHROW(wiggle());
    auto w = wiggle();
    CHECK(PolyCurve::parse(w.serialize()).vertices() == w.vertices());
    CHECK_THROWS_AS(PolyCurve::parse("1/2 1/3\n"), Error);
}

TEST_CASE("transverse intersections") {
    auto h = straight_loop({r(1, 7), r(1, 3)}, 1, 0);
    CHECK(transverse_intersections(h, straight_loop({r(2, 9), r(1, 5)}, 0, 1)).size() == 1);
    CHECK(transverse_intersections(h, straight_loop({r(2, 9), r(3, 5)}, 1, 0)).empty());
    CHECK(transverse_intersections(h, straight_loop({r(2, 9), r(1, 5)}, 2, 5)).size() == 5);
    // Count equals |det| for straight loops.
    for (int p = -3; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q) {
            if (std::gcd(p, q) != 1) continue;
            for (int s = -3; s <= 3; ++s)
                for (int t = 0; t <= 3; ++t) {
                    if (std::gcd(s, t) != 1) continue;
                    auto a = straight_loop({r(1, 7), r(2, 11)}, p, q), b = straight_loop({r(3, 13), r(5, 17)}, s, t);
                    if (p * t == q * s) continue;
                    CHECK(transverse_intersections(a, b).size() == static_cast<std::size_t>(std::abs(p * t - q * s)));
                }
        }
    // A vertex lying on the other curve is rejected.
    CHECK(code_of([&] { transverse_intersections(h, straight_loop({r(1, 2), r(1, 3)}, 0, 1)); }) == "perturb inputs");
    CHECK(code_of([&] { transverse_intersections(h, h); }) == "perturb inputs");
}

TEST_CASE("bigon detection") {
    auto a = straight_loop({0, r(1, 10)}, 1, 0);
    auto b = wiggle();
    CHECK(transverse_intersections(a, b).size() == 3);
    CHECK(minimal_position_rel(a, straight_loop({r(1, 3), 0}, 0, 1), PunctureSet({{r(1, 2), r(1, 2)}})));

    auto origin = PunctureSet({{0, 0}});
    auto g = find_empty_bigon(a, b, origin);
    REQUIRE(g);
    CHECK_FALSE(minimal_position_rel(a, b, origin));
    // Add a puncture inside the free region.
    auto both = PunctureSet({{0, 0}, {r(3, 8), r(1, 5)}});
    CHECK(minimal_position_rel(a, b, both));
    CHECK(minimal_position_rel(b, a, both));
    CHECK(code_of([&] { minimal_position_rel(a, b, PunctureSet({{r(1, 2), r(1, 10)}})); }) == "puncture on curve");

    // Two curves in the same class crossing twice.
    auto bump = PolyCurve::validate({{0, r(1, 4)}, {r(1, 4), r(1, 4)}, {r(1, 4), r(3, 4)}, {r(1, 2), r(3, 4)},
                                     {r(1, 2), r(1, 4)}},
                                    {1, 0});
    auto half = straight_loop({0, r(1, 2)}, 1, 0);
    CHECK_FALSE(minimal_position_rel(half, bump, PunctureSet({{r(3, 8), r(5, 8)}})));
    CHECK(minimal_position_rel(half, bump, PunctureSet({{r(3, 8), r(5, 8)}, {r(3, 4), r(3, 8)}})));
}

TEST_CASE("fine distance") {
    auto one = PunctureSet({{0, 0}});
    auto h = straight_loop({r(1, 7), r(1, 3)}, 1, 0);
    auto v = straight_loop({r(2, 9), r(1, 5)}, 0, 1);
    auto d = fine_distance(h, v, one);
    CHECK(d.lo == 1);
    CHECK(*d.hi == 1);
    auto s = straight_loop({r(2, 9), r(1, 5)}, 2, 5);
    auto d3 = fine_distance(h, s, one);
    CHECK(d3.collapsed());
    CHECK(d3.lo == 3);
    auto d3b = fine_distance(h, s, PunctureSet({{r(1, 2), r(1, 2)}}));
    CHECK(d3b.collapsed());
    CHECK(d3b.lo == 3);

    try {
        fine_distance(straight_loop({0, r(1, 10)}, 1, 0), wiggle(), one);
        FAIL("expected a bigon");
    } catch (const Error& e) {
        CHECK(e.code() == "not in minimal position rel P");
    }
}

TEST_CASE("fine distance does not depend on the puncture set") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(1, 96);
    std::vector<std::pair<PolyCurve, PolyCurve>> pairs{
        {straight_loop({r(1, 7), r(1, 3)}, 1, 0), straight_loop({r(2, 9), r(1, 5)}, 1, 3)},
        {straight_loop({r(1, 7), r(1, 3)}, 2, 1), straight_loop({r(2, 9), r(1, 5)}, 1, 3)},
        {straight_loop({r(1, 7), r(1, 3)}, 0, 1), straight_loop({r(2, 9), r(1, 5)}, 3, 2)},
    };
    for (const auto& [a, b] : pairs) {
        std::optional<std::int64_t> value;
        int samples = 0;
        while (samples < 8) {
            std::vector<Vec2> pts;
            int size = 1 + samples % 3;
            for (int i = 0; i < size; ++i) pts.push_back({r(num(rng), 97), r(num(rng), 97)});
            try {
                auto d = fine_distance(a, b, PunctureSet(pts));
                REQUIRE(d.collapsed());
                if (value) CHECK(d.lo == *value);
                value = d.lo;
                ++samples;
            } catch (const Error& e) {
                REQUIRE((e.code() == "puncture on curve" || e.code() == "duplicate puncture"));
            }
        }
    }
}
