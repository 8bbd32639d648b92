#include "curvelab/tricurves.hpp"

#include "doctest.h"

#include <functional>
#include <random>

using namespace curvelab;
using namespace curvelab::tri;
using farey::Slope;

namespace {

TriPtr torus_with(std::initializer_list<std::pair<Rational, Rational>> xs) {
    std::vector<Vec2> v;
    for (const auto& [x, y] : xs) v.push_back({x, y});
    return make_triangulation(PunctureSet(v));
}

std::vector<Slope> slopes_up_to(std::int64_t cap) {
    std::vector<Slope> out;
    farey::CapGraph g(cap);
    for (std::size_t i = 0; i < g.size(); ++i) out.emplace_back(g.slope_at(i).first, g.slope_at(i).second);
    return out;
}

NormalCurve polygon_curve(const TriPtr& T, std::vector<Vec2> vs, Vec2 disp) {
    return NormalCurve::normalize(T, trace_polygon(*T, vs, disp));
}

// All connected normal curves with weight sum <= max_norm, by brute force.
std::vector<NormalCurve> enumerate_curves(const TriPtr& T, std::int64_t max_norm) {
    std::vector<NormalCurve> out;
    std::vector<std::int64_t> w(T->num_edges(), 0);
    std::function<void(std::size_t, std::int64_t)> rec = [&](std::size_t e, std::int64_t left) {
        if (e == w.size()) {
            try {
                out.push_back(NormalCurve::from_weights(T, w));
            } catch (const Error&) {
            }
            return;
        }
        for (std::int64_t x = 0; x <= left; ++x) {
            w[e] = x;
            rec(e + 1, left - x);
        }
        w[e] = 0;
    };
    rec(0, max_norm);
    return out;
}

}  // namespace

TEST_CASE("straight loops and homology") {
    auto T = torus_with({{0, 0}});
    auto c = straight_curve(T, Slope(1, 0), 0);
    CHECK(c.homology() == Homology{1, 0});
    CHECK(c.straight_strip() == std::size_t{0});
    auto horizontal = polygon_curve(T, {{0, Rational(1, 3)}}, {1, 0});
    CHECK(horizontal == c);
    for (const auto& s : slopes_up_to(5)) {
        auto d = straight_curve(T, s, 0);
        CHECK(*d.slope() == s);
        CHECK(NormalCurve::parse(T, d.serialize()) == d);
    }
}

TEST_CASE("normalize rejects inessential input") {
    auto T = torus_with({{0, 0}, {Rational(1, 2), Rational(1, 2)}});
    // Small square around the puncture (1/2, 1/2).
    std::vector<Vec2> around{{Rational(3, 8), Rational(3, 8)}, {Rational(5, 8), Rational(3, 8)},
                             {Rational(5, 8), Rational(5, 8)}, {Rational(3, 8), Rational(5, 8)}};
    try {
        polygon_curve(T, around, {0, 0});
        FAIL("expected inessential");
    } catch (const Error& e) {
        CHECK(e.code() == "inessential");
    }
    // A contractible wiggle crossing edges back and forth.
    std::vector<Vec2> wiggle{{Rational(1, 10), Rational(1, 5)}, {Rational(9, 10), Rational(1, 5)},
                             {Rational(9, 10), Rational(3, 10)}, {Rational(1, 10), Rational(3, 10)}};
    CHECK_THROWS_AS(polygon_curve(T, wiggle, {0, 0}), Error);
    CHECK_THROWS_AS(NormalCurve::from_weights(T, std::vector<std::int64_t>(6, 0)), Error);
    // Backtracking tokens cancel.
    auto c = straight_curve(T, Slope(0, 1), 0);
    std::vector<Token> seq = c.crossings();
    seq.insert(seq.begin() + 1, {reverse_token(seq[0]), seq[0]});
    CHECK(NormalCurve::normalize(T, seq) == c);
}

TEST_CASE("crossing-sequence intersection matches |det| on straight loops") {
    std::vector<TriPtr> tris{
        torus_with({{0, 0}}),
        torus_with({{0, 0}, {Rational(1, 2), Rational(1, 2)}}),
        torus_with({{Rational(1, 7), Rational(2, 7)}, {Rational(3, 5), Rational(1, 3)}, {Rational(5, 6), Rational(4, 5)}}),
    };
    for (const auto& T : tris) {
        std::vector<NormalCurve> curves;
        for (const auto& s : slopes_up_to(3))
            for (auto& c : straight_curves(T, s)) curves.push_back(std::move(c));
        for (const auto& a : curves)
            for (const auto& b : curves) {
                std::int64_t expect = to_i64(farey::intersection_number(*a.slope(), *b.slope()));
                REQUIRE(crossing_intersection(a, b) == expect);
                CHECK(geometric_intersection(a, b) == expect);
            }
    }
}

TEST_CASE("realize and retrace round trip") {
    auto T = torus_with({{0, 0}, {Rational(1, 3), Rational(1, 4)}, {Rational(2, 3), Rational(3, 5)}});
    auto curves = enumerate_curves(T, 8);
    REQUIRE(curves.size() > 20);
    for (const auto& c : curves) {
        auto r = realize(c);
        CHECK(NormalCurve::normalize(T, trace_polygon(*T, r.vertices, r.displacement)) == c);
    }
}

TEST_CASE("nonseparating test") {
    auto T = torus_with({{0, 0}, {Rational(1, 2), Rational(1, 2)}, {Rational(3, 4), Rational(1, 2)}});
    CHECK(is_nonseparating(straight_curve(T, Slope(1, 0), 0)));
    // A loop around the two punctures at height 1/2 separates them from (0,0).
    std::vector<Vec2> box{{Rational(3, 8), Rational(3, 8)}, {Rational(7, 8), Rational(3, 8)},
                          {Rational(7, 8), Rational(5, 8)}, {Rational(3, 8), Rational(5, 8)}};
    auto sep = polygon_curve(T, box, {0, 0});
    CHECK(sep.homology().zero());
    CHECK_FALSE(is_nonseparating(sep));
    CHECK_THROWS_AS(adjacent(sep, straight_curve(T, Slope(1, 0), 0)), Error);
}

TEST_CASE("adjacency") {
    auto T = torus_with({{0, 0}});
    auto h = straight_curve(T, Slope(1, 0), 0), v = straight_curve(T, Slope(0, 1), 0);
    CHECK(adjacent(h, v));
    CHECK_FALSE(adjacent(h, h));
    // (1,0) and (1,2) meet twice.
    auto twice = straight_curve(T, Slope(1, 2), 0);
    CHECK(geometric_intersection(h, twice) == 2);
    CHECK_FALSE(adjacent(h, twice));
    CHECK(geometric_intersection(straight_curve(T, Slope(2, 1), 0), straight_curve(T, Slope(5, 3), 0)) == 1);
}

TEST_CASE("distance brackets") {
    auto T = torus_with({{0, 0}});
    auto a = straight_curve(T, Slope(1, 0), 0);
    auto r0 = distance_bracket(a, a);
    CHECK(r0.lo == 0);
    CHECK(*r0.hi == 0);
    auto r = distance_bracket(a, straight_curve(T, Slope(2, 5), 0));
    CHECK(r.lo == 3);
    CHECK(*r.hi == 3);
    REQUIRE(r.path.size() == 4);
    for (std::size_t i = 0; i + 1 < r.path.size(); ++i) CHECK(adjacent(r.path[i], r.path[i + 1]));

    // Same pair through the pool search only.
    DistanceBudget plain;
    plain.use_straight_paths = false;
    plain.slope_cap = 5;
    auto s = distance_bracket(a, straight_curve(T, Slope(2, 5), 0), plain);
    CHECK(s.collapsed());
    CHECK(*s.hi == 3);
}

TEST_CASE("two-puncture pair meeting twice has a common neighbour") {
    auto T = torus_with({{0, 0}, {Rational(1, 2), Rational(1, 3)}});
    auto curves = enumerate_curves(T, 10);
    bool found = false;
    for (const auto& a : curves) {
        if (!is_nonseparating(a) || a.straight_strip()) continue;
        for (const auto& b : curves) {
            if (!is_nonseparating(b) || geometric_intersection(a, b) != 2) continue;
            auto r = distance_bracket(a, b);
            CHECK(r.lo == 2);
            REQUIRE(r.hi);
            CHECK(r.lo <= *r.hi);
            if (r.collapsed()) {
                found = true;
                REQUIRE(r.path.size() == 3);
                CHECK(adjacent(r.path[0], r.path[1]));
                CHECK(adjacent(r.path[1], r.path[2]));
            }
        }
        if (found) break;
    }
    CHECK(found);
}

TEST_CASE("intersection is symmetric and zero on equal classes") {
    auto T = torus_with({{0, 0}, {Rational(1, 2), Rational(1, 3)}});
    auto curves = enumerate_curves(T, 8);
    REQUIRE(curves.size() > 10);
    for (const auto& a : curves)
        for (const auto& b : curves) {
            auto ab = crossing_intersection(a, b);
            CHECK(ab == crossing_intersection(b, a));
            if (a == b) CHECK(ab == 0);
            // Forgetting punctures cannot increase intersection below |det|.
            if (is_nonseparating(a) && is_nonseparating(b))
                CHECK(ab >= to_i64(farey::intersection_number(*a.slope(), *b.slope())));
        }
}

TEST_CASE("forgetting punctures") {
    auto P = PunctureSet({{0, 0}, {Rational(1, 2), Rational(1, 2)}, {Rational(3, 4), Rational(1, 2)}});
    auto T = make_triangulation(P);
    auto c = straight_curve(T, Slope(1, 0), 1);
    CHECK(forget_to_slope(c) == Slope(1, 0));
    CHECK(forget_punctures(c, T) == c);

    auto one = make_triangulation(PunctureSet({{0, 0}}));
    CHECK(forget_punctures(c, one) == straight_curve(one, Slope(1, 0), 0));

    std::vector<Vec2> box{{Rational(3, 8), Rational(3, 8)}, {Rational(7, 8), Rational(3, 8)},
                          {Rational(7, 8), Rational(5, 8)}, {Rational(3, 8), Rational(5, 8)}};
    auto sep = polygon_curve(T, box, {0, 0});
    CHECK_THROWS_AS(forget_to_slope(sep), Error);
    // Dropping the outside puncture keeps the loop essential.
    auto inner = make_triangulation(PunctureSet({{Rational(1, 2), Rational(1, 2)}, {Rational(3, 4), Rational(1, 2)}}));
    auto kept = forget_punctures(sep, inner);
    CHECK(kept.homology().zero());
    // Dropping an enclosed puncture leaves a peripheral loop.
    auto outer = make_triangulation(PunctureSet({{0, 0}, {Rational(1, 2), Rational(1, 2)}}));
    try {
        forget_punctures(sep, outer);
        FAIL("expected the loop to die");
    } catch (const Error& e) {
        CHECK(e.code() == "dies under forgetting");
    }
}

TEST_CASE("forgetting is 1-Lipschitz on brackets") {
    auto T = torus_with({{0, 0}, {Rational(1, 2), Rational(1, 3)}});
    auto one = torus_with({{0, 0}});
    auto curves = enumerate_curves(T, 8);
    std::vector<NormalCurve> ns;
    for (const auto& c : curves)
        if (is_nonseparating(c)) ns.push_back(c);
    for (std::size_t i = 0; i < ns.size(); i += 3)
        for (std::size_t j = 0; j < ns.size(); j += 5) {
            auto big = distance_bracket(ns[i], ns[j]);
            auto small = distance_bracket(forget_punctures(ns[i], one), forget_punctures(ns[j], one));
            REQUIRE(big.hi);
            CHECK(small.lo <= *big.hi);
        }
}

TEST_CASE("crossing files") {
    auto seqs = parse_crossing_file("# comment\n1 -2 3\n\n-4 5\n");
    REQUIRE(seqs.size() == 2);
    CHECK(seqs[0] == std::vector<Token>{1, -2, 3});
    CHECK_THROWS_AS(parse_crossing_file("1 0 2"), Error);
}
