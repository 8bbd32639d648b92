#include "curvelab/mapclass.hpp"

#include "doctest.h"

#include <functional>

using namespace curvelab;
using namespace curvelab::mapclass;
using farey::Slope;
using farey::ToralMatrix;
using tri::NormalCurve;
using tri::TriPtr;

namespace {

const ToralMatrix cat{2, 1, 1, 1};

TriPtr torus_with(std::vector<Vec2> v) { return tri::make_triangulation(tri::PunctureSet(std::move(v))); }

// Period-2 points of the cat map: multiples of (3/5, 1/5).
TriPtr fix_cat_squared() {
    std::vector<Vec2> v;
    for (int k = 0; k < 5; ++k) v.push_back({Rational(3 * k, 5), Rational(k, 5)});
    return torus_with(v);
}

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

std::vector<ToralMatrix> small_matrices() {
    std::vector<ToralMatrix> out;
    for (int a = -3; a <= 3; ++a)
        for (int b = -3; b <= 3; ++b)
            for (int c = -3; c <= 3; ++c)
                for (int d = -3; d <= 3; ++d)
                    if (a * d - b * c == 1) out.push_back({a, b, c, d});
    return out;
}

}  // namespace

TEST_CASE("identity has an empty word") {
    auto T = fix_cat_squared();
    CHECK(MappingClass::identity(T).word().empty());
    auto m = MappingClass::from_matrix(ToralMatrix::identity(), T);
    CHECK(m.word().empty());
    CHECK(m.puncture_perm() == std::vector<std::int32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("straight curves map to straight curves of the image slope") {
    auto T = torus_with({{0, 0}});
    auto m = MappingClass::from_matrix(cat, T);
    CHECK(act(m, tri::straight_curve(T, Slope(1, 0), 0)).homology() == tri::Homology{2, 1});
    for (const auto& A : small_matrices()) {
        auto mA = MappingClass::from_matrix(A, T);
        for (auto s : {Slope(1, 0), Slope(0, 1), Slope(1, 1), Slope(2, -1)}) {
            auto img = act(mA, tri::straight_curve(T, s, 0));
            REQUIRE(img.slope());
            CHECK(*img.slope() == farey::matrix_act(A, s));
            CHECK(img.straight_strip());
        }
    }
}

TEST_CASE("non-invariant puncture sets are rejected") {
    auto T = torus_with({{0, 0}, {Rational(1, 2), Rational(1, 3)}});
    try {
        MappingClass::from_matrix(cat, T);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == "not f-invariant");
    }
}

TEST_CASE("inverse undoes the action") {
    auto T = fix_cat_squared();
    auto m = MappingClass::from_matrix(cat, T);
    auto inv = m.inverse();
    auto direct = MappingClass::from_matrix(cat.inverse(), T);
    for (const auto& c : enumerate_curves(T, 6)) {
        CHECK(act(m, act(inv, c)) == c);
        CHECK(act(inv, act(m, c)) == c);
        CHECK(act(inv, c) == act(direct, c));
    }
}

TEST_CASE("power law and composition") {
    auto T = fix_cat_squared();
    auto m = MappingClass::from_matrix(cat, T);
    auto m3 = MappingClass::from_matrix(cat.pow(3), T);
    auto shear = MappingClass::from_matrix({1, 1, 0, 1}, torus_with({{0, 0}, {Rational(1, 2), 0}}));
    for (const auto& c : enumerate_curves(T, 5)) CHECK(act_power(m, c, 3) == act(m3, c));
    // The shear fixes both punctures; its square is the shear by 2.
    auto shear2 = MappingClass::from_matrix({1, 2, 0, 1}, shear.triangulation());
    for (const auto& c : enumerate_curves(shear.triangulation(), 6)) CHECK(act_power(shear, c, 2) == act(shear2, c));
}

TEST_CASE("action preserves intersection numbers") {
    auto T = fix_cat_squared();
    auto m = MappingClass::from_matrix(cat, T);
    auto curves = enumerate_curves(T, 7);
    REQUIRE(curves.size() > 10);
    for (std::size_t i = 0; i < curves.size(); i += 2)
        for (std::size_t j = 0; j < curves.size(); j += 3)
            CHECK(tri::crossing_intersection(act(m, curves[i]), act(m, curves[j])) ==
                  tri::crossing_intersection(curves[i], curves[j]));
}

TEST_CASE("forgetting commutes with the action") {
    auto T = fix_cat_squared();
    auto one = torus_with({{0, 0}});
    auto m = MappingClass::from_matrix(cat, T);
    auto m1 = MappingClass::from_matrix(cat, one);
    for (const auto& c : enumerate_curves(T, 6)) {
        if (!tri::is_nonseparating(c)) continue;
        CHECK(tri::forget_punctures(act(m, c), one) == act(m1, tri::forget_punctures(c, one)));
    }
}

TEST_CASE("flip words round trip through text") {
    auto T = fix_cat_squared();
    auto m = MappingClass::from_matrix(cat, T);
    auto back = MappingClass::parse(T, m.serialize());
    CHECK(back.word() == m.word());
    CHECK(back.puncture_perm() == m.puncture_perm());
    CHECK(*back.provenance() == cat);
    CHECK_THROWS_AS(MappingClass::parse(torus_with({{0, 0}}), m.serialize()), Error);
}

TEST_CASE("translation length brackets") {
    auto params = hyp::derive_constants(1, 2);
    auto one = torus_with({{0, 0}});
    auto r1 = tl_bracket(MappingClass::from_matrix(cat, one), tri::straight_curve(one, Slope(1, 0), 0), 6, params);
    REQUIRE(r1.bracket.exact);
    CHECK(*r1.bracket.exact == 1);

    auto T = fix_cat_squared();
    auto r = tl_bracket(MappingClass::from_matrix(cat, T), tri::straight_curve(T, Slope(1, 0), 2), 6, params);
    REQUIRE(r.bracket.width());
    CHECK(*r.bracket.width() <= Rational(1, 4));
    CHECK(r.bracket.well_formed());
    CHECK(r.bracket.lower <= 1);
    CHECK(*r.bracket.upper >= 1);
}

TEST_CASE("axis search") {
    auto T = fix_cat_squared();
    auto found = axis_search(MappingClass::from_matrix(cat, T), 4, 4);
    REQUIRE(found.certificate);
    CHECK(found.certificate->tl == 1);
    auto& g = found.certificate->geodesic;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) CHECK(tri::adjacent(g[i], g[i + 1]));

    auto one = torus_with({{0, 0}});
    CHECK(axis_search(MappingClass::identity(one), 3, 3).reason == "elliptic");
    auto shear = axis_search(MappingClass::from_matrix({1, 1, 0, 1}, one), 3, 3);
    CHECK_FALSE(shear.certificate);
    CHECK(shear.reason == "no positive displacement growth");
}
