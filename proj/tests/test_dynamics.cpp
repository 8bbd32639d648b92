#include "curvelab/dynamics.hpp"

#include "doctest.h"
#include "json.hpp"

#include <random>

using namespace curvelab;
using namespace curvelab::dyn;
using farey::ToralMatrix;

namespace {

const ToralMatrix cat{2, 1, 1, 1};

// Brute force: all (i/N, j/N) fixed by A^n, N = |det(A^n - I)|.
std::size_t brute_fixed_count(const ToralMatrix& A, std::int64_t n) {
    ToralMatrix B = A.pow(n);
    std::int64_t a = to_i64(B.a), b = to_i64(B.b), c = to_i64(B.c), d = to_i64(B.d);
    std::int64_t N = std::abs((a - 1) * (d - 1) - b * c);
    std::size_t count = 0;
    for (std::int64_t i = 0; i < N; ++i)
        for (std::int64_t j = 0; j < N; ++j) {
            std::int64_t x = ((a * i + b * j - i) % N + N) % N, y = ((c * i + d * j - j) % N + N) % N;
            if (x == 0 && y == 0) ++count;
        }
    return count;
}

}  // namespace

TEST_CASE("Anosov maps need |trace| > 2") {
    CHECK_NOTHROW(AnosovMap{cat});
    CHECK_NOTHROW(AnosovMap{ToralMatrix{-3, 1, -1, 0}});
    for (auto A : {ToralMatrix{1, 1, 0, 1}, ToralMatrix{}, ToralMatrix{0, -1, 1, 0}, ToralMatrix{-1, 0, 0, -1}}) {
        try {
            AnosovMap m(A);
            FAIL("accepted " << A.str());
        } catch (const Error& e) {
            CHECK(e.code() == "not anosov");
        }
    }
}

TEST_CASE("Smith normal form") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-40, 40);
    for (int it = 0; it < 300; ++it) {
        std::array<Integer, 4> M{d(rng), d(rng), d(rng), d(rng)};
        if (M[0] * M[3] - M[1] * M[2] == 0) continue;
        auto sf = smith_normal_form(M);
        auto mul = [](const std::array<Integer, 4>& x, const std::array<Integer, 4>& y) {
            return std::array<Integer, 4>{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
                                          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
        };
        auto S = mul(mul(sf.U, M), sf.V);
        CHECK(S == std::array<Integer, 4>{sf.d1, 0, 0, sf.d2});
        CHECK(abs(sf.U[0] * sf.U[3] - sf.U[1] * sf.U[2]) == 1);
        CHECK(abs(sf.V[0] * sf.V[3] - sf.V[1] * sf.V[2]) == 1);
        CHECK(sf.d1 > 0);
        CHECK(sf.d2 % sf.d1 == 0);
    }
}

TEST_CASE("periodic points") {
    AnosovMap A(cat);
    CHECK(periodic_points(A, 1) == std::vector<Vec2>{{0, 0}});
    auto two = periodic_points(A, 2);
    CHECK(two.size() == 5);
    for (const auto& p : two) {
        CHECK(5 % denominator(p.x) == 0);
        CHECK(5 % denominator(p.y) == 0);
        CHECK(reduce_mod1(cat.pow(2).apply(p)) == p);
    }
    for (auto M : {cat, ToralMatrix{3, 2, 1, 1}})
        for (std::int64_t n = 1; n <= 6; ++n) {
            auto pts = periodic_points(AnosovMap(M), n);
            ToralMatrix B = M.pow(n);
            Integer det = abs((B.a - 1) * (B.d - 1) - B.b * B.c);
            CHECK(Integer(pts.size()) == det);
            CHECK(pts.size() == brute_fixed_count(M, n));
        }
}

TEST_CASE("invariant sets") {
    AnosovMap A(cat);
    CHECK(invariant_set(A, {1}).size() == 1);
    CHECK(invariant_set(A, {2}).size() == 5);
    CHECK(invariant_set(A, {1, 2}) == invariant_set(A, {2}));
    CHECK(invariant_set(A, {1, 2, 3}).size() == 5 + 16 - 1);
}

TEST_CASE("approximation sweep for the cat map") {
    auto params = hyp::derive_constants(1, 2);
    SweepBudget budget;
    std::vector<SweepInput> in{{{1}, {}}, {{2}, {}}};
    auto r = approximation_sweep(AnosovMap(cat), in, budget, params);
    REQUIRE(r.reference.bracket.exact);
    Rational ref = *r.reference.bracket.exact;
    CHECK(ref == 1);
    REQUIRE(r.entries.size() == 2);
    REQUIRE(r.entries[0].bracket.exact);
    CHECK(*r.entries[0].bracket.exact == ref);
    CHECK(r.entries[1].bracket.lower <= ref);
    CHECK(*r.entries[1].bracket.upper >= ref);
    CHECK(*r.entries[1].bracket.width() <= Rational(1, 4));
    CHECK(r.chain_violations.empty());
    CHECK(r.all_pass());

    auto json = nlohmann::json::parse(sweep_report_json(r));
    CHECK(json["schema"] == "curvelab-sweep/1");
    CHECK(json["entries"][1]["P_size"] == 5);
    CHECK(json["entries"][0]["verdict"] == "PASS");
    CHECK(sweep_report_json(r) == sweep_report_json(approximation_sweep(AnosovMap(cat), in, budget, params)));
    auto csv = sweep_report_csv(r);
    CHECK(csv.rfind("matrix,P_size,lower,upper,exact,period_m,verdict\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("sweep budgets and preconditions") {
    auto params = hyp::derive_constants(1, 2);
    SweepBudget tiny;
    tiny.k_max = 0;
    auto r = approximation_sweep(AnosovMap(cat), {{{1}, {}}}, tiny, params);
    CHECK(r.entries[0].verdict == Verdict::inconclusive);
    CHECK_FALSE(r.all_pass());

    SweepInput bad{{}, tri::PunctureSet({{0, 0}, {Rational(1, 2), Rational(1, 3)}})};
    try {
        approximation_sweep(AnosovMap(cat), {bad}, SweepBudget{}, params);
        FAIL("expected rejection");
    } catch (const Error& e) {
        CHECK(e.code() == "not f-invariant");
    }
}
