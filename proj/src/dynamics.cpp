#include "curvelab/dynamics.hpp"

#include "json.hpp"

#include <algorithm>
#include <future>
#include <sstream>

namespace curvelab::dyn {

using farey::ToralMatrix;

AnosovMap::AnosovMap(const ToralMatrix& A) : A_(A) {
    if (A.det() != 1) throw Error("not anosov", "determinant must be 1");
    Integer tr = A.a + A.d;
    if (abs(tr) <= 2) throw Error("not anosov", "|trace| must exceed 2 for " + A.str());
}

namespace {

using M2 = std::array<Integer, 4>;

void swap_rows(M2& m) {
    std::swap(m[0], m[2]);
    std::swap(m[1], m[3]);
}
void swap_cols(M2& m) {
    std::swap(m[0], m[1]);
    std::swap(m[2], m[3]);
}
// row dst += q * row src
void add_row(M2& m, int dst, int src, const Integer& q) {
    m[2 * dst] += q * m[2 * src];
    m[2 * dst + 1] += q * m[2 * src + 1];
}
void add_col(M2& m, int dst, int src, const Integer& q) {
    m[dst] += q * m[src];
    m[2 + dst] += q * m[2 + src];
}

}  // namespace

SmithForm smith_normal_form(const M2& M) {
    M2 S = M, U{1, 0, 0, 1}, V{1, 0, 0, 1};
    while (S[0] != 0 || S[1] != 0 || S[2] != 0 || S[3] != 0) {
        int best = -1;
        for (int i = 0; i < 4; ++i)
            if (S[i] != 0 && (best < 0 || abs(S[i]) < abs(S[best]))) best = i;
        if (best >= 2) {
            swap_rows(S);
            swap_rows(U);
        }
        if (best % 2 == 1) {
            swap_cols(S);
            swap_cols(V);
        }
        if (S[2] != 0) {
            Integer q = S[2] / S[0];
            add_row(S, 1, 0, -q);
            add_row(U, 1, 0, -q);
            if (S[2] != 0) continue;
        }
        if (S[1] != 0) {
            Integer q = S[1] / S[0];
            add_col(S, 1, 0, -q);
            add_col(V, 1, 0, -q);
            if (S[1] != 0) continue;
        }
        if (S[3] % S[0] != 0) {
            add_row(S, 0, 1, 1);
            add_row(U, 0, 1, 1);
            continue;
        }
        break;
    }
    for (int r = 0; r < 2; ++r)
        if (S[3 * r] < 0) {
            S[3 * r] = -S[3 * r];
            U[2 * r] = -U[2 * r];
            U[2 * r + 1] = -U[2 * r + 1];
        }
    return {U, V, S[0], S[3]};
}

std::vector<Vec2> periodic_points(const AnosovMap& A, std::int64_t n) {
    if (n < 1) throw Error("invalid period", std::to_string(n));
    ToralMatrix B = A.matrix().pow(n);
    SmithForm sf = smith_normal_form({B.a - 1, B.b, B.c, B.d - 1});
    // U M V = S, so M x in Z^2 iff S (V^-1 x) in Z^2.
    std::vector<Vec2> out;
    for (Integer i = 0; i < sf.d1; ++i)
        for (Integer j = 0; j < sf.d2; ++j) {
            Rational y1(i, sf.d1), y2(j, sf.d2);
            out.push_back(reduce_mod1({sf.V[0] * y1 + sf.V[1] * y2, sf.V[2] * y1 + sf.V[3] * y2}));
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

tri::PunctureSet invariant_set(const AnosovMap& A, const std::vector<std::int64_t>& periods) {
    std::vector<Vec2> pts;
    for (auto n : periods)
        for (auto& p : periodic_points(A, n)) pts.push_back(p);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    tri::PunctureSet P(pts);
    for (const auto& p : P.points())
        if (!P.find(A.matrix().apply(p))) throw Error("internal", "periodic set is not invariant");
    return P;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::inconclusive: return "INCONCLUSIVE";
        case Verdict::fail: return "FAIL";
    }
    return "?";
}

bool SweepReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const SweepEntry& e) { return e.verdict == Verdict::pass; });
}

bool SweepReport::any_fail() const {
    return std::any_of(entries.begin(), entries.end(), [](const SweepEntry& e) { return e.verdict == Verdict::fail; });
}

namespace {

bool budget_error(const Error& e) { return e.code() == "overflow" || e.code() == "budget exceeded"; }

SweepEntry run_entry(const AnosovMap& A, const SweepInput& in, const SweepBudget& budget,
                     const hyp::HypParams& params, const std::optional<Rational>& ref) {
    SweepEntry e;
    e.periods = in.periods;
    e.punctures = in.points ? *in.points : invariant_set(A, in.periods);
    auto T = tri::make_triangulation(e.punctures);
    e.triangulation_hash = T->hash();
    auto m = mapclass::MappingClass::from_matrix(A.matrix(), T);
    e.flip_count = m.flip_count();
    try {
        auto res = mapclass::tl_bracket(m, tri::straight_curve(T, farey::Slope(1, 0), 0), budget.k_max, params,
                                        budget.distance);
        e.bracket = std::move(res.bracket);
        e.orbit = std::move(res.orbit);
    } catch (const Error& err) {
        if (!budget_error(err)) throw;
        e.reason = err.what();
    }
    try {
        auto ax = mapclass::axis_search(m, budget.axis_m_max, budget.axis_k_max, budget.distance);
        e.axis = ax.certificate;
        e.axis_reason = ax.reason;
    } catch (const Error& err) {
        if (!budget_error(err)) throw;
        e.axis_reason = err.what();
    }

    const auto& b = e.bracket;
    if (!ref) {
        e.verdict = Verdict::inconclusive;
        if (e.reason.empty()) e.reason = "reference translation length not certified";
    } else if (!b.well_formed() || b.lower > *ref || (b.upper && *b.upper < *ref)) {
        e.verdict = Verdict::fail;
        e.reason = "bracket excludes the Farey translation length";
    } else if (!b.upper) {
        e.verdict = Verdict::inconclusive;
        if (e.reason.empty()) e.reason = "no upper bound";
    } else if (*b.width() > budget.max_width) {
        e.verdict = Verdict::inconclusive;
        e.reason = "width " + format_rational(*b.width()) + " exceeds " + format_rational(budget.max_width);
    } else {
        e.verdict = Verdict::pass;
    }
    return e;
}

}  // namespace

SweepReport approximation_sweep(const AnosovMap& A, const std::vector<SweepInput>& inputs, const SweepBudget& budget,
                                const hyp::HypParams& params) {
    SweepReport r;
    r.matrix = A.matrix();
    r.params = params;
    r.budget = budget;
    r.reference = farey::farey_tl(A.matrix(), budget.farey_m_max, budget.farey_k_max);
    std::optional<Rational> ref = r.reference.bracket.exact;

    std::vector<std::future<SweepEntry>> jobs;
    for (const auto& in : inputs)
        jobs.push_back(std::async(std::launch::async, [&A, &in, &budget, &params, &ref] {
            return run_entry(A, in, budget, params, ref);
        }));
    for (auto& j : jobs) r.entries.push_back(j.get());

    for (std::size_t i = 0; i < r.entries.size(); ++i)
        for (std::size_t j = 0; j < r.entries.size(); ++j) {
            if (i == j || !r.entries[j].punctures.contains(r.entries[i].punctures)) continue;
            const auto& up = r.entries[j].bracket.upper;
            if (up && r.entries[i].bracket.lower > *up) {
                r.chain_violations.emplace_back(i, j);
                for (auto k : {i, j}) {
                    r.entries[k].verdict = Verdict::fail;
                    r.entries[k].reason = "monotonicity chain violated";
                }
            }
        }
    return r;
}

namespace {

using nlohmann::ordered_json;

ordered_json rat(const Rational& q) { return format_rational(q); }

ordered_json opt_rat(const std::optional<Rational>& q) { return q ? rat(*q) : ordered_json(nullptr); }

ordered_json bracket_json(const hyp::TLBracket& b) {
    ordered_json j;
    j["lower"] = rat(b.lower);
    j["upper"] = opt_rat(b.upper);
    j["exact"] = opt_rat(b.exact);
    j["provenance"] = ordered_json::array();
    for (const auto& p : b.provenance)
        j["provenance"].push_back({{"kind", p.kind}, {"value", rat(p.value)}, {"detail", p.detail}});
    return j;
}

std::optional<std::int64_t> period_of(const SweepEntry& e) {
    if (e.axis) return e.axis->period;
    return std::nullopt;
}

}  // namespace

std::string sweep_report_json(const SweepReport& r, const std::string& timestamp) {
    ordered_json j;
    j["schema"] = "curvelab-sweep/1";
    if (!timestamp.empty()) j["timestamp"] = timestamp;
    j["matrix"] = r.matrix.str();
    j["params"] = {{"formula", r.params.formula}, {"delta", rat(r.params.delta)}, {"K", rat(r.params.K)},
                   {"L", rat(r.params.L)},        {"N", r.params.N},             {"Kprime", rat(r.params.Kprime)},
                   {"M", rat(r.params.M)}};
    j["budget"] = {{"k_max", r.budget.k_max},
                   {"farey_m_max", r.budget.farey_m_max},
                   {"farey_k_max", r.budget.farey_k_max},
                   {"axis_m_max", r.budget.axis_m_max},
                   {"axis_k_max", r.budget.axis_k_max},
                   {"max_width", rat(r.budget.max_width)},
                   {"slope_cap", r.budget.distance.slope_cap},
                   {"max_pool", r.budget.distance.max_pool}};
    ordered_json ref;
    ref["status"] = r.reference.status;
    ref["bracket"] = bracket_json(r.reference.bracket);
    if (const auto& c = r.reference.certificate) {
        ref["certificate"] = {{"base", c->base.str()},
                              {"period", c->period},
                              {"displacement", c->displacement},
                              {"tl", rat(c->tl)},
                              {"verified_multiples", c->verified_multiples}};
    }
    j["reference"] = ref;
    j["entries"] = ordered_json::array();
    for (const auto& e : r.entries) {
        ordered_json x;
        x["periods"] = e.periods;
        x["P_size"] = e.punctures.size();
        x["punctures"] = ordered_json::array();
        for (const auto& p : e.punctures.points()) x["punctures"].push_back({rat(p.x), rat(p.y)});
        x["triangulation"] = e.triangulation_hash;
        x["flip_count"] = e.flip_count;
        x["bracket"] = bracket_json(e.bracket);
        x["orbit"] = ordered_json::array();
        for (const auto& o : e.orbit)
            x["orbit"].push_back({{"k", o.k}, {"lo", o.lo}, {"hi", o.hi ? ordered_json(*o.hi) : ordered_json(nullptr)}});
        if (e.axis) {
            x["axis"] = {{"base", e.axis->base.serialize()},
                         {"period", e.axis->period},
                         {"displacement", e.axis->displacement},
                         {"tl", rat(e.axis->tl)},
                         {"verified_multiples", e.axis->verified_multiples}};
        } else {
            x["axis"] = {{"reason", e.axis_reason}};
        }
        x["verdict"] = to_string(e.verdict);
        x["reason"] = e.reason;
        j["entries"].push_back(x);
    }
    j["chain_violations"] = ordered_json::array();
    for (auto [a, b] : r.chain_violations) j["chain_violations"].push_back({a, b});
    return j.dump(2) + "\n";
}

std::string sweep_report_csv(const SweepReport& r) {
    std::ostringstream out;
    out << "matrix,P_size,lower,upper,exact,period_m,verdict\n";
    for (const auto& e : r.entries) {
        auto m = period_of(e);
        out << '"' << r.matrix.str() << "\"," << e.punctures.size() << "," << format_rational(e.bracket.lower) << ","
            << (e.bracket.upper ? format_rational(*e.bracket.upper) : "inf") << ","
            << (e.bracket.exact ? format_rational(*e.bracket.exact) : "") << "," << (m ? std::to_string(*m) : "")
            << "," << to_string(e.verdict) << "\n";
    }
    return out.str();
}

}  // namespace curvelab::dyn
