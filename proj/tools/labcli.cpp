// labcli: command-line front end for the curvelab library.
//
// Exit codes: 0 pass, 1 usage or input error, 2 inconclusive (budget),
// 3 precondition failed, 4 a check failed.

#include "curvelab/dynamics.hpp"
#include "curvelab/farey.hpp"
#include "curvelab/finecurves.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <set>
#include <thread>
#include <sstream>

using namespace curvelab;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kUsage = 1, kInconclusive = 2, kPrecondition = 3, kFailed = 4 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("io", "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("io", "cannot write " + path);
    out << text;
}

std::string fmt(const std::optional<Rational>& r) { return r ? format_rational(*r) : "inf"; }

std::string bracket_str(const hyp::TLBracket& b) { return "[" + format_rational(b.lower) + ", " + fmt(b.upper) + "]"; }

ordered_json params_json(const hyp::HypParams& p) {
    return {{"formula", p.formula}, {"delta", format_rational(p.delta)}, {"K", format_rational(p.K)},
            {"L", format_rational(p.L)}, {"N", p.N}, {"Kprime", format_rational(p.Kprime)},
            {"M", format_rational(p.M)}};
}

// ---------------------------------------------------------------- farey

int cmd_farey_dist(const std::string& from, const std::string& to) {
    std::cout << farey::farey_distance(farey::Slope::parse(from), farey::Slope::parse(to)) << "\n";
    return kPass;
}

int cmd_farey_geodesic(const std::string& from, const std::string& to) {
    auto path = farey::farey_geodesic(farey::Slope::parse(from), farey::Slope::parse(to));
    for (std::size_t i = 0; i < path.size(); ++i) std::cout << (i ? " " : "") << path[i].str();
    std::cout << "\n";
    return kPass;
}

int cmd_farey_tl(const std::string& matrix, std::int64_t m_max, std::int64_t k_max, bool as_json) {
    auto A = farey::ToralMatrix::parse(matrix);
    auto r = farey::farey_tl(A, m_max, k_max);
    if (as_json) {
        ordered_json j;
        j["matrix"] = A.str();
        j["status"] = r.status;
        j["params"] = params_json(farey::farey_default_params());
        j["budget"] = {{"m_max", m_max}, {"k_max", k_max}};
        j["lower"] = format_rational(r.bracket.lower);
        j["upper"] = r.bracket.upper ? ordered_json(format_rational(*r.bracket.upper)) : ordered_json(nullptr);
        j["exact"] = r.bracket.exact ? ordered_json(format_rational(*r.bracket.exact)) : ordered_json(nullptr);
        if (r.certificate) {
            std::vector<std::string> geo;
            for (const auto& s : r.certificate->geodesic) geo.push_back(s.str());
            j["certificate"] = {{"base", r.certificate->base.str()},
                                {"m", r.certificate->period},
                                {"D", r.certificate->displacement},
                                {"tl", format_rational(r.certificate->tl)},
                                {"geodesic", geo},
                                {"verified_multiples", r.certificate->verified_multiples}};
        }
        std::cout << j.dump(2) << "\n";
    } else if (r.certificate) {
        const auto& c = *r.certificate;
        std::cout << "certificate m=" << c.period << " D=" << c.displacement << " tl=" << format_rational(c.tl)
                  << " base=" << c.base.str() << "\n";
        std::cout << "geodesic";
        for (const auto& s : c.geodesic) std::cout << " " << s.str();
        std::cout << "\nverified multiples k <= " << c.verified_multiples << "\n";
    } else if (r.bracket.exact) {
        std::cout << r.status << "\n";
    } else {
        std::cout << r.status << "\nbracket " << bracket_str(r.bracket) << "\n";
    }
    return r.bracket.exact ? kPass : kInconclusive;
}

// ---------------------------------------------------------------- sweep

const std::set<std::string> kSweepKeys{"matrix",     "periods",    "puncture_sets", "k_max",   "farey_m_max",
                                       "farey_k_max", "axis_m_max", "axis_k_max",   "max_width", "slope_cap",
                                       "max_pool",   "delta",      "K",             "output",  "timestamp"};

Rational json_rational(const json& v, const std::string& key) {
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw Error("config", key + " must be an integer or a \"p/q\" string");
}

std::int64_t json_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) throw Error("config", key + " must be an integer");
    return v.get<std::int64_t>();
}

int cmd_sweep(const std::string& config_path) {
    json cfg;
    try {
        cfg = json::parse(read_file(config_path));
    } catch (const json::parse_error& e) {
        throw Error("config", e.what());
    }
    if (!cfg.is_object()) throw Error("config", "top level must be an object");
    for (const auto& [k, v] : cfg.items())
        if (!kSweepKeys.count(k)) throw Error("config", "unknown key '" + k + "'");
    for (const char* k : {"matrix", "output"})
        if (!cfg.contains(k) || !cfg[k].is_string()) throw Error("config", std::string(k) + " (string) is required");

    dyn::AnosovMap A(farey::ToralMatrix::parse(cfg["matrix"].get<std::string>()));
    dyn::SweepBudget budget;
    if (cfg.contains("k_max")) budget.k_max = json_int(cfg["k_max"], "k_max");
    if (cfg.contains("farey_m_max")) budget.farey_m_max = json_int(cfg["farey_m_max"], "farey_m_max");
    if (cfg.contains("farey_k_max")) budget.farey_k_max = json_int(cfg["farey_k_max"], "farey_k_max");
    if (cfg.contains("axis_m_max")) budget.axis_m_max = json_int(cfg["axis_m_max"], "axis_m_max");
    if (cfg.contains("axis_k_max")) budget.axis_k_max = json_int(cfg["axis_k_max"], "axis_k_max");
    if (cfg.contains("max_width")) budget.max_width = json_rational(cfg["max_width"], "max_width");
    if (cfg.contains("slope_cap")) budget.distance.slope_cap = json_int(cfg["slope_cap"], "slope_cap");
    if (cfg.contains("max_pool"))
        budget.distance.max_pool = static_cast<std::size_t>(json_int(cfg["max_pool"], "max_pool"));
    Rational delta = cfg.contains("delta") ? json_rational(cfg["delta"], "delta") : Rational(1);
    Rational K = cfg.contains("K") ? json_rational(cfg["K"], "K") : Rational(2);
    auto params = hyp::derive_constants(delta, K);

    std::vector<dyn::SweepInput> inputs;
    if (cfg.contains("periods")) {
        if (!cfg["periods"].is_array()) throw Error("config", "periods must be a list of lists");
        for (const auto& list : cfg["periods"]) {
            if (!list.is_array() || list.empty()) throw Error("config", "each period list must be non-empty");
            dyn::SweepInput in;
            for (const auto& n : list) {
                in.periods.push_back(json_int(n, "period"));
                if (in.periods.back() < 1) throw Error("config", "periods must be positive");
            }
            inputs.push_back(std::move(in));
        }
    }
    if (cfg.contains("puncture_sets")) {
        if (!cfg["puncture_sets"].is_array()) throw Error("config", "puncture_sets must be a list");
        for (const auto& set : cfg["puncture_sets"]) {
            std::vector<Vec2> pts;
            for (const auto& p : set) {
                if (!p.is_array() || p.size() != 2) throw Error("config", "points are [x, y] pairs");
                pts.push_back({json_rational(p[0], "x"), json_rational(p[1], "y")});
            }
            inputs.push_back({{}, tri::PunctureSet(pts)});
        }
    }
    if (inputs.empty()) throw Error("config", "no puncture sets requested");

    auto report = dyn::approximation_sweep(A, inputs, budget, params);
    std::string stamp;
    if (cfg.value("timestamp", false)) {
        auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        stamp = buf;
    }
    const std::string out = cfg["output"].get<std::string>();
    write_file(out + ".json", dyn::sweep_report_json(report, stamp));
    write_file(out + ".csv", dyn::sweep_report_csv(report));
    std::cout << "reference tl = " << fmt(report.reference.bracket.exact) << " (" << report.reference.status << ")\n";
    for (const auto& e : report.entries)
        std::cout << "|P| = " << e.punctures.size() << "  bracket " << bracket_str(e.bracket) << "  "
                  << dyn::to_string(e.verdict) << (e.reason.empty() ? "" : "  (" + e.reason + ")") << "\n";
    std::cout << "wrote " << out << ".json and " << out << ".csv\n";
    if (report.any_fail()) return kFailed;
    return report.all_pass() ? kPass : kInconclusive;
}

// ---------------------------------------------------------------- fine

int cmd_fine_dist(const std::string& alpha, const std::string& beta, const std::string& punctures) {
    auto a = fine::PolyCurve::parse(read_file(alpha));
    auto b = fine::PolyCurve::parse(read_file(beta));
    auto P = tri::PunctureSet::parse(read_file(punctures));
    if (auto g = fine::find_empty_bigon(a, b, P)) {
        std::cerr << "minimal position rel P: no\nempty bigon:";
        for (const auto& v : g->boundary) std::cerr << " (" << format_rational(v.x) << ", " << format_rational(v.y) << ")";
        std::cerr << "\n";
        return kPrecondition;
    }
    std::cout << "minimal position rel P: yes\n";
    auto d = fine::fine_distance(a, b, P);
    if (d.collapsed()) {
        std::cout << "d† = " << d.lo << "\n";
        return kPass;
    }
    std::cout << "d† in [" << d.lo << ", " << (d.hi ? std::to_string(*d.hi) : "inf") << "]\n";
    return kInconclusive;
}

// ---------------------------------------------------------------- verify

struct SuiteResult {
    std::string suite;
    std::int64_t checked = 0;
    std::optional<std::string> counterexample;
    bool inconclusive = false;
};

int report(const SuiteResult& r) {
    ordered_json j;
    j["suite"] = r.suite;
    j["status"] = r.counterexample ? "FAIL" : (r.inconclusive ? "INCONCLUSIVE" : "PASS");
    j["checked"] = r.checked;
    j["counterexample"] = r.counterexample ? ordered_json(*r.counterexample) : ordered_json(nullptr);
    std::cout << j.dump() << "\n";
    if (r.counterexample) return kFailed;
    return r.inconclusive ? kInconclusive : kPass;
}

// BFS distances from `source` over the cap-bounded graph, with the cap
// doubled until two successive caps agree on every slope within `cap`.
SuiteResult verify_farey_oracle(std::int64_t cap) {
    SuiteResult res;
    res.suite = "farey-oracle";
    farey::CapGraph small(cap);
    std::vector<std::unique_ptr<farey::CapGraph>> graphs;
    graphs.push_back(std::make_unique<farey::CapGraph>(2 * cap));
    const std::size_t n = small.size();
    std::vector<farey::Slope> slopes;
    for (std::size_t i = 0; i < n; ++i) slopes.emplace_back(small.slope_at(i).first, small.slope_at(i).second);

    auto distances_at = [&](const farey::CapGraph& g, std::size_t src) {
        auto [p, q] = small.slope_at(src);
        auto d = g.bfs(static_cast<std::size_t>(g.index_of(p, q)));
        std::vector<std::int32_t> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto [x, y] = small.slope_at(i);
            out[i] = d[static_cast<std::size_t>(g.index_of(x, y))];
        }
        return out;
    };

    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::future<std::pair<std::int64_t, std::optional<std::string>>>> jobs;
    for (unsigned t = 0; t < threads; ++t)
        jobs.push_back(std::async(std::launch::async, [&, t]() -> std::pair<std::int64_t, std::optional<std::string>> {
            std::int64_t checked = 0;
            for (std::size_t s = t; s < n; s += threads) {
                auto prev = distances_at(small, s);
                std::int64_t c = 2 * cap;
                auto cur = distances_at(farey::CapGraph(c), s);
                while (cur != prev) {
                    prev = cur;
                    c *= 2;
                    cur = distances_at(farey::CapGraph(c), s);
                }
                for (std::size_t i = 0; i < n; ++i) {
                    ++checked;
                    if (farey::farey_distance(slopes[s], slopes[i]) != cur[i])
                        return {checked, "d(" + slopes[s].str() + ", " + slopes[i].str() + "): fast " +
                                             std::to_string(farey::farey_distance(slopes[s], slopes[i])) +
                                             ", oracle " + std::to_string(cur[i])};
                }
            }
            return {checked, std::nullopt};
        }));
    for (auto& j : jobs) {
        auto [c, bad] = j.get();
        res.checked += c;
        if (bad && !res.counterexample) res.counterexample = bad;
    }
    return res;
}

SuiteResult verify_sandwich(const std::string& matrix, std::int64_t k_max) {
    SuiteResult res;
    res.suite = "sandwich";
    dyn::AnosovMap A(farey::ToralMatrix::parse(matrix));
    dyn::SweepBudget budget;
    budget.k_max = k_max;
    std::vector<dyn::SweepInput> inputs{{{}, tri::PunctureSet({{0, 0}})}, {{1}, {}}, {{2}, {}}};
    auto r = dyn::approximation_sweep(A, inputs, budget, hyp::derive_constants(1, 2));
    const auto& ref = r.reference.bracket.exact;
    if (!ref) {
        res.inconclusive = true;
        return res;
    }
    const auto& single = r.entries[0].bracket;
    ++res.checked;
    if (!single.exact || *single.exact != *ref)
        res.counterexample = "rel one fixed point: " + bracket_str(single) + " vs Farey " + format_rational(*ref);
    for (const auto& e : r.entries) {
        ++res.checked;
        if (e.verdict == dyn::Verdict::fail && !res.counterexample)
            res.counterexample = "|P| = " + std::to_string(e.punctures.size()) + ": " + e.reason;
        if (e.verdict == dyn::Verdict::inconclusive) res.inconclusive = true;
    }
    return res;
}

SuiteResult verify_p_independence(std::uint64_t seed, int samples) {
    SuiteResult res;
    res.suite = "lemma34-independence";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> num(1, 96);
    struct Pair {
        std::int64_t p, q, r, s;
    };
    for (auto [p, q, r, s] : {Pair{1, 0, 2, 5}, Pair{1, 1, 1, 3}, Pair{0, 1, 3, 2}}) {
        auto a = fine::straight_loop({Rational(1, 7), Rational(1, 3)}, p, q);
        auto b = fine::straight_loop({Rational(2, 9), Rational(1, 5)}, r, s);
        const std::int64_t farey = farey::farey_distance(farey::Slope(p, q), farey::Slope(r, s));
        std::optional<std::int64_t> value;
        for (int done = 0; done < samples;) {
            std::vector<Vec2> pts;
            for (int i = 0; i <= done % 3; ++i) pts.push_back({Rational(num(rng), 97), Rational(num(rng), 97)});
            tri::DistanceBracket d;
            std::size_t size = 0;
            try {
                tri::PunctureSet P(pts);
                size = P.size();
                d = fine::fine_distance(a, b, P);
            } catch (const Error& e) {
                if (e.code() == "puncture on curve" || e.code() == "duplicate puncture") continue;
                throw;
            }
            ++done;
            ++res.checked;
            std::string where = "slopes " + std::to_string(p) + "/" + std::to_string(q) + ", " + std::to_string(r) +
                                "/" + std::to_string(s) + " with |P| = " + std::to_string(size);
            if (!d.collapsed()) {
                res.inconclusive = true;
                continue;
            }
            if (value && d.lo != *value && !res.counterexample) res.counterexample = where + ": value changed";
            if (size == 1 && d.lo != farey && !res.counterexample) res.counterexample = where + ": differs from Farey";
            value = d.lo;
        }
    }
    return res;
}

SuiteResult verify_periodic(std::int64_t n_max) {
    SuiteResult res;
    res.suite = "periodic-points";
    for (auto M : {farey::ToralMatrix{2, 1, 1, 1}, farey::ToralMatrix{3, 2, 1, 1}})
        for (std::int64_t n = 1; n <= n_max; ++n) {
            auto pts = dyn::periodic_points(dyn::AnosovMap(M), n);
            auto B = M.pow(n);
            Integer det = abs((B.a - 1) * (B.d - 1) - B.b * B.c);
            ++res.checked;
            bool ok = Integer(pts.size()) == det;
            for (const auto& x : pts) ok = ok && reduce_mod1(B.apply(x)) == x;
            if (!ok && !res.counterexample) res.counterexample = M.str() + " n = " + std::to_string(n);
        }
    return res;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"curvelab: curve graphs of punctured tori and translation lengths"};
    app.require_subcommand(1);

    std::string from, to, matrix, config, alpha, beta, punctures;
    std::int64_t m_max = 12, k_max = 5, sweep_k = 8, cap = 50, n_max = 6;
    std::uint64_t seed = 1;
    int samples = 5;
    bool as_json = false;
    std::function<int()> action;

    auto* farey_cmd = app.add_subcommand("farey", "Farey graph computations")->require_subcommand(1);
    auto* dist = farey_cmd->add_subcommand("dist", "distance between two slopes");
    dist->add_option("--from", from, "slope p/q")->required();
    dist->add_option("--to", to, "slope p/q")->required();
    dist->callback([&] { action = [&] { return cmd_farey_dist(from, to); }; });
    auto* geo = farey_cmd->add_subcommand("geodesic", "canonical geodesic between two slopes");
    geo->add_option("--from", from, "slope p/q")->required();
    geo->add_option("--to", to, "slope p/q")->required();
    geo->callback([&] { action = [&] { return cmd_farey_geodesic(from, to); }; });
    auto* tl = farey_cmd->add_subcommand("tl", "stable translation length of a matrix");
    tl->add_option("--matrix", matrix, "a,b,c,d")->required();
    tl->add_option("--mmax", m_max, "largest period tried")->capture_default_str();
    tl->add_option("--kmax", k_max, "multiples verified")->capture_default_str();
    tl->add_flag("--json", as_json, "JSON output");
    tl->callback([&] { action = [&] { return cmd_farey_tl(matrix, m_max, k_max, as_json); }; });

    auto* sweep = app.add_subcommand("sweep", "finite-approximation sweep from a JSON config");
    sweep->add_option("config", config, "config file")->required();
    sweep->callback([&] { action = [&] { return cmd_sweep(config); }; });

    auto* fine_cmd = app.add_subcommand("fine", "fine curve graph")->require_subcommand(1);
    auto* fdist = fine_cmd->add_subcommand("dist", "distance between two polygonal curves");
    fdist->add_option("--alpha", alpha, ".poly file")->required();
    fdist->add_option("--beta", beta, ".poly file")->required();
    fdist->add_option("--punctures", punctures, "puncture file, one x,y per line")->required();
    fdist->callback([&] { action = [&] { return cmd_fine_dist(alpha, beta, punctures); }; });

    auto* verify = app.add_subcommand("verify", "invariant suites")->require_subcommand(1);
    auto* vf = verify->add_subcommand("farey-oracle", "fast distance vs BFS oracle");
    vf->add_option("--cap", cap, "entry bound")->capture_default_str();
    vf->callback([&] { action = [&] { return report(verify_farey_oracle(cap)); }; });
    auto* vs = verify->add_subcommand("sandwich", "tl rel P against the Farey value");
    vs->add_option("--matrix", matrix, "a,b,c,d")->required();
    vs->add_option("--kmax", sweep_k, "orbit length")->capture_default_str();
    vs->callback([&] { action = [&] { return report(verify_sandwich(matrix, sweep_k)); }; });
    auto* vl = verify->add_subcommand("lemma34-independence", "fine distance does not depend on P");
    vl->add_option("--seed", seed, "RNG seed")->capture_default_str();
    vl->add_option("--samples", samples, "puncture sets per pair")->capture_default_str();
    vl->callback([&] { action = [&] { return report(verify_p_independence(seed, samples)); }; });
    auto* vp = verify->add_subcommand("periodic-points", "|Fix(A^n)| = |det(A^n - I)|");
    vp->add_option("--nmax", n_max, "largest n")->capture_default_str();
    vp->callback([&] { action = [&] { return report(verify_periodic(n_max)); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    try {
        return action();
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        if (e.code() == "not in minimal position rel P" || e.code() == "puncture on curve" ||
            e.code() == "perturb inputs")
            return kPrecondition;
        if (e.code() == "budget exceeded") return kInconclusive;
        return kUsage;
    }
}
