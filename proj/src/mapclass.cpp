#include "curvelab/mapclass.hpp"

#include <algorithm>
#include <sstream>

namespace curvelab::mapclass {

using tri::FlipStep;
using tri::NormalCurve;
using tri::Triangulation;

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("overflow", "normal coordinate exceeds 64 bits");
    return r;
}

// Flips the edge opposite `origin` in the triangle whose corner cone at
// `origin` contains `dir`.
FlipStep flip_towards(Triangulation& D, std::int32_t origin, const Vec2& dir) {
    for (std::size_t ti = 0; ti < D.num_triangles(); ++ti) {
        const tri::Triangle& t = D.triangle(ti);
        for (int k = 0; k < 3; ++k) {
            if (t.corners[k] != origin) continue;
            Vec2 a = t.pos[(k + 1) % 3] - t.pos[k], b = t.pos[(k + 2) % 3] - t.pos[k];
            if (cross(a, dir) > 0 && cross(dir, b) > 0) return D.flip(t.sides[(k + 1) % 3].edge);
        }
    }
    throw Error("internal", "no triangle contains the edge direction");
}

}  // namespace

MappingClass MappingClass::identity(tri::TriPtr T) {
    MappingClass m;
    m.puncture_perm_.resize(T->num_vertices());
    for (std::size_t i = 0; i < m.puncture_perm_.size(); ++i) m.puncture_perm_[i] = static_cast<std::int32_t>(i);
    m.tri_ = std::move(T);
    m.provenance_ = farey::ToralMatrix::identity();
    return m;
}

MappingClass MappingClass::from_matrix(const farey::ToralMatrix& A, tri::TriPtr T) {
    if (A.det() != 1) throw Error("invalid matrix", "determinant must be 1");
    const tri::PunctureSet& P = T->punctures();
    MappingClass m;
    for (std::size_t i = 0; i < P.size(); ++i) {
        auto j = P.find(A.apply(P[i]));
        if (!j)
            throw Error("not f-invariant", "image of " + format_rational(P[i].x) + "," + format_rational(P[i].y) +
                                               " is not a puncture");
        m.puncture_perm_.push_back(static_cast<std::int32_t>(*j));
    }
    Triangulation D = T->transformed({A.a, A.b, A.c, A.d}, m.puncture_perm_);
    for (const auto& s : D.make_delaunay()) m.word_.push_back(s);
    // Both triangulations are now Delaunay; remaining differences are
    // diagonals of cocircular cells, resolved edge by edge.
    const std::size_t guard = 64 * T->num_edges() * T->num_edges() + 64;
    for (const auto& e : T->edges()) {
        std::size_t steps = 0;
        while (!D.find_edge(e.origin, e.vec)) {
            if (++steps > guard) throw Error("internal", "cocircular resolution did not terminate");
            m.word_.push_back(flip_towards(D, e.origin, e.vec));
        }
    }
    Relabel r;
    std::vector<bool> hit(T->num_edges(), false);
    bool trivial = true;
    for (std::size_t i = 0; i < D.num_edges(); ++i) {
        auto j = T->find_edge(D.edge(i).origin, D.edge(i).vec);
        if (!j || hit[static_cast<std::size_t>(*j)]) throw Error("internal", "final triangulation does not match");
        hit[static_cast<std::size_t>(*j)] = true;
        r.perm.push_back(*j);
        trivial = trivial && *j == static_cast<std::int32_t>(i);
    }
    if (!trivial) m.word_.push_back(std::move(r));
    m.tri_ = std::move(T);
    m.provenance_ = A;
    return m;
}

std::size_t MappingClass::flip_count() const {
    return static_cast<std::size_t>(std::count_if(word_.begin(), word_.end(), [](const WordOp& op) {
        return std::holds_alternative<FlipStep>(op);
    }));
}

MappingClass MappingClass::inverse() const {
    MappingClass m;
    m.tri_ = tri_;
    for (auto it = word_.rbegin(); it != word_.rend(); ++it) {
        if (const auto* r = std::get_if<Relabel>(&*it)) {
            Relabel inv;
            inv.perm.resize(r->perm.size());
            for (std::size_t i = 0; i < r->perm.size(); ++i) inv.perm[static_cast<std::size_t>(r->perm[i])] =
                static_cast<std::int32_t>(i);
            m.word_.push_back(std::move(inv));
        } else {
            // The flip formula is an involution for the same quadrilateral data.
            m.word_.push_back(*it);
        }
    }
    m.puncture_perm_.resize(puncture_perm_.size());
    for (std::size_t i = 0; i < puncture_perm_.size(); ++i)
        m.puncture_perm_[static_cast<std::size_t>(puncture_perm_[i])] = static_cast<std::int32_t>(i);
    if (provenance_) m.provenance_ = provenance_->inverse();
    return m;
}

std::string MappingClass::serialize() const {
    std::ostringstream out;
    out << "flipword " << tri_->hash() << " edges " << tri_->num_edges() << "\n";
    if (provenance_) out << "matrix " << provenance_->str() << "\n";
    out << "punctures";
    for (auto p : puncture_perm_) out << " " << p;
    out << "\n";
    for (const auto& op : word_) {
        if (const auto* f = std::get_if<FlipStep>(&op)) {
            out << "f " << f->e << " " << f->a << " " << f->b << " " << f->c << " " << f->d << "\n";
        } else {
            out << "r";
            for (auto p : std::get<Relabel>(op).perm) out << " " << p;
            out << "\n";
        }
    }
    return out.str();
}

MappingClass MappingClass::parse(tri::TriPtr T, std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    MappingClass m;
    if (!std::getline(in, line)) throw Error("parse", "empty flip word");
    {
        std::istringstream hs(line);
        std::string tag, hash, edges_tag;
        std::size_t edges = 0;
        hs >> tag >> hash >> edges_tag >> edges;
        if (tag != "flipword" || edges_tag != "edges") throw Error("parse", "bad flip word header");
        if (hash != T->hash() || edges != T->num_edges())
            throw Error("triangulation mismatch", "flip word belongs to " + hash);
    }
    const auto E = static_cast<std::int32_t>(T->num_edges());
    auto check_edge = [&](std::int32_t e) {
        if (e < 0 || e >= E) throw Error("parse", "edge id out of range");
        return e;
    };
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "matrix") {
            std::string mat;
            ls >> mat;
            m.provenance_ = farey::ToralMatrix::parse(mat);
        } else if (tag == "punctures") {
            std::int32_t p;
            while (ls >> p) m.puncture_perm_.push_back(p);
        } else if (tag == "f") {
            FlipStep f;
            if (!(ls >> f.e >> f.a >> f.b >> f.c >> f.d)) throw Error("parse", "flip needs five edge ids");
            for (auto e : {f.e, f.a, f.b, f.c, f.d}) check_edge(e);
            m.word_.push_back(f);
        } else if (tag == "r") {
            Relabel r;
            std::int32_t p;
            while (ls >> p) r.perm.push_back(check_edge(p));
            auto sorted = r.perm;
            std::sort(sorted.begin(), sorted.end());
            for (std::int32_t i = 0; i < E; ++i)
                if (static_cast<std::size_t>(i) >= sorted.size() || sorted[static_cast<std::size_t>(i)] != i)
                    throw Error("parse", "relabel is not a permutation");
            if (static_cast<std::int32_t>(sorted.size()) != E) throw Error("parse", "relabel is not a permutation");
            m.word_.push_back(std::move(r));
        } else {
            throw Error("parse", "unknown flip word line '" + line + "'");
        }
    }
    if (m.puncture_perm_.size() != T->num_vertices()) throw Error("parse", "puncture permutation missing");
    m.tri_ = std::move(T);
    return m;
}

std::vector<std::int64_t> act_weights(const MappingClass& m, std::vector<std::int64_t> w) {
    if (w.size() != m.triangulation()->num_edges()) throw Error("triangulation mismatch");
    for (const auto& op : m.word()) {
        if (const auto* f = std::get_if<FlipStep>(&op)) {
            auto at = [&](std::int32_t e) { return w[static_cast<std::size_t>(e)]; };
            std::int64_t ac = checked_add(at(f->a), at(f->c)), bd = checked_add(at(f->b), at(f->d));
            w[static_cast<std::size_t>(f->e)] = std::max(ac, bd) - at(f->e);
        } else {
            const auto& perm = std::get<Relabel>(op).perm;
            std::vector<std::int64_t> out(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) out[static_cast<std::size_t>(perm[i])] = w[i];
            w = std::move(out);
        }
    }
    return w;
}

NormalCurve act(const MappingClass& m, const NormalCurve& a) {
    if (a.triangulation()->hash() != m.triangulation()->hash()) throw Error("triangulation mismatch");
    return NormalCurve::from_weights(m.triangulation(), act_weights(m, a.weights()));
}

NormalCurve act_power(const MappingClass& m, const NormalCurve& a, std::int64_t k) {
    if (k < 0) return act_power(m.inverse(), a, -k);
    NormalCurve c = a;
    for (std::int64_t i = 0; i < k; ++i) c = act(m, c);
    return c;
}

TLResult tl_bracket(const MappingClass& m, const NormalCurve& base, std::int64_t k_max, const hyp::HypParams& params,
                    const tri::DistanceBudget& budget) {
    if (!tri::is_nonseparating(base)) throw Error("separating curve", "base curve must be nonseparating");
    TLResult res;
    hyp::TLBracket& b = res.bracket;
    NormalCurve cur = base;
    bool all_collapsed = true;
    for (std::int64_t k = 1; k <= k_max; ++k) {
        try {
            cur = act(m, cur);
        } catch (const Error& e) {
            if (e.code() != "overflow") throw;
            break;
        }
        auto db = tri::distance_bracket(base, cur, budget);
        res.orbit.push_back({k, db.lo, db.hi});
        all_collapsed = all_collapsed && db.collapsed();
        if (db.hi)
            b.lower_upper(Rational(*db.hi, k), "fekete",
                          "d(c, m^" + std::to_string(k) + " c) <= " + std::to_string(*db.hi));
    }
    if (m.provenance()) {
        auto ft = farey::farey_tl(*m.provenance(), 12, 5);
        Rational v = ft.bracket.exact ? *ft.bracket.exact : ft.bracket.lower;
        b.raise_lower(v, "forgetful-farey", "translation length of " + m.provenance()->str() + " on the Farey graph");
    }
    const auto sampled = static_cast<std::int64_t>(res.orbit.size());
    if (all_collapsed && sampled >= params.N) {
        hyp::PathDistances dist;
        for (std::int64_t i = 0; i <= sampled; ++i)
            for (std::int64_t j = i + 1; j <= sampled; ++j) dist[{i, j}] = res.orbit[static_cast<std::size_t>(j - i - 1)].lo;
        if (hyp::local_quasigeodesic_audit(dist, params.N, params.K)) {
            hyp::OrbitSample s("base");
            for (const auto& r : res.orbit) s.add(r.k, r.lo);
            b.raise_lower(hyp::quasigeodesic_lower(s, sampled, params), "morse", "local audit passed");
        }
    }
    if (b.upper && *b.upper == b.lower) b.exact = b.lower;
    return res;
}

AxisSearch axis_search(const MappingClass& m, std::int64_t m_max, std::int64_t k_max, const tri::DistanceBudget& budget) {
    AxisSearch out;
    std::vector<NormalCurve> bases;
    farey::CapGraph slopes(2);
    for (std::size_t i = 0; i < slopes.size(); ++i) {
        auto [p, q] = slopes.slope_at(i);
        for (auto& c : tri::straight_curves(m.triangulation(), farey::Slope(p, q))) bases.push_back(std::move(c));
    }
    bool any_positive = false, any_open = false;
    for (const auto& base : bases) {
        std::vector<NormalCurve> orbit{base};
        auto orbit_at = [&](std::int64_t j) -> const NormalCurve& {
            while (static_cast<std::int64_t>(orbit.size()) <= j) orbit.push_back(act(m, orbit.back()));
            return orbit[static_cast<std::size_t>(j)];
        };
        for (std::int64_t p = 1; p <= m_max; ++p) {
            try {
                auto db = tri::distance_bracket(base, orbit_at(p), budget);
                if (!db.collapsed()) {
                    any_open = true;
                    out.log.push_back("base " + base.serialize() + " period " + std::to_string(p) + ": open bracket");
                    continue;
                }
                std::int64_t D = db.lo;
                if (D == 0) continue;
                any_positive = true;
                bool ok = true;
                for (std::int64_t k = 2; k <= k_max && ok; ++k) {
                    auto dk = tri::distance_bracket(base, orbit_at(k * p), budget);
                    ok = dk.collapsed() && dk.lo == k * D;
                    if (!dk.collapsed()) any_open = true;
                }
                if (!ok) {
                    out.log.push_back("base " + base.serialize() + " period " + std::to_string(p) +
                                      ": multiples not linear");
                    continue;
                }
                out.certificate = PuncturedAxisCertificate{base, p, D, Rational(D, p), db.path, k_max};
                return out;
            } catch (const Error& e) {
                if (e.code() != "overflow") throw;
                any_open = true;
                out.log.push_back("base " + base.serialize() + " period " + std::to_string(p) + ": overflow");
                break;
            }
        }
    }
    if (any_positive)
        out.reason = "no positive displacement growth";
    else if (any_open)
        out.reason = "inconclusive";
    else
        out.reason = "elliptic";
    return out;
}

}  // namespace curvelab::mapclass
