#include "curvelab/tricurves.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace curvelab::tri {

namespace {

std::int32_t next(std::int32_t k) { return (k + 1) % 3; }
std::int32_t prev(std::int32_t k) { return (k + 2) % 3; }

struct Step {
    std::int32_t tri = 0, entry_side = 0;
    std::int64_t entry_trav = 0;
    std::int32_t exit_side = 0;
    std::int64_t exit_trav = 0;
    Vec2 offset;
    Token entry;
};

Token side_token(const Triangle& t, std::int32_t k) {
    Token e = t.sides[k].edge + 1;
    return t.sides[k].sign > 0 ? e : -e;
}

void check_matching(const Triangulation& T, const std::vector<std::int64_t>& w) {
    if (w.size() != T.num_edges()) throw Error("not normal", "weight vector has the wrong length");
    for (auto x : w)
        if (x < 0) throw Error("not normal", "negative weight");
    for (const auto& t : T.triangles()) {
        std::int64_t a = w[t.sides[0].edge], b = w[t.sides[1].edge], c = w[t.sides[2].edge];
        if ((a + b + c) % 2 != 0) throw Error("not normal", "odd weight sum in a triangle");
        if (a > b + c || b > a + c || c > a + b) throw Error("not normal", "triangle inequality fails");
    }
}

// Follows the arcs from the first point of edge e0, entering its left triangle.
std::vector<Step> trace_steps(const Triangulation& T, const std::vector<std::int64_t>& w, std::int32_t e0,
                              std::size_t limit) {
    const Edge& E0 = T.edge(static_cast<std::size_t>(e0));
    std::int32_t t = E0.left_tri, k = E0.left_side;
    std::int64_t idx = 0;
    Vec2 off{0, 0};
    Token entry = -(e0 + 1);
    std::vector<Step> steps;
    do {
        if (steps.size() > limit) throw Error("multicurve", "trace did not close");
        const Triangle& tr = T.triangle(static_cast<std::size_t>(t));
        auto wk = [&](std::int32_t s) { return w[tr.sides[s].edge]; };
        std::int64_t trav = tr.sides[k].sign > 0 ? idx : wk(k) - 1 - idx;
        std::int64_t ck = (wk(prev(k)) + wk(k) - wk(next(k))) / 2;
        std::int32_t m;
        std::int64_t jt;
        if (trav < ck) {
            m = prev(k);
            jt = wk(m) - 1 - trav;
        } else {
            m = next(k);
            jt = wk(k) - 1 - trav;
        }
        steps.push_back({t, k, trav, m, jt, off, entry});
        idx = tr.sides[m].sign > 0 ? jt : wk(m) - 1 - jt;
        entry = side_token(tr, m);
        off = off + T.transition(t, m);
        std::tie(t, k) = T.across(t, m);
    } while (!(t == E0.left_tri && k == E0.left_side && idx == 0));
    steps.push_back({t, k, 0, 0, 0, off, entry});
    return steps;
}

std::vector<std::int64_t> link_weights(const Triangulation& T, std::int32_t v) {
    std::vector<std::int64_t> w(T.num_edges(), 0);
    for (std::size_t e = 0; e < T.num_edges(); ++e)
        w[e] = (T.edge(e).origin == v ? 1 : 0) + (T.edge(e).dest == v ? 1 : 0);
    return w;
}

bool cyclic_equal(const std::vector<Token>& a, const std::vector<Token>& b) {
    if (a.size() != b.size()) return false;
    if (a.empty()) return true;
    std::vector<Token> doubled(a.begin(), a.end());
    doubled.insert(doubled.end(), a.begin(), a.end());
    return std::search(doubled.begin(), doubled.end(), b.begin(), b.end()) != doubled.end();
}

struct End {
    std::int32_t tri, side;
};

End tail_of(const Triangulation& T, Token tok) {
    const Edge& e = T.edge(static_cast<std::size_t>(token_edge(tok)));
    return tok > 0 ? End{e.left_tri, e.left_side} : End{e.right_tri, e.right_side};
}

End head_of(const Triangulation& T, Token tok) { return tail_of(T, reverse_token(tok)); }

// Sign of orient(a, b, x + delta) for delta = (eps, eps^2).
int side_of_point(const Vec2& a, const Vec2& b, const Vec2& x) {
    Rational o = orient(a, b, x);
    if (o != 0) return sign(o);
    Vec2 w = b - a;
    if (w.y != 0) return -sign(w.y);
    return sign(w.x);
}

// Sign of orient(x + delta, y + delta, c).
int side_of_segment(const Vec2& x, const Vec2& y, const Vec2& c) {
    Rational o = orient(x, y, c);
    if (o != 0) return sign(o);
    Vec2 d = y - x;
    if (d.y != 0) return sign(d.y);
    return -sign(d.x);
}

bool inside_perturbed(const Triangle& t, const Vec2& off, const Vec2& x) {
    for (int k = 0; k < 3; ++k)
        if (side_of_point(t.pos[k] + off, t.pos[(k + 1) % 3] + off, x) <= 0) return false;
    return true;
}

std::pair<std::int32_t, Vec2> locate_perturbed(const Triangulation& T, const Vec2& x) {
    for (std::size_t ti = 0; ti < T.num_triangles(); ++ti) {
        const Triangle& t = T.triangle(ti);
        Rational minx = t.pos[0].x, maxx = minx, miny = t.pos[0].y, maxy = miny;
        for (const auto& p : t.pos) {
            minx = std::min(minx, p.x);
            maxx = std::max(maxx, p.x);
            miny = std::min(miny, p.y);
            maxy = std::max(maxy, p.y);
        }
        // off is chosen so that pos + off contains x.
        Integer x0 = floor_of(x.x - maxx), x1 = -floor_of(minx - x.x) + 1;
        Integer y0 = floor_of(x.y - maxy), y1 = -floor_of(miny - x.y) + 1;
        for (Integer tx = x0; tx <= x1; ++tx)
            for (Integer ty = y0; ty <= y1; ++ty) {
                Vec2 off{Rational(tx), Rational(ty)};
                if (inside_perturbed(t, off, x)) return {static_cast<std::int32_t>(ti), off};
            }
    }
    throw Error("inconsistent triangulation", "point not located");
}

}  // namespace

TriPtr make_triangulation(const PunctureSet& P) { return std::make_shared<const Triangulation>(Triangulation::build(P)); }

std::int32_t token_edge(Token t) { return (t > 0 ? t : -t) - 1; }
Token reverse_token(Token t) { return -t; }

std::vector<Token> reversed(const std::vector<Token>& seq) {
    std::vector<Token> out(seq.rbegin(), seq.rend());
    for (auto& t : out) t = reverse_token(t);
    return out;
}

NormalCurve NormalCurve::from_weights(TriPtr T, std::vector<std::int64_t> weights) {
    check_matching(*T, weights);
    std::int64_t total = std::accumulate(weights.begin(), weights.end(), std::int64_t{0});
    if (total == 0) throw Error("inessential", "empty curve");
    for (std::size_t v = 0; v < T->num_vertices(); ++v)
        if (weights == link_weights(*T, static_cast<std::int32_t>(v)))
            throw Error("inessential", "peripheral around puncture " + std::to_string(v));
    std::int32_t e0 = 0;
    while (weights[static_cast<std::size_t>(e0)] == 0) ++e0;
    auto steps = trace_steps(*T, weights, e0, static_cast<std::size_t>(total));
    Vec2 closing = steps.back().offset;
    steps.pop_back();
    if (static_cast<std::int64_t>(steps.size()) != total) throw Error("multicurve", "more than one component");

    NormalCurve c;
    c.tri_ = std::move(T);
    c.weights_ = std::move(weights);
    for (const auto& s : steps) c.crossings_.push_back(s.entry);
    std::int64_t p = to_i64(numerator(closing.x)), q = to_i64(numerator(closing.y));
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
        c.crossings_ = reversed(c.crossings_);
    }
    c.homology_ = {p, q};
    if (!c.homology_.zero()) {
        farey::Slope s(p, q);
        auto heights = strip_heights(c.tri_->punctures(), s);
        for (std::size_t i = 0; i < heights.size(); ++i)
            if (straight_weights(*c.tri_, s, heights[i]) == c.weights_) {
                c.strip_ = i;
                break;
            }
    }
    return c;
}

NormalCurve NormalCurve::normalize(TriPtr T, const std::vector<Token>& crossings) {
    const auto E = static_cast<std::int32_t>(T->num_edges());
    for (Token t : crossings)
        if (t == 0 || token_edge(t) >= E) throw Error("invalid crossing sequence", "token out of range");
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        Token a = crossings[i], b = crossings[(i + 1) % crossings.size()];
        if (head_of(*T, a).tri != tail_of(*T, b).tri)
            throw Error("invalid crossing sequence", "tokens " + std::to_string(a) + " " + std::to_string(b));
    }
    std::deque<Token> red;
    for (Token t : crossings) {
        if (!red.empty() && red.back() == reverse_token(t))
            red.pop_back();
        else
            red.push_back(t);
    }
    while (red.size() >= 2 && red.front() == reverse_token(red.back())) {
        red.pop_front();
        red.pop_back();
    }
    if (red.empty()) throw Error("inessential", "null-homotopic");
    std::vector<Token> seq(red.begin(), red.end());
    std::vector<std::int64_t> w(T->num_edges(), 0);
    for (Token t : seq) ++w[static_cast<std::size_t>(token_edge(t))];
    NormalCurve c = from_weights(std::move(T), std::move(w));
    if (!cyclic_equal(c.crossings_, seq) && !cyclic_equal(c.crossings_, reversed(seq)))
        throw Error("not simple", "crossing sequence does not trace a simple curve");
    return c;
}

NormalCurve NormalCurve::parse(TriPtr T, std::string_view text) {
    std::vector<std::int64_t> w(T->num_edges(), 0);
    std::istringstream in{std::string(text)};
    std::string item;
    while (in >> item) {
        auto colon = item.find(':');
        if (colon == std::string::npos) throw Error("parse", "expected edge:weight, got '" + item + "'");
        auto e = to_i64(parse_integer(item.substr(0, colon)));
        if (e < 0 || static_cast<std::size_t>(e) >= w.size()) throw Error("parse", "edge id out of range");
        w[static_cast<std::size_t>(e)] = to_i64(parse_integer(item.substr(colon + 1)));
    }
    return from_weights(std::move(T), std::move(w));
}

std::int64_t NormalCurve::norm() const { return std::accumulate(weights_.begin(), weights_.end(), std::int64_t{0}); }

std::optional<farey::Slope> NormalCurve::slope() const {
    if (homology_.zero()) return std::nullopt;
    return farey::Slope(homology_.p, homology_.q);
}

std::string NormalCurve::serialize() const {
    std::string out;
    for (std::size_t e = 0; e < weights_.size(); ++e) {
        if (!out.empty()) out += " ";
        out += std::to_string(e) + ":" + std::to_string(weights_[e]);
    }
    return out;
}

bool operator==(const NormalCurve& a, const NormalCurve& b) {
    if (a.weights_ != b.weights_) return false;
    return a.tri_ == b.tri_ || a.tri_->hash() == b.tri_->hash();
}

std::vector<Rational> strip_heights(const PunctureSet& P, const farey::Slope& s) {
    Vec2 dir{Rational(s.p()), Rational(s.q())};
    std::vector<Rational> h;
    for (const auto& x : P.points()) h.push_back(frac_part(cross(dir, x)));
    std::sort(h.begin(), h.end());
    h.erase(std::unique(h.begin(), h.end()), h.end());
    std::vector<Rational> mids;
    for (std::size_t i = 0; i + 1 < h.size(); ++i) mids.push_back((h[i] + h[i + 1]) / 2);
    mids.push_back(frac_part((h.back() + h.front() + 1) / 2));
    std::sort(mids.begin(), mids.end());
    return mids;
}

std::vector<std::int64_t> straight_weights(const Triangulation& T, const farey::Slope& s, const Rational& h) {
    Vec2 dir{Rational(s.p()), Rational(s.q())};
    std::vector<std::int64_t> w;
    for (const auto& e : T.edges()) {
        Rational f0 = cross(dir, T.punctures()[static_cast<std::size_t>(e.origin)]);
        Rational f1 = f0 + cross(dir, e.vec);
        Rational lo = std::min(f0, f1) - h, hi = std::max(f0, f1) - h;
        Integer count = -floor_of(-hi) - floor_of(lo) - 1;
        w.push_back(to_i64(count));
    }
    return w;
}

NormalCurve straight_curve(const TriPtr& T, const farey::Slope& s, std::size_t strip) {
    auto heights = strip_heights(T->punctures(), s);
    if (strip >= heights.size()) throw Error("invalid strip", std::to_string(strip));
    return NormalCurve::from_weights(T, straight_weights(*T, s, heights[strip]));
}

std::vector<NormalCurve> straight_curves(const TriPtr& T, const farey::Slope& s) {
    std::vector<NormalCurve> out;
    auto heights = strip_heights(T->punctures(), s);
    for (std::size_t i = 0; i < heights.size(); ++i) out.push_back(straight_curve(T, s, i));
    return out;
}

std::vector<Token> trace_polygon(const Triangulation& T, const std::vector<Vec2>& vertices, const Vec2& displacement) {
    if (vertices.empty()) throw Error("invalid polygon", "no vertices");
    auto [t, off] = locate_perturbed(T, vertices[0]);
    const std::int32_t t0 = t;
    const Vec2 off0 = off;
    std::vector<Token> tokens;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& x = vertices[i];
        Vec2 y = i + 1 < n ? vertices[i + 1] : vertices[0] + displacement;
        for (;;) {
            const Triangle& tr = T.triangle(static_cast<std::size_t>(t));
            if (inside_perturbed(tr, off, y)) break;
            std::int32_t m = -1;
            for (std::int32_t k = 0; k < 3; ++k)
                if (side_of_segment(x, y, tr.pos[k] + off) < 0 && side_of_segment(x, y, tr.pos[next(k)] + off) > 0)
                    m = k;
            if (m < 0) throw Error("inconsistent polygon", "no exit side");
            tokens.push_back(side_token(tr, m));
            off = off + T.transition(t, m);
            t = T.across(t, m).first;
        }
    }
    if (t != t0 || !(off == off0 + displacement)) throw Error("inconsistent polygon", "trace did not close");
    return tokens;
}

Realization realize(const NormalCurve& a) {
    const Triangulation& T = *a.triangulation();
    const auto& w = a.weights();
    std::int32_t e0 = 0;
    while (w[static_cast<std::size_t>(e0)] == 0) ++e0;
    auto steps = trace_steps(T, w, e0, static_cast<std::size_t>(a.norm()));
    Realization r;
    r.displacement = steps.back().offset;
    steps.pop_back();
    for (const auto& s : steps) {
        const Triangle& tr = T.triangle(static_cast<std::size_t>(s.tri));
        auto wk = [&](std::int32_t k) { return w[tr.sides[k].edge]; };
        std::int32_t k = s.entry_side;
        const Edge& e = T.edge(static_cast<std::size_t>(tr.sides[k].edge));
        std::int64_t idx = tr.sides[k].sign > 0 ? s.entry_trav : wk(k) - 1 - s.entry_trav;
        Vec2 entry = T.edge_origin_in(s.tri, k) + s.offset + Rational(idx + 1, wk(k) + 1) * e.vec;
        std::int32_t corner;
        std::int64_t level;
        if (s.exit_side == prev(k)) {
            corner = k;
            level = s.entry_trav;
        } else {
            corner = next(k);
            level = wk(k) - 1 - s.entry_trav;
        }
        std::int64_t count = (wk(prev(corner)) + wk(corner) - wk(next(corner))) / 2;
        Vec2 g = Rational(1, 3) * (tr.pos[0] + tr.pos[1] + tr.pos[2]);
        const Vec2& v = tr.pos[corner];
        Vec2 mid = v + Rational(level + 1, count + 1) * (g - v) + s.offset;
        r.vertices.push_back(entry);
        r.vertices.push_back(mid);
    }
    return r;
}

std::int64_t geometric_intersection(const NormalCurve& a, const NormalCurve& b) {
    if (a.straight_strip() && b.straight_strip() && a.triangulation()->hash() == b.triangulation()->hash()) {
        if (a.weights() == b.weights()) return 0;
        // Straight loops have no bigons, so they realize |det|.
        return to_i64(farey::intersection_number(*a.slope(), *b.slope()));
    }
    return crossing_intersection(a, b);
}

std::int64_t crossing_intersection(const NormalCurve& a, const NormalCurve& b) {
    if (a.triangulation() != b.triangulation() && a.triangulation()->hash() != b.triangulation()->hash())
        throw Error("triangulation mismatch");
    if (a.weights() == b.weights()) return 0;
    const Triangulation& T = *a.triangulation();
    const auto& al = a.crossings();
    const std::size_t n = al.size();
    std::int64_t count = 0;
    auto ccw = [](std::int32_t x, std::int32_t p, std::int32_t q) { return p == next(x) && q == prev(x); };
    for (const auto& sigma : {b.crossings(), reversed(b.crossings())}) {
        const std::size_t m = sigma.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                if (al[i] != sigma[j] || al[(i + n - 1) % n] == sigma[(j + m - 1) % m]) continue;
                std::size_t L = 1;
                while (L < n + m && al[(i + L) % n] == sigma[(j + L) % m]) ++L;
                if (L >= n + m) continue;
                std::int32_t X = tail_of(T, al[i]).side;
                std::int32_t A = head_of(T, al[(i + n - 1) % n]).side;
                std::int32_t B = head_of(T, sigma[(j + m - 1) % m]).side;
                std::int32_t Y = head_of(T, al[(i + L - 1) % n]).side;
                std::int32_t A2 = tail_of(T, al[(i + L) % n]).side;
                std::int32_t B2 = tail_of(T, sigma[(j + L) % m]).side;
                if (ccw(X, A, B) == ccw(Y, A2, B2)) ++count;
            }
    }
    return count;
}

bool is_nonseparating(const NormalCurve& a) { return !a.homology().zero(); }

bool adjacent(const NormalCurve& a, const NormalCurve& b) {
    if (!is_nonseparating(a) || !is_nonseparating(b)) throw Error("separating curve");
    if (a == b) return false;
    return geometric_intersection(a, b) <= 1;
}

DistanceBracket distance_bracket(const NormalCurve& a, const NormalCurve& b, const DistanceBudget& budget) {
    if (!is_nonseparating(a) || !is_nonseparating(b)) throw Error("separating curve");
    if (a.triangulation()->hash() != b.triangulation()->hash()) throw Error("triangulation mismatch");
    DistanceBracket r;
    if (a == b) {
        r.hi = 0;
        r.lo_certificate = "identity";
        r.path = {a};
        return r;
    }
    r.lo = 1;
    r.lo_certificate = "distinct";
    std::int64_t inter = geometric_intersection(a, b);
    if (inter >= 2) {
        r.lo = 2;
        r.lo_certificate = "intersection>=2";
    }
    farey::Slope sa = *a.slope(), sb = *b.slope();
    std::int64_t fd = farey::farey_distance(sa, sb);
    if (fd > r.lo) {
        r.lo = fd;
        r.lo_certificate = "forgetful-farey";
    }
    if (inter <= 1) {
        r.hi = 1;
        r.path = {a, b};
        return r;
    }
    const TriPtr& T = a.triangulation();
    if (budget.use_straight_paths && a.straight_strip() && b.straight_strip()) {
        auto geo = farey::farey_geodesic(sa, sb);
        r.path.push_back(a);
        for (std::size_t i = 1; i + 1 < geo.size(); ++i) r.path.push_back(straight_curve(T, geo[i], 0));
        r.path.push_back(b);
        r.hi = static_cast<std::int64_t>(r.path.size()) - 1;
        if (r.collapsed()) return r;
    }

    // Breadth-first search over a pool of curves with verified adjacency.
    std::vector<NormalCurve> pool{a, b};
    std::set<std::vector<std::int64_t>> seen{a.weights(), b.weights()};
    auto add = [&](const NormalCurve& c) {
        if (pool.size() >= budget.max_pool) return false;
        if (seen.insert(c.weights()).second) pool.push_back(c);
        return true;
    };
    bool truncated = false;
    for (const auto& c : budget.extras)
        if (is_nonseparating(c) && !add(c)) truncated = true;
    farey::CapGraph slopes(budget.slope_cap);
    for (std::size_t i = 0; i < slopes.size() && !truncated; ++i) {
        auto [p, q] = slopes.slope_at(i);
        for (const auto& c : straight_curves(T, farey::Slope(p, q)))
            if (!add(c)) {
                truncated = true;
                break;
            }
    }
    auto adj = [&](std::size_t u, std::size_t v) {
        const NormalCurve &x = pool[u], &y = pool[v];
        if (x.straight_strip() && y.straight_strip())
            return farey::intersection_number(*x.slope(), *y.slope()) <= 1;
        return geometric_intersection(x, y) <= 1;
    };
    std::vector<std::int64_t> dist(pool.size(), -1);
    std::vector<std::size_t> parent(pool.size(), 0);
    std::deque<std::size_t> queue{0};
    dist[0] = 0;
    while (!queue.empty() && dist[1] < 0) {
        std::size_t u = queue.front();
        queue.pop_front();
        if (r.hi && dist[u] + 1 >= *r.hi) break;
        for (std::size_t v = 1; v < pool.size(); ++v) {
            if (dist[v] >= 0 || !adj(u, v)) continue;
            dist[v] = dist[u] + 1;
            parent[v] = u;
            queue.push_back(v);
        }
    }
    if (dist[1] >= 0 && (!r.hi || dist[1] < *r.hi)) {
        r.hi = dist[1];
        std::vector<NormalCurve> path;
        for (std::size_t v = 1; v != 0; v = parent[v]) path.push_back(pool[v]);
        path.push_back(a);
        std::reverse(path.begin(), path.end());
        r.path = std::move(path);
    }
    r.exhausted = !r.collapsed() || truncated;
    return r;
}

farey::Slope forget_to_slope(const NormalCurve& a) {
    auto s = a.slope();
    if (!s) throw Error("dies under forgetting", "separating curve has zero class in the closed torus");
    return *s;
}

NormalCurve forget_punctures(const NormalCurve& a, const TriPtr& target) {
    if (!a.triangulation()->punctures().contains(target->punctures()))
        throw Error("not a subset", "target punctures must be among the curve's punctures");
    if (target->hash() == a.triangulation()->hash()) return a;
    Realization r = realize(a);
    auto tokens = trace_polygon(*target, r.vertices, r.displacement);
    try {
        return NormalCurve::normalize(target, tokens);
    } catch (const Error& e) {
        if (e.code() == "inessential") throw Error("dies under forgetting", e.what());
        throw;
    }
}

std::vector<std::vector<Token>> parse_crossing_file(std::string_view text) {
    std::vector<std::vector<Token>> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        std::vector<Token> seq;
        std::string tok;
        while (ls >> tok) {
            auto v = to_i64(parse_integer(tok));
            if (v == 0) throw Error("parse", "token 0 is not a crossing");
            seq.push_back(static_cast<Token>(v));
        }
        out.push_back(std::move(seq));
    }
    return out;
}

}  // namespace curvelab::tri
