#include "curvelab/triangulation.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace curvelab::tri {

namespace {

const Vec2 kZero{0, 0};

bool lex_positive(const Vec2& v) { return kZero < v; }

std::int32_t next(std::int32_t k) { return (k + 1) % 3; }
std::int32_t prev(std::int32_t k) { return (k + 2) % 3; }

void normalize_lift(Triangle& t) {
    Vec2 shift = floor_vec(t.pos[0]);
    for (auto& p : t.pos) p = p - shift;
}

Triangle make_triangle(std::array<std::int32_t, 3> corners, std::array<Vec2, 3> pos) {
    Triangle t;
    t.corners = corners;
    t.pos = std::move(pos);
    if (orient(t.pos[0], t.pos[1], t.pos[2]) <= 0) throw Error("degenerate triangle", "corners not ccw");
    normalize_lift(t);
    return t;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

PunctureSet::PunctureSet(std::vector<Vec2> points) {
    if (points.empty()) throw Error("empty puncture set");
    for (auto& p : points) p = reduce_mod1(p);
    std::sort(points.begin(), points.end());
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i] == points[i - 1])
            throw Error("duplicate puncture", format_rational(points[i].x) + "," + format_rational(points[i].y));
    points_ = std::move(points);
}

std::optional<std::size_t> PunctureSet::find(const Vec2& x) const {
    Vec2 r = reduce_mod1(x);
    auto it = std::lower_bound(points_.begin(), points_.end(), r);
    if (it != points_.end() && *it == r) return static_cast<std::size_t>(it - points_.begin());
    return std::nullopt;
}

bool PunctureSet::contains(const PunctureSet& other) const {
    return std::all_of(other.points_.begin(), other.points_.end(), [&](const Vec2& p) { return find(p).has_value(); });
}

std::string PunctureSet::serialize() const {
    std::string out;
    for (const auto& p : points_) out += format_rational(p.x) + "," + format_rational(p.y) + "\n";
    return out;
}

PunctureSet PunctureSet::parse(std::string_view text) {
    std::vector<Vec2> pts;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto comma = line.find(',');
        if (comma == std::string::npos) throw Error("parse", "expected x,y in '" + line + "'");
        pts.push_back({parse_rational(line.substr(0, comma)), parse_rational(line.substr(comma + 1))});
    }
    return PunctureSet(std::move(pts));
}

std::pair<std::int32_t, Vec2> edge_key(std::int32_t from, std::int32_t to, const Vec2& from_pos, const Vec2& to_pos) {
    Vec2 v = to_pos - from_pos;
    if (lex_positive(v)) return {from, v};
    return {to, kZero - v};
}

int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    Rational adx = a.x - d.x, ady = a.y - d.y;
    Rational bdx = b.x - d.x, bdy = b.y - d.y;
    Rational cdx = c.x - d.x, cdy = c.y - d.y;
    Rational det = (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) +
                   (bdx * bdx + bdy * bdy) * (cdx * ady - adx * cdy) +
                   (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
    return sign(det);
}

Triangulation Triangulation::from_triangles(const PunctureSet& P, std::vector<Triangle> triangles) {
    Triangulation T;
    T.punctures_ = P;
    std::map<std::pair<std::int32_t, Vec2>, std::int32_t> dest_of;
    for (auto& t : triangles) {
        normalize_lift(t);
        for (std::int32_t k = 0; k < 3; ++k) {
            std::int32_t a = t.corners[k], b = t.corners[next(k)];
            auto key = edge_key(a, b, t.pos[k], t.pos[next(k)]);
            dest_of[key] = key.first == a ? b : a;
        }
    }
    for (const auto& [key, dest] : dest_of) {
        Edge e;
        e.origin = key.first;
        e.dest = dest;
        e.vec = key.second;
        T.edges_.push_back(e);
    }
    T.triangles_ = std::move(triangles);
    T.relink();
    return T;
}

void Triangulation::relink() {
    std::map<std::pair<std::int32_t, Vec2>, std::int32_t> id;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        id[{edges_[e].origin, edges_[e].vec}] = static_cast<std::int32_t>(e);
        edges_[e].left_tri = edges_[e].right_tri = -1;
    }
    for (std::size_t ti = 0; ti < triangles_.size(); ++ti) {
        Triangle& t = triangles_[ti];
        normalize_lift(t);
        for (std::int32_t k = 0; k < 3; ++k) {
            std::int32_t a = t.corners[k], b = t.corners[next(k)];
            auto key = edge_key(a, b, t.pos[k], t.pos[next(k)]);
            auto it = id.find(key);
            if (it == id.end()) throw Error("inconsistent triangulation", "side without edge");
            t.sides[k] = {it->second, key.first == a && key.second == t.pos[next(k)] - t.pos[k] ? 1 : -1};
            Edge& e = edges_[it->second];
            auto& slot_t = t.sides[k].sign > 0 ? e.left_tri : e.right_tri;
            auto& slot_s = t.sides[k].sign > 0 ? e.left_side : e.right_side;
            if (slot_t != -1) throw Error("inconsistent triangulation", "edge side used twice");
            slot_t = static_cast<std::int32_t>(ti);
            slot_s = k;
        }
    }
    for (const auto& e : edges_)
        if (e.left_tri < 0 || e.right_tri < 0) throw Error("inconsistent triangulation", "unmatched edge");
    if (punctures_.size() + triangles_.size() != edges_.size())
        throw Error("inconsistent triangulation", "Euler characteristic");
}

std::pair<std::int32_t, std::int32_t> Triangulation::across(std::int32_t t, std::int32_t k) const {
    const Side& s = triangles_[t].sides[k];
    const Edge& e = edges_[s.edge];
    if (s.sign > 0) return {e.right_tri, e.right_side};
    return {e.left_tri, e.left_side};
}

Vec2 Triangulation::edge_origin_in(std::int32_t t, std::int32_t k) const {
    const Triangle& tr = triangles_[t];
    return tr.sides[k].sign > 0 ? tr.pos[k] : tr.pos[next(k)];
}

Vec2 Triangulation::transition(std::int32_t t, std::int32_t k) const {
    auto [u, j] = across(t, k);
    return edge_origin_in(t, k) - edge_origin_in(u, j);
}

Vec2 Triangulation::opposite_across(std::int32_t e) const {
    const Edge& ed = edges_[e];
    const Triangle& R = triangles_[ed.right_tri];
    return R.pos[prev(ed.right_side)] + transition(ed.left_tri, ed.left_side);
}

bool Triangulation::is_flippable(std::int32_t e) const {
    const Edge& ed = edges_[e];
    const Triangle& L = triangles_[ed.left_tri];
    std::int32_t k = ed.left_side;
    const Vec2 &u = L.pos[k], &v = L.pos[next(k)], &x = L.pos[prev(k)];
    Vec2 y = opposite_across(e);
    return orient(y, x, u) > 0 && orient(x, y, v) > 0;
}

bool Triangulation::violates_delaunay(std::int32_t e) const {
    const Edge& ed = edges_[e];
    const Triangle& L = triangles_[ed.left_tri];
    std::int32_t k = ed.left_side;
    return incircle(L.pos[k], L.pos[next(k)], L.pos[prev(k)], opposite_across(e)) > 0;
}

FlipStep Triangulation::flip(std::int32_t e) {
    if (!is_flippable(e)) throw Error("illegal flip", "edge " + std::to_string(e));
    const Edge ed = edges_[e];
    const Triangle L = triangles_[ed.left_tri];
    const Triangle R = triangles_[ed.right_tri];
    std::int32_t kl = ed.left_side, kr = ed.right_side;
    FlipStep step{e, L.sides[next(kl)].edge, L.sides[prev(kl)].edge, R.sides[next(kr)].edge, R.sides[prev(kr)].edge};

    std::int32_t U = L.corners[kl], V = L.corners[next(kl)], X = L.corners[prev(kl)], Y = R.corners[prev(kr)];
    const Vec2 &pu = L.pos[kl], &pv = L.pos[next(kl)], &px = L.pos[prev(kl)];
    Vec2 py = opposite_across(e);

    auto key = edge_key(Y, X, py, px);
    edges_[e].origin = key.first;
    edges_[e].dest = key.first == Y ? X : Y;
    edges_[e].vec = key.second;
    triangles_[ed.left_tri] = make_triangle({Y, X, U}, {py, px, pu});
    triangles_[ed.right_tri] = make_triangle({X, Y, V}, {px, py, pv});
    relink();
    return step;
}

std::vector<FlipStep> Triangulation::make_delaunay() {
    std::vector<FlipStep> steps;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto ei = static_cast<std::int32_t>(e);
            if (violates_delaunay(ei)) {
                steps.push_back(flip(ei));
                changed = true;
            }
        }
    }
    return steps;
}

Triangulation Triangulation::transformed(const std::array<Integer, 4>& m, const std::vector<std::int32_t>& perm) const {
    auto apply = [&](const Vec2& v) {
        return Vec2{Rational(m[0]) * v.x + Rational(m[1]) * v.y, Rational(m[2]) * v.x + Rational(m[3]) * v.y};
    };
    Triangulation out = *this;
    for (auto& e : out.edges_) {
        std::int32_t o = perm[static_cast<std::size_t>(e.origin)], d = perm[static_cast<std::size_t>(e.dest)];
        Vec2 v = apply(e.vec);
        if (lex_positive(v)) {
            e.origin = o;
            e.dest = d;
            e.vec = v;
        } else {
            e.origin = d;
            e.dest = o;
            e.vec = kZero - v;
        }
    }
    for (auto& t : out.triangles_) {
        for (auto& c : t.corners) c = perm[static_cast<std::size_t>(c)];
        for (auto& p : t.pos) p = apply(p);
    }
    out.relink();
    return out;
}

std::optional<std::int32_t> Triangulation::find_edge(std::int32_t origin, const Vec2& vec) const {
    const Vec2& from = punctures_[static_cast<std::size_t>(origin)];
    auto dest = punctures_.find(from + vec);
    if (!dest) return std::nullopt;
    auto key = edge_key(origin, static_cast<std::int32_t>(*dest), from, from + vec);
    for (std::size_t e = 0; e < edges_.size(); ++e)
        if (edges_[e].origin == key.first && edges_[e].vec == key.second) return static_cast<std::int32_t>(e);
    return std::nullopt;
}

void Triangulation::canonicalize() {
    std::vector<std::int32_t> order(edges_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        return std::pair(edges_[a].origin, edges_[a].vec) < std::pair(edges_[b].origin, edges_[b].vec);
    });
    std::vector<Edge> sorted;
    for (auto i : order) sorted.push_back(edges_[i]);
    edges_ = std::move(sorted);
    relink();

    for (auto& t : triangles_) {
        std::int32_t r = 0;
        for (std::int32_t k = 1; k < 3; ++k)
            if (t.sides[k].edge < t.sides[r].edge) r = k;
        Triangle rot = t;
        for (std::int32_t k = 0; k < 3; ++k) {
            rot.corners[k] = t.corners[(k + r) % 3];
            rot.pos[k] = t.pos[(k + r) % 3];
        }
        t = rot;
    }
    relink();
    auto tri_key = [](const Triangle& t) {
        return std::array<std::int32_t, 6>{t.sides[0].edge, t.sides[0].sign, t.sides[1].edge,
                                           t.sides[1].sign, t.sides[2].edge, t.sides[2].sign};
    };
    std::sort(triangles_.begin(), triangles_.end(),
              [&](const Triangle& a, const Triangle& b) { return tri_key(a) < tri_key(b); });
    relink();
}

namespace {

struct Location {
    std::size_t tri;
    Vec2 lifted;
    int on_side = -1;  // -1: interior
};

Location locate(const std::vector<Triangle>& tris, const Vec2& x) {
    for (std::size_t ti = 0; ti < tris.size(); ++ti) {
        const Triangle& t = tris[ti];
        Rational minx = t.pos[0].x, maxx = minx, miny = t.pos[0].y, maxy = miny;
        for (const auto& p : t.pos) {
            minx = std::min(minx, p.x);
            maxx = std::max(maxx, p.x);
            miny = std::min(miny, p.y);
            maxy = std::max(maxy, p.y);
        }
        Integer x0 = floor_of(minx - x.x), x1 = -floor_of(x.x - maxx);
        Integer y0 = floor_of(miny - x.y), y1 = -floor_of(x.y - maxy);
        for (Integer tx = x0; tx <= x1; ++tx)
            for (Integer ty = y0; ty <= y1; ++ty) {
                Vec2 y{x.x + Rational(tx), x.y + Rational(ty)};
                int zeros = 0, side = -1;
                bool inside = true;
                for (int k = 0; k < 3; ++k) {
                    int o = sign(orient(t.pos[k], t.pos[(k + 1) % 3], y));
                    if (o < 0) inside = false;
                    if (o == 0) {
                        ++zeros;
                        side = k;
                    }
                }
                if (!inside) continue;
                if (zeros > 1) throw Error("duplicate puncture", "point coincides with a vertex");
                return {ti, y, zeros == 1 ? side : -1};
            }
    }
    throw Error("inconsistent triangulation", "point not located");
}

}  // namespace

Triangulation Triangulation::build(const PunctureSet& P) {
    const Vec2& p0 = P[0];
    std::vector<Triangle> tris{
        make_triangle({0, 0, 0}, {p0, p0 + Vec2{1, 0}, p0 + Vec2{1, 1}}),
        make_triangle({0, 0, 0}, {p0, p0 + Vec2{1, 1}, p0 + Vec2{0, 1}}),
    };
    PunctureSet partial({p0});
    Triangulation T = from_triangles(partial, tris);
    for (std::size_t i = 1; i < P.size(); ++i) {
        auto vi = static_cast<std::int32_t>(i);
        std::vector<Triangle> cur = T.triangles_;
        Location loc = locate(cur, P[i]);
        const Triangle t = cur[loc.tri];
        std::vector<Triangle> added;
        std::set<std::size_t> removed{loc.tri};
        const Vec2& x = loc.lifted;
        if (loc.on_side < 0) {
            for (int k = 0; k < 3; ++k)
                added.push_back(make_triangle({t.corners[k], t.corners[(k + 1) % 3], vi},
                                              {t.pos[k], t.pos[(k + 1) % 3], x}));
        } else {
            std::int32_t k = loc.on_side;
            auto [u, j] = T.across(static_cast<std::int32_t>(loc.tri), k);
            Vec2 shift = T.transition(static_cast<std::int32_t>(loc.tri), k);
            const Triangle& n = cur[static_cast<std::size_t>(u)];
            std::int32_t A = t.corners[k], B = t.corners[next(k)], C = t.corners[prev(k)], D = n.corners[prev(j)];
            const Vec2 &pa = t.pos[k], &pb = t.pos[next(k)], &pc = t.pos[prev(k)];
            Vec2 pd = n.pos[prev(j)] + shift;
            added.push_back(make_triangle({A, vi, C}, {pa, x, pc}));
            added.push_back(make_triangle({vi, B, C}, {x, pb, pc}));
            added.push_back(make_triangle({B, vi, D}, {pb, x, pd}));
            added.push_back(make_triangle({vi, A, D}, {x, pa, pd}));
            removed.insert(static_cast<std::size_t>(u));
        }
        std::vector<Triangle> next_tris;
        for (std::size_t ti = 0; ti < cur.size(); ++ti)
            if (!removed.count(ti)) next_tris.push_back(cur[ti]);
        for (auto& a : added) next_tris.push_back(std::move(a));
        std::vector<Vec2> pts(P.points().begin(), P.points().begin() + static_cast<std::ptrdiff_t>(i + 1));
        T = from_triangles(PunctureSet(pts), std::move(next_tris));
    }
    T.make_delaunay();
    T.canonicalize();
    return T;
}

std::string Triangulation::hash() const {
    std::string data;
    for (const auto& p : punctures_.points()) data += format_rational(p.x) + "," + format_rational(p.y) + ";";
    data += "|";
    for (const auto& e : edges_)
        data += std::to_string(e.origin) + ">" + std::to_string(e.dest) + ":" + format_rational(e.vec.x) + "," +
                format_rational(e.vec.y) + ";";
    data += "|";
    for (const auto& t : triangles_)
        for (const auto& s : t.sides) data += std::to_string(s.edge) + (s.sign > 0 ? "+" : "-");
    std::ostringstream out;
    out << "tri-v1:" << std::hex << fnv1a(data);
    return out.str();
}

std::string Triangulation::describe() const {
    std::ostringstream out;
    out << "vertices " << punctures_.size() << "\n";
    for (std::size_t i = 0; i < punctures_.size(); ++i)
        out << "  v" << i << " " << format_rational(punctures_[i].x) << "," << format_rational(punctures_[i].y) << "\n";
    out << "edges " << edges_.size() << "\n";
    for (std::size_t e = 0; e < edges_.size(); ++e)
        out << "  e" << e << " v" << edges_[e].origin << " -> v" << edges_[e].dest << " by ("
            << format_rational(edges_[e].vec.x) << "," << format_rational(edges_[e].vec.y) << ")\n";
    out << "triangles " << triangles_.size() << "\n";
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        out << "  t" << t;
        for (const auto& s : triangles_[t].sides) out << " " << (s.sign > 0 ? "+" : "-") << "e" << s.edge;
        out << "\n";
    }
    return out.str();
}

}  // namespace curvelab::tri
