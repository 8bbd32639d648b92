#include "curvelab/finecurves.hpp"

#include <algorithm>
#include <sstream>

namespace curvelab::fine {

namespace {

Rational dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

Integer ceil_of(const Rational& r) { return -floor_of(-r); }

bool is_integer(const Rational& r) { return denominator(r) == 1; }

enum class Hit { none, interior, touch, overlap };

struct SegHit {
    Hit kind = Hit::none;
    Vec2 p;
    Rational ta, tb;
};

SegHit intersect(const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
    Vec2 r = p1 - p0, s = q1 - q0;
    Rational den = cross(r, s);
    SegHit h;
    if (den == 0) {
        if (cross(q0 - p0, r) != 0) return h;
        Rational rr = dot(r, r);
        Rational t0 = dot(q0 - p0, r) / rr, t1 = dot(q1 - p0, r) / rr;
        Rational lo = std::min(t0, t1), hi = std::max(t0, t1);
        if (hi < 0 || lo > 1) return h;
        if (hi == 0 || lo == 1) {
            h.kind = Hit::touch;
            h.ta = hi == 0 ? Rational(0) : Rational(1);
            h.p = hi == 0 ? p0 : p1;
            return h;
        }
        h.kind = Hit::overlap;
        return h;
    }
    Rational ta = cross(q0 - p0, s) / den, tb = cross(q0 - p0, r) / den;
    if (ta < 0 || ta > 1 || tb < 0 || tb > 1) return h;
    h.ta = ta;
    h.tb = tb;
    h.p = p0 + ta * r;
    h.kind = (ta > 0 && ta < 1 && tb > 0 && tb < 1) ? Hit::interior : Hit::touch;
    return h;
}

struct Box {
    Rational x0, y0, x1, y1;
};

Box box_of(std::initializer_list<Vec2> pts) {
    Box b{pts.begin()->x, pts.begin()->y, pts.begin()->x, pts.begin()->y};
    for (const auto& p : pts) {
        b.x0 = std::min(b.x0, p.x);
        b.y0 = std::min(b.y0, p.y);
        b.x1 = std::max(b.x1, p.x);
        b.y1 = std::max(b.y1, p.y);
    }
    return b;
}

// Integer translations t with (B + t) overlapping A.
template <class F>
void for_each_shift(const Box& A, const Box& B, F&& f) {
    Integer x0 = ceil_of(A.x0 - B.x1), x1 = floor_of(A.x1 - B.x0);
    Integer y0 = ceil_of(A.y0 - B.y1), y1 = floor_of(A.y1 - B.y0);
    for (Integer x = x0; x <= x1; ++x)
        for (Integer y = y0; y <= y1; ++y) f(Vec2{Rational(x), Rational(y)});
}

std::string fmt(const Vec2& p) { return "(" + format_rational(p.x) + ", " + format_rational(p.y) + ")"; }

bool inside(const std::vector<Vec2>& poly, const Vec2& p) {
    bool in = false;
    for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
        const Vec2& u = poly[i];
        const Vec2& v = poly[(i + 1) % n];
        if ((u.y > p.y) != (v.y > p.y)) {
            Rational x = u.x + (p.y - u.y) * (v.x - u.x) / (v.y - u.y);
            if (p.x < x) in = !in;
        }
    }
    return in;
}

// Some k with t = k d, if any.
std::optional<Integer> multiple_of(const Vec2& t, const Vec2& d) {
    if (cross(t, d) != 0) return std::nullopt;
    Rational k = dot(t, d) / dot(d, d);
    if (!is_integer(k)) return std::nullopt;
    return numerator(k);
}

}  // namespace

Vec2 PolyCurve::lifted(std::int64_t idx) const {
    auto n = static_cast<std::int64_t>(vertices_.size());
    std::int64_t k = idx >= 0 ? idx / n : -((-idx + n - 1) / n);
    return vertices_[static_cast<std::size_t>(idx - k * n)] + Rational(k) * displacement_;
}

PolyCurve PolyCurve::validate(std::vector<Vec2> vertices, const Vec2& displacement) {
    if (vertices.empty()) throw Error("invalid curve", "no vertices");
    if (!is_integer(displacement.x) || !is_integer(displacement.y))
        throw Error("invalid curve", "displacement must be integral");
    if (displacement.x == 0 && displacement.y == 0) throw Error("separating/inessential fine curve");
    Vec2 base = floor_vec(vertices[0]);
    for (auto& v : vertices) v = v - base;
    PolyCurve c;
    c.vertices_ = std::move(vertices);
    c.displacement_ = displacement;
    const auto n = static_cast<std::int64_t>(c.size());
    for (std::int64_t i = 0; i < n; ++i)
        if (c.lifted(i) == c.lifted(i + 1)) throw Error("invalid curve", "repeated vertex " + fmt(c.lifted(i)));

    for (std::int64_t i = 0; i < n; ++i) {
        Vec2 a0 = c.lifted(i), a1 = c.lifted(i + 1);
        for (std::int64_t j = i; j < n; ++j) {
            Vec2 b0 = c.lifted(j), b1 = c.lifted(j + 1);
            for_each_shift(box_of({a0, a1}), box_of({b0, b1}), [&](const Vec2& t) {
                bool zero = t.x == 0 && t.y == 0;
                if (i == j && zero) return;
                SegHit h = intersect(a0, a1, b0 + t, b1 + t);
                if (h.kind == Hit::none) return;
                if (h.kind == Hit::touch) {
                    if (auto k = multiple_of(t, displacement)) {
                        Integer d = Integer(j) + Integer(n) * *k - Integer(i);
                        if (d == 1 && h.p == a1) return;
                        if (d == -1 && h.p == a0) return;
                    }
                }
                throw Error("self-crossing", "segments " + std::to_string(i) + " and " + std::to_string(j) +
                                                 " meet near " + fmt(reduce_mod1(h.kind == Hit::overlap ? a0 : h.p)));
            });
        }
    }
    return c;
}

std::string PolyCurve::serialize() const {
    std::ostringstream out;
    out << "displacement " << format_rational(displacement_.x) << " " << format_rational(displacement_.y) << "\n";
    for (const auto& v : vertices_) out << format_rational(v.x) << " " << format_rational(v.y) << "\n";
    return out.str();
}

PolyCurve PolyCurve::parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<Vec2> disp;
    std::vector<Vec2> vs;
    while (std::getline(in, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::string x, y, extra;
        if (!(ls >> x)) continue;
        if (x == "displacement") {
            std::string p, q;
            if (!(ls >> p >> q) || (ls >> extra)) throw Error("parse", "bad displacement line");
            disp = Vec2{Rational(parse_integer(p)), Rational(parse_integer(q))};
            continue;
        }
        if (!(ls >> y) || (ls >> extra)) throw Error("parse", "bad vertex line '" + line + "'");
        vs.push_back({parse_rational(x), parse_rational(y)});
    }
    if (!disp) throw Error("parse", "missing displacement line");
    return validate(std::move(vs), *disp);
}

PolyCurve straight_loop(const Vec2& start, std::int64_t p, std::int64_t q) {
    return PolyCurve::validate({start}, {Rational(p), Rational(q)});
}

std::vector<Crossing> transverse_intersections(const PolyCurve& a, const PolyCurve& b) {
    std::vector<Crossing> out;
    for (std::size_t i = 0; i < a.size(); ++i) {
        Vec2 a0 = a.lifted(static_cast<std::int64_t>(i)), a1 = a.lifted(static_cast<std::int64_t>(i) + 1);
        for (std::size_t j = 0; j < b.size(); ++j) {
            Vec2 b0 = b.lifted(static_cast<std::int64_t>(j)), b1 = b.lifted(static_cast<std::int64_t>(j) + 1);
            for_each_shift(box_of({a0, a1}), box_of({b0, b1}), [&](const Vec2& t) {
                SegHit h = intersect(a0, a1, b0 + t, b1 + t);
                if (h.kind == Hit::none) return;
                if (h.kind == Hit::overlap) throw Error("perturb inputs", "curves share a segment");
                if (h.kind == Hit::touch) throw Error("perturb inputs", "vertex on the other curve at " + fmt(reduce_mod1(h.p)));
                out.push_back({reduce_mod1(h.p), i, j, t, h.ta, h.tb});
            });
        }
    }
    std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.point < y.point; });
    return out;
}

namespace {

void check_off_curve(const PolyCurve& c, const tri::PunctureSet& P) {
    for (std::size_t i = 0; i < c.size(); ++i) {
        Vec2 a0 = c.lifted(static_cast<std::int64_t>(i)), a1 = c.lifted(static_cast<std::int64_t>(i) + 1);
        for (const auto& p : P.points())
            for_each_shift(box_of({a0, a1}), box_of({p}), [&](const Vec2& t) {
                Vec2 q = p + t;
                if (orient(a0, a1, q) == 0 && dot(q - a0, a1 - a0) >= 0 && dot(q - a1, a0 - a1) >= 0)
                    throw Error("puncture on curve", fmt(p));
            });
    }
}

Vec2 point_on(const PolyCurve& c, std::int64_t seg, const Rational& t) {
    Vec2 p0 = c.lifted(seg);
    return p0 + t * (c.lifted(seg + 1) - p0);
}

}  // namespace

std::optional<Bigon> find_empty_bigon(const PolyCurve& a, const PolyCurve& b, const tri::PunctureSet& P) {
    check_off_curve(a, P);
    check_off_curve(b, P);
    const auto X = transverse_intersections(a, b);
    const auto na = static_cast<std::int64_t>(a.size()), nb = static_cast<std::int64_t>(b.size());
    const Vec2 &da = a.displacement(), &db = b.displacement();
    const Rational D = cross(db, da);

    for (const auto& x : X) {
        const Rational local_x = Rational(static_cast<std::int64_t>(x.seg_a)) + x.t_a;
        // Next crossing along the lift of a with the same lift of b.
        std::optional<Rational> best;
        const Crossing* y = nullptr;
        Integer yk, ym;
        for (const auto& r : X) {
            Vec2 diff = r.shift - x.shift;  // = m db - k da
            const Rational local_r = Rational(static_cast<std::int64_t>(r.seg_a)) + r.t_a;
            Integer k, m;
            if (D != 0) {
                Rational mr = cross(diff, da) / D, kr = -cross(db, diff) / D;
                if (!is_integer(mr) || !is_integer(kr)) continue;
                m = numerator(mr);
                k = numerator(kr);
            } else {
                auto c = multiple_of(diff, da);
                if (!c) continue;
                int eps = db == da ? 1 : -1;
                k = local_r > local_x ? 0 : 1;
                m = eps * (*c + k);
            }
            Rational pos = Rational(k * na) + local_r;
            if (pos <= local_x) continue;
            if (!best || pos < *best) {
                best = pos;
                y = &r;
                yk = k;
                ym = m;
            }
        }
        if (!y) continue;

        Bigon g;
        const auto ix = static_cast<std::int64_t>(x.seg_a);
        const auto iy = static_cast<std::int64_t>(yk) * na + static_cast<std::int64_t>(y->seg_a);
        g.boundary.push_back(point_on(a, ix, x.t_a));
        for (std::int64_t v = ix + 1; v <= iy; ++v) g.boundary.push_back(a.lifted(v));
        g.boundary.push_back(point_on(a, iy, y->t_a));
        const auto jx = static_cast<std::int64_t>(x.seg_b);
        const auto jy = static_cast<std::int64_t>(ym) * nb + static_cast<std::int64_t>(y->seg_b);
        const Rational pbx = Rational(jx) + x.t_b, pby = Rational(jy) + y->t_b;
        if (pby > pbx) {
            for (std::int64_t v = jy; v > jx; --v) g.boundary.push_back(b.lifted(v) + x.shift);
        } else {
            for (std::int64_t v = jy + 1; v <= jx; ++v) g.boundary.push_back(b.lifted(v) + x.shift);
        }

        Box box{g.boundary[0].x, g.boundary[0].y, g.boundary[0].x, g.boundary[0].y};
        for (const auto& v : g.boundary) {
            box.x0 = std::min(box.x0, v.x);
            box.y0 = std::min(box.y0, v.y);
            box.x1 = std::max(box.x1, v.x);
            box.y1 = std::max(box.y1, v.y);
        }
        bool empty = true;
        for (const auto& p : P.points()) {
            for_each_shift(box, box_of({p}), [&](const Vec2& t) {
                if (empty && inside(g.boundary, p + t)) empty = false;
            });
            if (!empty) break;
        }
        if (empty) return g;
    }
    return std::nullopt;
}

bool minimal_position_rel(const PolyCurve& a, const PolyCurve& b, const tri::PunctureSet& P) {
    return !find_empty_bigon(a, b, P);
}

tri::NormalCurve to_normal(const PolyCurve& a, const tri::TriPtr& T) {
    return tri::NormalCurve::normalize(T, tri::trace_polygon(*T, a.vertices(), a.displacement()));
}

tri::DistanceBracket fine_distance(const PolyCurve& a, const PolyCurve& b, const tri::PunctureSet& P,
                                   const tri::DistanceBudget& budget) {
    if (auto g = find_empty_bigon(a, b, P)) {
        std::string where;
        for (const auto& v : g->boundary) where += (where.empty() ? "" : " ") + fmt(v);
        throw Error("not in minimal position rel P", "empty bigon " + where);
    }
    auto T = tri::make_triangulation(P);
    return tri::distance_bracket(to_normal(a, T), to_normal(b, T), budget);
}

}  // namespace curvelab::fine
