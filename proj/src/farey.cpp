#include "curvelab/farey.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <random>
#include <set>
#include <sstream>

namespace curvelab::farey {

namespace {

Integer abs_int(const Integer& v) { return v.sign() < 0 ? Integer(-v) : v; }

Integer floor_div(const Integer& a, const Integer& b) {
    Integer q = a / b;
    if ((a % b != 0) && ((a.sign() < 0) != (b.sign() < 0))) q -= 1;
    return q;
}

/// SL(2,Z) frame sending s to 1/0: returns M with M s = (1,0) and its inverse.
void frame_at(const Slope& s, ToralMatrix& to_inf, ToralMatrix& back) {
    // Find (x, y) with p*y - q*x = 1; then back = [[p, x], [q, y]].
    Integer u, v;
    Integer g = ext_gcd(s.p(), Integer(-s.q()), u, v);
    if (g != 1) throw Error("not a curve class", s.str());
    // p*u + (-q)*v = 1  =>  y = u, x = v
    back = ToralMatrix{s.p(), v, s.q(), u};
    to_inf = back.inverse();
}

std::int64_t run_steps(std::int64_t other, std::int64_t self, const Integer& run) {
    std::int64_t steps = run > 3 ? 3 : run.convert_to<std::int64_t>();
    for (std::int64_t i = 0; i < steps; ++i) self = std::min(other, self) + 1;
    return self;
}

/// Distance from 1/0 to X/Y (Y >= 0, primitive).
std::int64_t distance_from_infinity(const Integer& X, const Integer& Y) {
    if (Y == 0) return 0;
    if (Y == 1) return 1;
    const Integer y = Y;
    const Integer x = X - floor_div(X, Y) * Y;  // in (0, Y)
    Integer a = 0, b = 1, c = 1, d = 1;          // left 0/1, right 1/1
    std::int64_t dl = 1, dr = 1;
    for (;;) {
        Integer mx = a + c, my = b + d;
        if (mx == x && my == y) return std::min(dl, dr) + 1;
        if (x * my < mx * y) {
            Integer g = x * b - a * y;
            Integer h = c * y - x * d;
            Integer k = h / g;
            bool hits = (h % g == 0);
            Integer run = hits ? Integer(k - 1) : k;
            c += run * a;
            d += run * b;
            dr = run_steps(dl, dr, run);
            if (hits) return std::min(dl, dr) + 1;
        } else {
            Integer g = c * y - x * d;
            Integer h = x * b - a * y;
            Integer k = h / g;
            bool hits = (h % g == 0);
            Integer run = hits ? Integer(k - 1) : k;
            a += run * c;
            b += run * d;
            dl = run_steps(dr, dl, run);
            if (hits) return std::min(dl, dr) + 1;
        }
    }
}

struct Ladder {
    std::vector<std::pair<Integer, Integer>> vertices;  // in the frame where s = 1/0
    std::vector<std::vector<std::size_t>> adjacency;
    std::size_t target = 0;

    std::size_t add(Integer p, Integer q) {
        vertices.emplace_back(std::move(p), std::move(q));
        adjacency.emplace_back();
        return vertices.size() - 1;
    }
    void link(std::size_t i, std::size_t j) {
        adjacency[i].push_back(j);
        adjacency[j].push_back(i);
    }
};

/// Materializes every triangle the hyperbolic geodesic from 1/0 to x/y
/// crosses (x in (0, y), y >= 2). Every Farey geodesic between the two
/// endpoints stays inside this strip.
Ladder build_ladder(const Integer& x, const Integer& y, std::size_t budget) {
    Ladder L;
    std::size_t inf = L.add(1, 0);
    std::size_t li = L.add(0, 1);
    std::size_t ri = L.add(1, 1);
    L.link(inf, li);
    L.link(inf, ri);
    L.link(li, ri);
    Integer a = 0, b = 1, c = 1, d = 1;
    for (;;) {
        Integer mx = a + c, my = b + d;
        if (mx == x && my == y) {
            std::size_t t = L.add(mx, my);
            L.link(t, li);
            L.link(t, ri);
            L.target = t;
            return L;
        }
        bool replace_right = x * my < mx * y;
        Integer g = replace_right ? Integer(x * b - a * y) : Integer(c * y - x * d);
        Integer h = replace_right ? Integer(c * y - x * d) : Integer(x * b - a * y);
        Integer k = h / g;
        Integer run = (h % g == 0) ? Integer(k - 1) : k;
        if (run + L.vertices.size() > budget) throw Error("budget exceeded", "Farey ladder too long");
        std::int64_t n = run.convert_to<std::int64_t>();
        for (std::int64_t i = 0; i < n; ++i) {
            if (replace_right) {
                c += a;
                d += b;
                std::size_t w = L.add(c, d);
                L.link(w, li);
                L.link(w, ri);
                ri = w;
            } else {
                a += c;
                b += d;
                std::size_t w = L.add(a, b);
                L.link(w, li);
                L.link(w, ri);
                li = w;
            }
        }
    }
}

}  // namespace

Slope::Slope(Integer p, Integer q) : p_(std::move(p)), q_(std::move(q)) {
    if (p_ == 0 && q_ == 0) throw Error("not a curve class", "zero vector");
    Integer g = boost::multiprecision::gcd(abs_int(p_), abs_int(q_));
    if (g != 1) throw Error("not a curve class", p_.str() + "/" + q_.str() + " is not primitive");
    if (q_ < 0 || (q_ == 0 && p_ < 0)) {
        p_ = -p_;
        q_ = -q_;
    }
}

Slope Slope::parse(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) throw Error("parse", "slope must be p/q: " + std::string(text));
    return Slope(parse_integer(text.substr(0, slash)), parse_integer(text.substr(slash + 1)));
}

Integer intersection_number(const Slope& s, const Slope& t) { return abs_int(s.p() * t.q() - s.q() * t.p()); }

ToralMatrix ToralMatrix::parse(std::string_view text) {
    std::vector<Integer> v;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        if (comma == std::string_view::npos) comma = text.size();
        v.push_back(parse_integer(text.substr(start, comma - start)));
        start = comma + 1;
    }
    if (v.size() != 4) throw Error("parse", "matrix must be a,b,c,d: " + std::string(text));
    ToralMatrix m{v[0], v[1], v[2], v[3]};
    if (m.det() != 1) throw Error("parse", "matrix determinant must be 1: " + std::string(text));
    return m;
}

std::string ToralMatrix::str() const { return a.str() + "," + b.str() + "," + c.str() + "," + d.str(); }

ToralMatrix ToralMatrix::pow(std::int64_t n) const {
    ToralMatrix base = n < 0 ? inverse() : *this;
    std::uint64_t e = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
    ToralMatrix out;
    while (e) {
        if (e & 1) out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

Vec2 ToralMatrix::apply(const Vec2& v) const {
    return {Rational(a) * v.x + Rational(b) * v.y, Rational(c) * v.x + Rational(d) * v.y};
}

Slope matrix_act(const ToralMatrix& A, const Slope& s) {
    return Slope(A.a * s.p() + A.b * s.q(), A.c * s.p() + A.d * s.q());
}

MatrixClass classify_matrix(const ToralMatrix& A) {
    if ((A.a == 1 && A.b == 0 && A.c == 0 && A.d == 1) || (A.a == -1 && A.b == 0 && A.c == 0 && A.d == -1))
        return MatrixClass::identity;
    Integer t = abs_int(A.trace());
    if (t < 2) return MatrixClass::elliptic;
    if (t == 2) return MatrixClass::parabolic;
    return MatrixClass::hyperbolic;
}

std::string to_string(MatrixClass c) {
    switch (c) {
        case MatrixClass::identity: return "identity";
        case MatrixClass::elliptic: return "elliptic";
        case MatrixClass::parabolic: return "parabolic";
        case MatrixClass::hyperbolic: return "hyperbolic";
    }
    return "?";
}

std::int64_t farey_distance(const Slope& s, const Slope& t) {
    if (s == t) return 0;
    ToralMatrix to_inf, back;
    frame_at(s, to_inf, back);
    Integer X = to_inf.a * t.p() + to_inf.b * t.q();
    Integer Y = to_inf.c * t.p() + to_inf.d * t.q();
    if (Y < 0) {
        X = -X;
        Y = -Y;
    }
    return distance_from_infinity(X, Y);
}

std::vector<Slope> farey_geodesic(const Slope& s, const Slope& t, std::size_t ladder_budget) {
    if (s == t) return {s};
    ToralMatrix to_inf, back;
    frame_at(s, to_inf, back);
    Integer X = to_inf.a * t.p() + to_inf.b * t.q();
    Integer Y = to_inf.c * t.p() + to_inf.d * t.q();
    if (Y < 0) {
        X = -X;
        Y = -Y;
    }
    if (Y <= 1) return {s, t};
    Integer shift = floor_div(X, Y);
    Ladder L = build_ladder(X - shift * Y, Y, ladder_budget);

    std::vector<Slope> original;
    original.reserve(L.vertices.size());
    for (const auto& [vp, vq] : L.vertices) {
        Integer px = vp + shift * vq;
        original.emplace_back(back.a * px + back.b * vq, back.c * px + back.d * vq);
    }
    std::vector<std::int64_t> dist(L.vertices.size(), -1);
    std::deque<std::size_t> queue{L.target};
    dist[L.target] = 0;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t w : L.adjacency[v])
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
    }
    std::vector<Slope> path{original[0]};
    std::size_t cur = 0;
    while (cur != L.target) {
        std::optional<std::size_t> best;
        for (std::size_t w : L.adjacency[cur])
            if (dist[w] == dist[cur] - 1 && (!best || original[w] < original[*best])) best = w;
        cur = *best;
        path.push_back(original[cur]);
    }
    return path;
}

// ---------------------------------------------------------------------------
// Brute-force oracle

namespace {

std::int64_t ext_gcd64(std::int64_t a, std::int64_t b, std::int64_t& x, std::int64_t& y) {
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
        tmp = old_t - q * t;
        old_t = t;
        t = tmp;
    }
    if (old_r < 0) {
        old_r = -old_r;
        old_s = -old_s;
        old_t = -old_t;
    }
    x = old_s;
    y = old_t;
    return old_r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    a = a < 0 ? -a : a;
    b = b < 0 ? -b : b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t ceil_div64(std::int64_t a, std::int64_t b) {  // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}
std::int64_t floor_div64(std::int64_t a, std::int64_t b) {  // b > 0
    return a >= 0 ? a / b : -((-a + b - 1) / b);
}

}  // namespace

CapGraph::CapGraph(std::int64_t cap) : cap_(cap) {
    if (cap < 1) throw Error("invalid cap", std::to_string(cap));
    dense_index_.assign(static_cast<std::size_t>((2 * cap + 1) * (cap + 1)), -1);
    for (std::int64_t p = -cap; p <= cap; ++p)
        for (std::int64_t q = 0; q <= cap; ++q) {
            if (q == 0 && p != 1) continue;
            if (gcd64(p, q) != 1) continue;
            dense_index_[static_cast<std::size_t>((p + cap) * (cap + 1) + q)] =
                static_cast<std::int64_t>(slopes_.size());
            slopes_.emplace_back(p, q);
        }
    adjacency_.resize(slopes_.size());
    for (std::size_t i = 0; i < slopes_.size(); ++i) {
        auto [p, q] = slopes_[i];
        auto push = [&](std::int64_t x, std::int64_t y) {
            std::int64_t j = index_of(x, y);
            if (j >= 0 && (y > 0 || x == 1)) adjacency_[i].push_back(static_cast<std::int32_t>(j));
        };
        if (q == 0) {
            for (std::int64_t x = -cap; x <= cap; ++x) push(x, 1);
            continue;
        }
        std::int64_t u, v;
        ext_gcd64(p, -q, u, v);  // p*u - q*v = 1
        for (std::int64_t eps : {1, -1}) {
            std::int64_t y0 = eps * u, x0 = eps * v;  // p*y0 - q*x0 = eps
            std::int64_t kmin = ceil_div64(-y0, q), kmax = floor_div64(cap - y0, q);
            for (std::int64_t k = kmin; k <= kmax; ++k) {
                std::int64_t x = x0 + k * p, y = y0 + k * q;
                if (x < -cap || x > cap) continue;
                push(x, y);
            }
        }
        std::sort(adjacency_[i].begin(), adjacency_[i].end());
        adjacency_[i].erase(std::unique(adjacency_[i].begin(), adjacency_[i].end()), adjacency_[i].end());
    }
}

std::int64_t CapGraph::index_of(std::int64_t p, std::int64_t q) const {
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    if (p < -cap_ || p > cap_ || q > cap_) return -1;
    return dense_index_[static_cast<std::size_t>((p + cap_) * (cap_ + 1) + q)];
}

std::vector<std::int32_t> CapGraph::bfs(std::size_t source, std::int32_t max_radius) const {
    std::vector<std::int32_t> dist(slopes_.size(), -1);
    std::vector<std::int32_t> frontier{static_cast<std::int32_t>(source)}, next;
    dist[source] = 0;
    std::int32_t level = 0;
    while (!frontier.empty() && (max_radius < 0 || level < max_radius)) {
        next.clear();
        for (std::int32_t v : frontier)
            for (std::int32_t w : adjacency_[static_cast<std::size_t>(v)])
                if (dist[static_cast<std::size_t>(w)] < 0) {
                    dist[static_cast<std::size_t>(w)] = level + 1;
                    next.push_back(w);
                }
        frontier.swap(next);
        ++level;
    }
    return dist;
}

BallResult farey_ball_bfs(const Slope& center, std::int64_t radius, std::int64_t cap, std::int64_t max_cap) {
    if (radius < 0) throw Error("invalid radius", std::to_string(radius));
    if (abs_int(center.p()) > cap || center.q() > cap) throw Error("invalid cap", "center outside cap");
    const std::int64_t cp = to_i64(center.p()), cq = to_i64(center.q());

    BallResult result;
    result.requested_cap = cap;
    auto collect = [&](const CapGraph& g) {
        std::map<Slope, std::int64_t> out;
        auto dist = g.bfs(static_cast<std::size_t>(g.index_of(cp, cq)), static_cast<std::int32_t>(radius));
        for (std::size_t i = 0; i < g.size(); ++i) {
            auto [p, q] = g.slope_at(i);
            if (dist[i] < 0 || p < -cap || p > cap || q > cap) continue;
            out.emplace(Slope(p, q), dist[i]);
        }
        return out;
    };
    std::int64_t current = cap;
    result.caps_tried.push_back(current);
    auto previous = collect(CapGraph(current));
    result.distances = previous;
    for (;;) {
        std::int64_t bigger = current * 2;
        if (bigger > max_cap) {
            result.stabilized_cap = 0;
            throw BudgetExceeded("cap would exceed " + std::to_string(max_cap), result);
        }
        result.caps_tried.push_back(bigger);
        auto next = collect(CapGraph(bigger));
        result.distances = next;
        if (next == previous) {
            result.stabilized_cap = bigger;
            return result;
        }
        previous = std::move(next);
        current = bigger;
    }
}

// ---------------------------------------------------------------------------
// Translation length

hyp::HypParams farey_default_params() { return hyp::derive_constants(1, 2); }

bool verify_certificate(const ToralMatrix& A, const AxisCertificate& cert) {
    if (cert.period < 1 || cert.displacement < 1) return false;
    if (cert.tl != Rational(cert.displacement, cert.period)) return false;
    if (cert.geodesic.size() != static_cast<std::size_t>(cert.displacement) + 1) return false;
    ToralMatrix Am = A.pow(cert.period);
    if (cert.geodesic.front() != cert.base || cert.geodesic.back() != matrix_act(Am, cert.base)) return false;
    for (std::size_t i = 0; i + 1 < cert.geodesic.size(); ++i)
        if (intersection_number(cert.geodesic[i], cert.geodesic[i + 1]) != 1) return false;
    ToralMatrix power = Am;
    for (std::int64_t k = 1; k <= cert.verified_multiples; ++k) {
        if (farey_distance(cert.base, matrix_act(power, cert.base)) != k * cert.displacement) return false;
        power = power * Am;
    }
    return true;
}

FareyTL farey_tl(const ToralMatrix& A, std::int64_t m_max, std::int64_t k_max) {
    return farey_tl(A, m_max, k_max, farey_default_params());
}

FareyTL farey_tl(const ToralMatrix& A, std::int64_t m_max, std::int64_t k_max, const hyp::HypParams& params) {
    if (A.det() != 1) throw Error("invalid matrix", "determinant must be 1");
    if (m_max < 1 || k_max < 1) throw Error("invalid budget", "m_max and k_max must be positive");
    FareyTL out;
    out.kind = classify_matrix(A);
    if (out.kind != MatrixClass::hyperbolic) {
        out.bracket.exact = Rational(0);
        out.bracket.raise_lower(0, "classification", "|trace| <= 2: " + to_string(out.kind));
        out.bracket.lower_upper(0, "classification", "|trace| <= 2: " + to_string(out.kind));
        out.status = "exact 0 (" + to_string(out.kind) + ")";
        return out;
    }

    // Orbit sample from 1/0 backs the Fekete and Morse bounds in every case.
    const Slope c0(1, 0);
    const std::int64_t horizon = std::max<std::int64_t>(m_max * k_max, params.N);
    hyp::OrbitSample sample("1/0");
    {
        ToralMatrix power = A;
        for (std::int64_t k = 1; k <= horizon; ++k) {
            sample.add(k, farey_distance(c0, matrix_act(power, c0)));
            power = power * A;
        }
    }
    out.bracket.lower_upper(hyp::fekete_upper(sample), "fekete", "min_k d(1/0, A^k 1/0)/k, k <= " + std::to_string(horizon));
    hyp::PathDistances window;
    for (std::int64_t g = 1; g < params.N && g <= horizon; ++g) window[{0, g}] = sample.at(g);
    for (std::int64_t i = 1; i < params.N; ++i)
        for (std::int64_t j = i + 1; j < params.N && j - i < params.N; ++j) window[{i, j}] = sample.at(j - i);
    if (params.N > 1 && hyp::local_quasigeodesic_audit(window, params.N, params.K)) {
        Rational best = 0;
        for (std::int64_t k = 1; k <= horizon; ++k) best = std::max(best, hyp::quasigeodesic_lower(sample, k, params));
        out.bracket.raise_lower(best, "morse",
                                "max_k d_k/k - 2M/k with M=" + format_rational(params.M) + " (" + params.formula + ")");
    }

    // Candidate base vertices: orbit points of standard slopes and the
    // geodesic vertices between far-apart orbit points.
    std::set<Slope> candidates;
    const std::int64_t J = 3;
    for (const Slope& s : {Slope(1, 0), Slope(0, 1), Slope(1, 1), Slope(-1, 1)}) {
        Slope back = matrix_act(A.pow(-J), s), fwd = matrix_act(A.pow(J), s);
        for (std::int64_t j = -J; j <= J; ++j) candidates.insert(matrix_act(A.pow(j), s));
        for (const Slope& v : farey_geodesic(back, fwd)) candidates.insert(v);
    }

    for (std::int64_t m = 1; m <= m_max && !out.certificate; ++m) {
        ToralMatrix Am = A.pow(m);
        for (const Slope& c : candidates) {
            std::int64_t D = farey_distance(c, matrix_act(Am, c));
            if (D == 0) continue;
            bool ok = true;
            ToralMatrix power = Am * Am;
            for (std::int64_t k = 2; k <= k_max && ok; ++k) {
                ok = farey_distance(c, matrix_act(power, c)) == k * D;
                power = power * Am;
            }
            if (!ok) continue;
            AxisCertificate cert;
            cert.base = c;
            cert.period = m;
            cert.displacement = D;
            cert.tl = Rational(D, m);
            cert.geodesic = farey_geodesic(c, matrix_act(Am, c));
            cert.verified_multiples = k_max;
            out.certificate = std::move(cert);
            break;
        }
    }

    if (out.certificate) {
        const auto& cert = *out.certificate;
        std::string detail = "axis at " + cert.base.str() + ", m=" + std::to_string(cert.period) +
                             ", D=" + std::to_string(cert.displacement) + ", multiples<=" + std::to_string(k_max);
        out.bracket.raise_lower(cert.tl, "axis", detail);
        out.bracket.lower_upper(cert.tl, "axis", detail);
        out.bracket.exact = cert.tl;
        out.status = "exact";
    } else {
        out.status = "no axis found <= m_max";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Thinness diagnostic

std::int64_t triangle_thinness(const Slope& x, const Slope& y, const Slope& z) {
    std::array<std::vector<Slope>, 3> sides{farey_geodesic(x, y), farey_geodesic(y, z), farey_geodesic(z, x)};
    std::int64_t worst = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (const Slope& v : sides[i]) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (std::size_t j = 0; j < 3; ++j) {
                if (j == i) continue;
                for (const Slope& w : sides[j]) best = std::min(best, farey_distance(v, w));
            }
            worst = std::max(worst, best);
        }
    return worst;
}

std::int64_t thinness_audit(std::int64_t sample_triangles, std::int64_t radius, std::uint64_t seed, std::int64_t cap) {
    CapGraph g(cap);
    auto dist = g.bfs(static_cast<std::size_t>(g.index_of(1, 0)), static_cast<std::int32_t>(radius));
    std::vector<Slope> ball;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (dist[i] >= 0) ball.emplace_back(g.slope_at(i).first, g.slope_at(i).second);
    std::mt19937_64 rng(seed);
    std::int64_t worst = 0;
    for (std::int64_t t = 0; t < sample_triangles; ++t) {
        const Slope& x = ball[rng() % ball.size()];
        const Slope& y = ball[rng() % ball.size()];
        const Slope& z = ball[rng() % ball.size()];
        worst = std::max(worst, triangle_thinness(x, y, z));
    }
    return worst;
}

}  // namespace curvelab::farey
