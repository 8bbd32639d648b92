#pragma once

// Exact model of the Farey graph: vertices are slopes p/q (curve classes on
// the torus or once-punctured torus), edges join slopes meeting once.

#include "curvelab/hypcore.hpp"
#include "curvelab/numeric.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curvelab::farey {

/// Primitive integer pair up to sign. Canonical form: q > 0, or (1, 0).
class Slope {
public:
    Slope() : p_(1), q_(0) {}
    /// Throws Error("not a curve class") for (0,0) or non-primitive pairs.
    Slope(Integer p, Integer q);

    const Integer& p() const { return p_; }
    const Integer& q() const { return q_; }

    std::string str() const { return p_.str() + "/" + q_.str(); }
    static Slope parse(std::string_view text);

    friend bool operator==(const Slope& a, const Slope& b) { return a.p_ == b.p_ && a.q_ == b.q_; }
    friend bool operator<(const Slope& a, const Slope& b) {
        return a.p_ < b.p_ || (a.p_ == b.p_ && a.q_ < b.q_);
    }

private:
    Integer p_, q_;
};

inline Slope canonicalize(const Integer& p, const Integer& q) { return Slope(p, q); }

/// |p_s q_t - q_s p_t|
Integer intersection_number(const Slope& s, const Slope& t);

/// Row-major 2x2 integer matrix [[a, b], [c, d]] with determinant 1.
struct ToralMatrix {
    Integer a = 1, b = 0, c = 0, d = 1;

    static ToralMatrix identity() { return {}; }
    /// Parses "a,b,c,d"; throws Error("parse") unless the determinant is 1.
    static ToralMatrix parse(std::string_view text);
    std::string str() const;

    Integer det() const { return a * d - b * c; }
    Integer trace() const { return a + d; }
    ToralMatrix inverse() const { return {d, -b, -c, a}; }
    ToralMatrix pow(std::int64_t n) const;
    Vec2 apply(const Vec2& v) const;

    friend ToralMatrix operator*(const ToralMatrix& x, const ToralMatrix& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const ToralMatrix&, const ToralMatrix&) = default;
};

Slope matrix_act(const ToralMatrix& A, const Slope& s);

enum class MatrixClass { identity, elliptic, parabolic, hyperbolic };
MatrixClass classify_matrix(const ToralMatrix& A);
std::string to_string(MatrixClass c);

/// Exact graph distance, by a run-compressed walk down the triangle ladder
/// between the two slopes.
std::int64_t farey_distance(const Slope& s, const Slope& t);

/// Geodesic from s to t; at every step the lexicographically smallest
/// canonical neighbor that lies on a geodesic is taken. `ladder_budget`
/// bounds the number of ladder vertices materialized.
std::vector<Slope> farey_geodesic(const Slope& s, const Slope& t, std::size_t ladder_budget = 1u << 20);

/// Brute-force oracle: the finite subgraph on slopes with |p|, |q| <= cap.
class CapGraph {
public:
    explicit CapGraph(std::int64_t cap);

    std::int64_t cap() const { return cap_; }
    std::size_t size() const { return slopes_.size(); }
    /// Index of (p, q) in canonical form, or -1 if outside the cap.
    std::int64_t index_of(std::int64_t p, std::int64_t q) const;
    std::pair<std::int64_t, std::int64_t> slope_at(std::size_t i) const { return slopes_[i]; }
    const std::vector<std::int32_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
    /// BFS distances from `source`; -1 for unreached (or beyond max_radius).
    std::vector<std::int32_t> bfs(std::size_t source, std::int32_t max_radius = -1) const;

private:
    std::int64_t cap_;
    std::vector<std::pair<std::int64_t, std::int64_t>> slopes_;
    std::vector<std::int64_t> dense_index_;
    std::vector<std::vector<std::int32_t>> adjacency_;
};

struct BallResult {
    std::map<Slope, std::int64_t> distances;  // slopes within the requested cap
    std::int64_t requested_cap = 0;
    std::int64_t stabilized_cap = 0;  // the larger of the two agreeing caps
    std::vector<std::int64_t> caps_tried;
};

/// All slopes with |p|,|q| <= cap at distance <= radius from center. The cap
/// doubles until two successive caps agree on those distances; exceeding
/// `max_cap` throws BudgetExceeded carrying the last partial result.
BallResult farey_ball_bfs(const Slope& center, std::int64_t radius, std::int64_t cap, std::int64_t max_cap = 1 << 12);

class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& detail, BallResult partial)
        : Error("budget exceeded", detail), partial_(std::move(partial)) {}
    const BallResult& partial() const { return partial_; }

private:
    BallResult partial_;
};

/// Witness that A^m preserves the geodesic through c and A^m c.
struct AxisCertificate {
    Slope base;
    std::int64_t period = 0;
    std::int64_t displacement = 0;
    Rational tl;
    std::vector<Slope> geodesic;  // c = geodesic.front(), A^m c = geodesic.back()
    std::int64_t verified_multiples = 0;
};

/// Checks every stated invariant of a certificate against `A` from scratch.
bool verify_certificate(const ToralMatrix& A, const AxisCertificate& cert);

struct FareyTL {
    MatrixClass kind = MatrixClass::identity;
    hyp::TLBracket bracket;
    std::optional<AxisCertificate> certificate;
    std::string status;  // "exact", "exact 0 (parabolic)", "no axis found <= m_max", ...
};

hyp::HypParams farey_default_params();

/// Stable translation length of A on the Farey graph. Exact only with a
/// full axis certificate; otherwise a sound bracket.
FareyTL farey_tl(const ToralMatrix& A, std::int64_t m_max, std::int64_t k_max);
FareyTL farey_tl(const ToralMatrix& A, std::int64_t m_max, std::int64_t k_max, const hyp::HypParams& params);

/// Largest observed thinness of sampled geodesic triangles with corners in
/// the BFS ball of the given radius around 1/0 (corners drawn from the
/// cap-`cap` subgraph). Diagnostic only.
std::int64_t thinness_audit(std::int64_t sample_triangles, std::int64_t radius, std::uint64_t seed,
                            std::int64_t cap = 24);
/// Thinness of one triangle: the max over sides of the distance from a side
/// vertex to the union of the other two sides.
std::int64_t triangle_thinness(const Slope& x, const Slope& y, const Slope& z);

}  // namespace curvelab::farey
