#pragma once

// Simple closed curves on the punctured torus, stored as normal coordinates
// on a fixed triangulation whose vertices are the punctures.

#include "curvelab/farey.hpp"
#include "curvelab/triangulation.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace curvelab::tri {

using TriPtr = std::shared_ptr<const Triangulation>;

TriPtr make_triangulation(const PunctureSet& P);

/// Crossing token: +(e + 1) crosses edge e from its left triangle into its
/// right triangle, -(e + 1) the other way.
using Token = std::int32_t;

std::int32_t token_edge(Token t);
Token reverse_token(Token t);
/// Reverses a cyclic crossing sequence.
std::vector<Token> reversed(const std::vector<Token>& seq);

struct Homology {
    std::int64_t p = 0, q = 0;
    bool zero() const { return p == 0 && q == 0; }
    friend bool operator==(const Homology&, const Homology&) = default;
};

class NormalCurve {
public:
    /// Throws Error("not normal") when a triangle violates the matching
    /// conditions, Error("multicurve") when the arcs close up in more than
    /// one component and Error("inessential") for empty or peripheral
    /// coordinates.
    static NormalCurve from_weights(TriPtr T, std::vector<std::int64_t> weights);
    /// Canonical class of a closed curve given by its cyclic crossing
    /// sequence. Backtracks are cancelled first.
    static NormalCurve normalize(TriPtr T, const std::vector<Token>& crossings);
    /// "edge_id:weight" pairs separated by spaces.
    static NormalCurve parse(TriPtr T, std::string_view text);

    const TriPtr& triangulation() const { return tri_; }
    const std::vector<std::int64_t>& weights() const { return weights_; }
    /// Cyclic crossing sequence, oriented so that `homology()` is canonical.
    const std::vector<Token>& crossings() const { return crossings_; }
    /// Class in H_1 of the closed torus, up to sign (canonicalized like a slope).
    const Homology& homology() const { return homology_; }
    std::int64_t norm() const;
    /// The slope of the homology class; empty for separating curves.
    std::optional<farey::Slope> slope() const;
    /// Index of the strip whose straight curve is isotopic to this one.
    std::optional<std::size_t> straight_strip() const { return strip_; }

    std::string serialize() const;

    friend bool operator==(const NormalCurve& a, const NormalCurve& b);
    friend bool operator<(const NormalCurve& a, const NormalCurve& b) { return a.weights_ < b.weights_; }

private:
    TriPtr tri_;
    std::vector<std::int64_t> weights_;
    std::vector<Token> crossings_;
    Homology homology_;
    std::optional<std::size_t> strip_;
};

/// Heights det(s, x) mod 1 separating the strips of slope s: one strip per
/// distinct puncture height, and the returned values are the strip
/// midpoints in increasing order.
std::vector<Rational> strip_heights(const PunctureSet& P, const farey::Slope& s);
/// Normal coordinates of the straight loop {det(s, x) = h mod 1}.
std::vector<std::int64_t> straight_weights(const Triangulation& T, const farey::Slope& s, const Rational& h);
NormalCurve straight_curve(const TriPtr& T, const farey::Slope& s, std::size_t strip);
std::vector<NormalCurve> straight_curves(const TriPtr& T, const farey::Slope& s);

/// Cyclic crossing sequence of a closed polygon with vertices v_0 .. v_{n-1}
/// closing up to v_0 + displacement. The polygon is perturbed by an
/// infinitesimal (eps, eps^2) so vertices lying on edges are harmless; it
/// must avoid the punctures.
std::vector<Token> trace_polygon(const Triangulation& T, const std::vector<Vec2>& vertices, const Vec2& displacement);

/// A simple polygon in the plane representing the curve: `vertices`
/// followed by the translate of the first vertex by `displacement`.
struct Realization {
    std::vector<Vec2> vertices;
    Vec2 displacement;
};
Realization realize(const NormalCurve& a);

/// Minimal intersection number over the two isotopy classes.
std::int64_t geometric_intersection(const NormalCurve& a, const NormalCurve& b);
/// The same number computed purely from the crossing sequences, by counting
/// linked pairs of maximal common segments on the dual ribbon graph.
std::int64_t crossing_intersection(const NormalCurve& a, const NormalCurve& b);

/// Nonseparating iff the homology class in the closed torus is nonzero.
bool is_nonseparating(const NormalCurve& a);
/// Distinct classes meeting at most once. Throws Error("separating curve").
bool adjacent(const NormalCurve& a, const NormalCurve& b);

struct DistanceBudget {
    std::int64_t slope_cap = 3;     // straight curves with |p|,|q| <= cap enter the search pool
    std::size_t max_pool = 4000;    // pool size limit
    bool use_straight_paths = true; // lift Farey geodesics between straight curves
    std::vector<NormalCurve> extras;
};

struct DistanceBracket {
    std::int64_t lo = 0;
    std::optional<std::int64_t> hi;  // empty: no path found
    std::string lo_certificate;      // "identity", "distinct", "intersection>=2", "forgetful-farey"
    std::vector<NormalCurve> path;   // witness for hi, adjacent consecutive curves
    bool exhausted = false;          // search ended without collapsing the bracket, or the pool was truncated

    bool collapsed() const { return hi && *hi == lo; }
};

/// Sound bracket for the distance in the nonseparating curve graph.
DistanceBracket distance_bracket(const NormalCurve& a, const NormalCurve& b, const DistanceBudget& budget = {});

/// Image in the once-punctured (or closed) torus: the homology slope.
/// Throws Error("dies under forgetting") for separating curves.
farey::Slope forget_to_slope(const NormalCurve& a);
/// Image in the surface punctured at the vertices of `target`, which must
/// be a subset of a's punctures.
NormalCurve forget_punctures(const NormalCurve& a, const TriPtr& target);

/// Reads crossing sequences, one per line, tokens separated by spaces.
std::vector<std::vector<Token>> parse_crossing_file(std::string_view text);

}  // namespace curvelab::tri
