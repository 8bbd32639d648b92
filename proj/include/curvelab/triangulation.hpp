#pragma once

// Triangulations of the flat torus R^2 / Z^2 with vertices at a finite
// puncture set. Every triangle is stored with an explicit lift to the plane,
// so all geometric predicates are exact rational computations.

#include "curvelab/numeric.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace curvelab::tri {

/// Finite set of distinct points of the torus, stored reduced into [0,1)^2
/// and sorted lexicographically (the sorted order fixes vertex ids).
class PunctureSet {
public:
    PunctureSet() = default;
    /// Throws Error("duplicate puncture") if two points agree mod Z^2 and
    /// Error("empty puncture set") for an empty list.
    explicit PunctureSet(std::vector<Vec2> points);

    std::size_t size() const { return points_.size(); }
    const Vec2& operator[](std::size_t i) const { return points_[i]; }
    const std::vector<Vec2>& points() const { return points_; }
    /// Id of the point congruent to x mod Z^2, if any.
    std::optional<std::size_t> find(const Vec2& x) const;
    bool contains(const PunctureSet& other) const;

    /// One "x_num/x_den,y_num/y_den" line per point.
    std::string serialize() const;
    static PunctureSet parse(std::string_view text);

    friend bool operator==(const PunctureSet&, const PunctureSet&) = default;

private:
    std::vector<Vec2> points_;
};

/// A triangle side: edge id and whether the ccw boundary runs along the
/// edge's stored direction (+1) or against it (-1).
struct Side {
    std::int32_t edge = -1;
    std::int32_t sign = 1;
};

/// Side k runs from corner k to corner k + 1; corners are ccw.
struct Triangle {
    std::array<Side, 3> sides;
    std::array<std::int32_t, 3> corners{};
    std::array<Vec2, 3> pos;  // lift; pos[0] lies in [0,1)^2
};

/// Edges are stored with `vec` lexicographically positive; the edge runs
/// from the canonical position of `origin` to that position plus `vec`.
struct Edge {
    std::int32_t origin = -1;
    std::int32_t dest = -1;
    Vec2 vec;
    std::int32_t left_tri = -1, left_side = -1;    // side with sign +1
    std::int32_t right_tri = -1, right_side = -1;  // side with sign -1
};

/// Edge ids after a flip of `e`: before the flip the left triangle of e is
/// (e, a, b) and the right one (e reversed, c, d), read ccw.
struct FlipStep {
    std::int32_t e = -1, a = -1, b = -1, c = -1, d = -1;
    friend bool operator==(const FlipStep&, const FlipStep&) = default;
};

class Triangulation {
public:
    /// Delaunay triangulation of the flat torus with vertices P, built by
    /// lexicographic point insertion followed by strict Lawson flips; edges
    /// and triangles are then renumbered canonically.
    static Triangulation build(const PunctureSet& P);

    /// Assembles a triangulation from lifted triangles; edge ids are
    /// assigned in sorted key order.
    static Triangulation from_triangles(const PunctureSet& P, std::vector<Triangle> triangles);

    const PunctureSet& punctures() const { return punctures_; }
    std::size_t num_vertices() const { return punctures_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }
    const Edge& edge(std::size_t e) const { return edges_[e]; }
    const Triangle& triangle(std::size_t t) const { return triangles_[t]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<Triangle>& triangles() const { return triangles_; }

    /// Triangle and side on the other side of side k of triangle t.
    std::pair<std::int32_t, std::int32_t> across(std::int32_t t, std::int32_t k) const;
    /// Vector to add to the neighbour's stored positions so that its lift
    /// glues to t's lift along side k.
    Vec2 transition(std::int32_t t, std::int32_t k) const;
    /// Position of the origin of side k's edge in t's lift.
    Vec2 edge_origin_in(std::int32_t t, std::int32_t k) const;

    /// Opposite vertex of the right triangle, in the left triangle's lift.
    Vec2 opposite_across(std::int32_t e) const;
    bool is_flippable(std::int32_t e) const;
    /// True when the right opposite vertex is strictly inside the left
    /// circumcircle.
    bool violates_delaunay(std::int32_t e) const;
    /// Replaces edge e by the other diagonal of its quadrilateral. Edge ids
    /// are kept. Throws Error("illegal flip") on a non-convex quadrilateral.
    FlipStep flip(std::int32_t e);
    /// Strict Lawson flips until every edge is locally Delaunay.
    std::vector<FlipStep> make_delaunay();

    /// Image under the linear map [[m0, m1], [m2, m3]] (determinant 1) that
    /// sends vertex i to vertex perm[i]. Edge ids are kept.
    Triangulation transformed(const std::array<Integer, 4>& m, const std::vector<std::int32_t>& perm) const;

    /// Id of the edge from vertex `origin` along `vec` (either orientation).
    std::optional<std::int32_t> find_edge(std::int32_t origin, const Vec2& vec) const;

    /// "tri-v1:" followed by a 64-bit FNV-1a digest of the canonical data.
    std::string hash() const;
    std::string describe() const;

    friend bool operator==(const Triangulation& a, const Triangulation& b) { return a.hash() == b.hash(); }

private:
    void relink();
    void canonicalize();

    PunctureSet punctures_;
    std::vector<Edge> edges_;
    std::vector<Triangle> triangles_;
};

/// (origin, vec) of the lexicographically positive orientation of the
/// segment starting at vertex `from` (lifted at `from_pos`) and ending at
/// `to_pos`.
std::pair<std::int32_t, Vec2> edge_key(std::int32_t from, std::int32_t to, const Vec2& from_pos, const Vec2& to_pos);

/// Positive iff d lies strictly inside the circle through ccw a, b, c.
int incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);

}  // namespace curvelab::tri
