#pragma once

// Actual (not isotopy classes of) curves on the flat torus, restricted to
// rational polygonal loops so every predicate is exact.

#include "curvelab/tricurves.hpp"

#include <optional>
#include <string>
#include <vector>

namespace curvelab::fine {

/// Closed polygon on R^2 / Z^2: the lift runs through `vertices` and closes
/// at vertices[0] + displacement.
class PolyCurve {
public:
    /// Throws Error("self-crossing") unless the loop is simple on the torus
    /// and Error("separating/inessential fine curve") for displacement (0,0).
    static PolyCurve validate(std::vector<Vec2> vertices, const Vec2& displacement);

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const Vec2& displacement() const { return displacement_; }
    std::size_t size() const { return vertices_.size(); }
    /// Lifted vertex with index i + k n, i.e. vertices[i] + k displacement.
    Vec2 lifted(std::int64_t idx) const;

    /// "displacement p q" then one "x y" line per vertex.
    std::string serialize() const;
    static PolyCurve parse(std::string_view text);

private:
    std::vector<Vec2> vertices_;
    Vec2 displacement_;
};

PolyCurve straight_loop(const Vec2& start, std::int64_t p, std::int64_t q);

struct Crossing {
    Vec2 point;              // reduced into [0,1)^2
    std::size_t seg_a = 0;   // segment of a (lifted at a's own position)
    std::size_t seg_b = 0;   // segment of b, translated by `shift`
    Vec2 shift;
    Rational t_a, t_b;       // parameters in (0,1) along the two segments
};

/// Transverse intersection points of a and b on the torus. Throws
/// Error("perturb inputs") on shared segments or when a vertex of one curve
/// lies on the other.
std::vector<Crossing> transverse_intersections(const PolyCurve& a, const PolyCurve& b);

/// Disk in the plane bounded by one arc of a lift of each curve.
struct Bigon {
    std::vector<Vec2> boundary;  // arc of a from x to y, then arc of b back
};

/// A bigon between lifts of a and b containing no translate of a point of P,
/// if one exists. Throws Error("puncture on curve") if P meets either curve.
std::optional<Bigon> find_empty_bigon(const PolyCurve& a, const PolyCurve& b, const tri::PunctureSet& P);
bool minimal_position_rel(const PolyCurve& a, const PolyCurve& b, const tri::PunctureSet& P);

/// Isotopy class of a rel P.
tri::NormalCurve to_normal(const PolyCurve& a, const tri::TriPtr& T);

/// Distance in the fine nonseparating curve graph via the punctured torus
/// S - P. Throws Error("not in minimal position rel P") when a, b bound an
/// empty bigon.
tri::DistanceBracket fine_distance(const PolyCurve& a, const PolyCurve& b, const tri::PunctureSet& P,
                                   const tri::DistanceBudget& budget = {});

}  // namespace curvelab::fine
