#pragma once

// Mapping classes of the punctured torus as flip words on the canonical
// triangulation, their action on normal coordinates, and translation-length
// bracketing on the nonseparating curve graph.

#include "curvelab/farey.hpp"
#include "curvelab/hypcore.hpp"
#include "curvelab/tricurves.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace curvelab::mapclass {

/// Edge relabelling: weight on edge i moves to edge perm[i].
struct Relabel {
    std::vector<std::int32_t> perm;
    friend bool operator==(const Relabel&, const Relabel&) = default;
};

using WordOp = std::variant<tri::FlipStep, Relabel>;

class MappingClass {
public:
    static MappingClass identity(tri::TriPtr T);
    /// Mapping class of the linear map A on the torus punctured at T's
    /// vertices. Throws Error("not f-invariant") unless A permutes them.
    static MappingClass from_matrix(const farey::ToralMatrix& A, tri::TriPtr T);
    /// "flipword" header carrying the triangulation hash, then one operation
    /// per line: "f e a b c d" or "r p0 p1 ...".
    static MappingClass parse(tri::TriPtr T, std::string_view text);

    const tri::TriPtr& triangulation() const { return tri_; }
    const std::vector<WordOp>& word() const { return word_; }
    std::size_t flip_count() const;
    /// Vertex i is sent to vertex puncture_perm()[i].
    const std::vector<std::int32_t>& puncture_perm() const { return puncture_perm_; }
    const std::optional<farey::ToralMatrix>& provenance() const { return provenance_; }

    MappingClass inverse() const;
    std::string serialize() const;

private:
    tri::TriPtr tri_;
    std::vector<WordOp> word_;
    std::vector<std::int32_t> puncture_perm_;
    std::optional<farey::ToralMatrix> provenance_;
};

/// Normal coordinates of the image curve. Throws Error("overflow") if a
/// weight leaves the 64-bit range.
std::vector<std::int64_t> act_weights(const MappingClass& m, std::vector<std::int64_t> w);
tri::NormalCurve act(const MappingClass& m, const tri::NormalCurve& a);
tri::NormalCurve act_power(const MappingClass& m, const tri::NormalCurve& a, std::int64_t k);

struct OrbitRecord {
    std::int64_t k = 0;
    std::int64_t lo = 0;
    std::optional<std::int64_t> hi;
};

struct TLResult {
    hyp::TLBracket bracket;
    std::vector<OrbitRecord> orbit;  // d(base, m^k base) for k = 1..k_max
};

/// Sound bracket for the stable translation length of m on the
/// nonseparating curve graph of the punctured torus.
TLResult tl_bracket(const MappingClass& m, const tri::NormalCurve& base, std::int64_t k_max,
                    const hyp::HypParams& params, const tri::DistanceBudget& budget = {});

struct PuncturedAxisCertificate {
    tri::NormalCurve base;
    std::int64_t period = 0;
    std::int64_t displacement = 0;
    Rational tl;
    std::vector<tri::NormalCurve> geodesic;
    std::int64_t verified_multiples = 0;
};

struct AxisSearch {
    std::optional<PuncturedAxisCertificate> certificate;
    std::string reason;  // empty on success
    std::vector<std::string> log;
};

/// Tries small straight base curves and periods up to m_max; a certificate
/// needs collapsed brackets with d(c, m^{km} c) = k D for every k <= k_max.
AxisSearch axis_search(const MappingClass& m, std::int64_t m_max, std::int64_t k_max,
                       const tri::DistanceBudget& budget = {});

}  // namespace curvelab::mapclass
