#pragma once

// Translation-length bracketing for isometries of a delta-hyperbolic graph.
// Everything here is backend agnostic: a backend supplies orbit distances
// d(x, f^k x) and receives sound rational bounds on the stable translation
// length lim d(x, f^n x) / n.

#include "curvelab/numeric.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace curvelab::hyp {

/// Constants of the quasigeodesic toolkit. The hyperbolic-geometry lemmas
/// only assert that these exist; `derive_constants` supplies documented
/// conservative closed forms and every one of them can be overridden.
struct HypParams {
    Rational delta;       // hyperbolicity constant
    Rational K;           // quasigeodesic constant of a good quasi-axis
    Rational L;           // translation-length threshold for a good quasi-axis
    std::int64_t N = 1;   // locality window for local-to-global
    Rational Kprime;      // global constant produced by local-to-global
    Rational M;           // Morse constant for Kprime-quasigeodesics
    std::string formula;  // which closed form produced the values

    void validate() const;
};

struct ParamOverrides {
    std::optional<Rational> L;
    std::optional<std::int64_t> N;
    std::optional<Rational> Kprime;
    std::optional<Rational> M;
};

/// Default closed forms (tag "conservative-v1"):
///   K'    = K * (1 + delta)
///   M     = (K'^2 - 1) * (1 + 2 delta) + 2 delta K'^2
///   N     = ceil(4 K^2 (1 + delta)) + 1
///   L     = 10 delta + 1
/// M vanishes exactly for geodesic orbits in trees (delta = 0, K = 1) and
/// is nondecreasing in both K' and delta.
HypParams derive_constants(const Rational& delta, const Rational& K, const ParamOverrides& overrides = {});

/// Sampled orbit distances d(x, f^k x), keyed by k >= 0.
class OrbitSample {
public:
    OrbitSample() = default;
    explicit OrbitSample(std::string base) : base_(std::move(base)) {}

    void add(std::int64_t k, const Rational& distance);
    bool has(std::int64_t k) const { return distances_.count(k) != 0; }
    const Rational& at(std::int64_t k) const;
    bool empty() const { return distances_.empty(); }
    const std::map<std::int64_t, Rational>& distances() const { return distances_; }
    const std::string& base() const { return base_; }

    /// Checks d_0 = 0 and d_{k+l} <= d_k + d_l on every sampled triple.
    bool consistent() const;

private:
    std::string base_;
    std::map<std::int64_t, Rational> distances_;
};

struct BoundRecord {
    std::string kind;    // "fekete", "morse", "axis", "forgetful-farey", ...
    std::string detail;  // human readable derivation
    Rational value;
};

/// Certified interval for a stable translation length.
struct TLBracket {
    Rational lower = 0;
    std::optional<Rational> upper;  // empty means +infinity
    std::optional<Rational> exact;
    std::vector<BoundRecord> provenance;

    bool well_formed() const;
    bool collapsed() const { return upper && *upper == lower; }
    std::optional<Rational> width() const;

    void raise_lower(const Rational& v, std::string kind, std::string detail);
    void lower_upper(const Rational& v, std::string kind, std::string detail);
};

/// min over sampled k >= 1 of d_k / k. Sound by subadditivity.
Rational fekete_upper(const OrbitSample& sample);

/// max(0, d_k / k - 2M / k). Sound only when the orbit is a
/// K'-quasigeodesic for the K' that produced params.M.
Rational quasigeodesic_lower(const OrbitSample& sample, std::int64_t k, const HypParams& params);

using PathDistances = std::map<std::pair<std::int64_t, std::int64_t>, Rational>;

/// True iff |i-j|/K - K <= d(i,j) <= K|i-j| + K on every supplied pair with
/// |i - j| < window. All such pairs inside the index range must be present.
bool local_quasigeodesic_audit(const PathDistances& distances, std::int64_t window, const Rational& K);

}  // namespace curvelab::hyp
