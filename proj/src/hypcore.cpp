#include "curvelab/hypcore.hpp"

#include <algorithm>

namespace curvelab::hyp {

void HypParams::validate() const {
    if (delta < 0) throw Error("invalid params", "delta < 0");
    if (K < 1) throw Error("invalid params", "K < 1");
    if (L <= 0) throw Error("invalid params", "L <= 0");
    if (N < 1) throw Error("invalid params", "N < 1");
    if (Kprime < K) throw Error("invalid params", "K' < K");
    if (M < 0) throw Error("invalid params", "M < 0");
}

HypParams derive_constants(const Rational& delta, const Rational& K, const ParamOverrides& overrides) {
    if (delta < 0) throw Error("invalid params", "delta must be nonnegative");
    if (K < 1) throw Error("invalid params", "K must be at least 1");
    HypParams p;
    p.delta = delta;
    p.K = K;
    p.formula = "conservative-v1";
    p.Kprime = K * (1 + delta);
    p.L = 10 * delta + 1;
    Rational n = 4 * K * K * (1 + delta);
    p.N = to_i64(-floor_of(-n)) + 1;

    bool overridden = false;
    if (overrides.Kprime) {
        p.Kprime = *overrides.Kprime;
        overridden = true;
    }
    p.M = (p.Kprime * p.Kprime - 1) * (1 + 2 * delta) + 2 * delta * p.Kprime * p.Kprime;
    if (overrides.M) {
        p.M = *overrides.M;
        overridden = true;
    }
    if (overrides.L) {
        p.L = *overrides.L;
        overridden = true;
    }
    if (overrides.N) {
        p.N = *overrides.N;
        overridden = true;
    }
    if (overridden) p.formula += "+overrides";
    p.validate();
    return p;
}

void OrbitSample::add(std::int64_t k, const Rational& distance) {
    if (k < 0) throw Error("invalid sample", "negative power");
    if (distance < 0) throw Error("invalid sample", "negative distance");
    distances_[k] = distance;
}

const Rational& OrbitSample::at(std::int64_t k) const {
    auto it = distances_.find(k);
    if (it == distances_.end()) throw Error("no data", "d_" + std::to_string(k) + " not sampled");
    return it->second;
}

bool OrbitSample::consistent() const {
    if (has(0) && at(0) != 0) return false;
    for (const auto& [k, dk] : distances_)
        for (const auto& [l, dl] : distances_) {
            auto it = distances_.find(k + l);
            if (it != distances_.end() && it->second > dk + dl) return false;
        }
    return true;
}

bool TLBracket::well_formed() const {
    if (lower < 0) return false;
    if (upper && *upper < lower) return false;
    if (exact) {
        if (*exact < lower) return false;
        if (upper && *exact > *upper) return false;
    }
    return true;
}

std::optional<Rational> TLBracket::width() const {
    if (!upper) return std::nullopt;
    return *upper - lower;
}

void TLBracket::raise_lower(const Rational& v, std::string kind, std::string detail) {
    provenance.push_back({std::move(kind), std::move(detail), v});
    if (v > lower) lower = v;
}

void TLBracket::lower_upper(const Rational& v, std::string kind, std::string detail) {
    provenance.push_back({std::move(kind), std::move(detail), v});
    if (!upper || v < *upper) upper = v;
}

Rational fekete_upper(const OrbitSample& sample) {
    std::optional<Rational> best;
    for (const auto& [k, d] : sample.distances()) {
        if (k == 0) continue;
        Rational r = d / k;
        if (!best || r < *best) best = r;
    }
    if (!best) throw Error("no data", "orbit sample has no positive power");
    return *best;
}

Rational quasigeodesic_lower(const OrbitSample& sample, std::int64_t k, const HypParams& params) {
    if (k < 1) throw Error("invalid sample", "k must be positive");
    Rational v = (sample.at(k) - 2 * params.M) / k;
    return v < 0 ? Rational(0) : v;
}

bool local_quasigeodesic_audit(const PathDistances& distances, std::int64_t window, const Rational& K) {
    if (window < 1) throw Error("invalid audit", "window must be positive");
    if (K <= 0) throw Error("invalid audit", "K must be positive");
    if (distances.empty()) throw Error("incomplete audit data", "no distances");
    std::int64_t lo = distances.begin()->first.first, hi = lo;
    for (const auto& [key, d] : distances) {
        lo = std::min({lo, key.first, key.second});
        hi = std::max({hi, key.first, key.second});
    }
    auto lookup = [&](std::int64_t i, std::int64_t j) -> const Rational* {
        auto it = distances.find({i, j});
        if (it != distances.end()) return &it->second;
        it = distances.find({j, i});
        return it != distances.end() ? &it->second : nullptr;
    };
    for (std::int64_t i = lo; i <= hi; ++i)
        for (std::int64_t j = i + 1; j <= hi && j - i < window; ++j)
            if (!lookup(i, j))
                throw Error("incomplete audit data",
                            "missing d(" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (const auto& [key, d] : distances) {
        std::int64_t gap = key.first > key.second ? key.first - key.second : key.second - key.first;
        if (gap >= window) continue;
        if (Rational(gap) / K - K > d) return false;
        if (d > K * gap + K) return false;
    }
    return true;
}

}  // namespace curvelab::hyp
