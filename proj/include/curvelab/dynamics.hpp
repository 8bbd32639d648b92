#pragma once

// Linear Anosov maps of the torus: periodic points, invariant puncture sets
// and the finite-approximation sweep comparing tl rel P against the Farey
// translation length.

#include "curvelab/farey.hpp"
#include "curvelab/hypcore.hpp"
#include "curvelab/mapclass.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace curvelab::dyn {

class AnosovMap {
public:
    /// Throws Error("not anosov") unless |trace| > 2.
    explicit AnosovMap(const farey::ToralMatrix& A);
    const farey::ToralMatrix& matrix() const { return A_; }

private:
    farey::ToralMatrix A_;
};

/// Diagonal form U M V = diag(d1, d2), d1 | d2, d_i >= 0, U and V unimodular.
struct SmithForm {
    std::array<Integer, 4> U, V;
    Integer d1, d2;
};
SmithForm smith_normal_form(const std::array<Integer, 4>& M);

/// All x in [0,1)^2 with A^n x = x mod Z^2, sorted; exactly |det(A^n - I)|.
std::vector<Vec2> periodic_points(const AnosovMap& A, std::int64_t n);

/// Union of the periodic points of the given periods.
tri::PunctureSet invariant_set(const AnosovMap& A, const std::vector<std::int64_t>& periods);

struct SweepBudget {
    std::int64_t k_max = 8;
    std::int64_t farey_m_max = 12;
    std::int64_t farey_k_max = 5;
    std::int64_t axis_m_max = 2;
    std::int64_t axis_k_max = 3;
    Rational max_width = Rational(1, 4);
    tri::DistanceBudget distance;
};

enum class Verdict { pass, inconclusive, fail };
std::string to_string(Verdict v);

struct SweepEntry {
    std::vector<std::int64_t> periods;
    tri::PunctureSet punctures;
    std::string triangulation_hash;
    std::size_t flip_count = 0;
    hyp::TLBracket bracket;
    std::vector<mapclass::OrbitRecord> orbit;
    std::optional<mapclass::PuncturedAxisCertificate> axis;
    std::string axis_reason;
    Verdict verdict = Verdict::inconclusive;
    std::string reason;
};

struct SweepReport {
    farey::ToralMatrix matrix;
    hyp::HypParams params;
    SweepBudget budget;
    farey::FareyTL reference;
    std::vector<SweepEntry> entries;
    /// Pairs (i, j) with P_i a subset of P_j where lower(P_i) > upper(P_j).
    std::vector<std::pair<std::size_t, std::size_t>> chain_violations;

    bool all_pass() const;
    bool any_fail() const;
};

/// A puncture set given by periods, or listed explicitly.
struct SweepInput {
    std::vector<std::int64_t> periods;
    std::optional<tri::PunctureSet> points;
};

/// Runs tl_bracket rel each set (entries in parallel) and compares against
/// the Farey translation length of A. Budget exhaustion makes an entry
/// inconclusive; other errors (e.g. "not f-invariant") propagate.
SweepReport approximation_sweep(const AnosovMap& A, const std::vector<SweepInput>& inputs, const SweepBudget& budget,
                                const hyp::HypParams& params);

/// JSON report (schema "curvelab-sweep/1"). The timestamp, when given, is the
/// only field that may differ between identical runs.
std::string sweep_report_json(const SweepReport& r, const std::string& timestamp = "");
/// Columns: matrix, P_size, lower, upper, exact, period_m, verdict.
std::string sweep_report_csv(const SweepReport& r);

}  // namespace curvelab::dyn
