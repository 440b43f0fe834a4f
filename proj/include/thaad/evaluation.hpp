#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thaad/pipeline.hpp"

namespace thaad {

/// Truth events carrying this entity name match reports from any entity.
inline constexpr std::string_view kWildcardEntity = "*";

struct GroundTruthEvent {
    std::string entity;
    Timestamp start = 0;
    Timestamp end = 0;
    std::string label;

    friend bool operator==(const GroundTruthEvent&, const GroundTruthEvent&) = default;
};

/// Closed-interval intersection test.
bool intervals_overlap(Timestamp a_start, Timestamp a_end, Timestamp b_start, Timestamp b_end);

struct EvalResult {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    /// Rates are absent, not zero, when their denominator is empty.
    std::optional<double> tpr;
    std::optional<double> fnr;
    std::optional<double> f1;

    static EvalResult from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn);

    friend bool operator==(const EvalResult&, const EvalResult&) = default;
};

/// Counts a report as a true positive when it overlaps at least one truth
/// event of its entity (or a wildcard event) and as a false positive
/// otherwise; a truth event no report overlaps is a false negative. True
/// positives count per report; a truth event saturates after one hit.
EvalResult score(std::span<const AnomalyReport> reports, std::span<const GroundTruthEvent> truth);

struct SweepCase {
    std::int64_t alpha = 0;
    double beta = 0.0;
    int pattern_length = 5;
    Metric metric = Metric::L1;

    friend bool operator==(const SweepCase&, const SweepCase&) = default;
};

struct SweepRow {
    SweepCase params;
    EvalResult result;
};

/// Cross product in deterministic row order: alpha, then beta, then pattern
/// length, then metric. With `betas_are_multipliers` each beta entry scales
/// the row's alpha instead of being an absolute bound.
std::vector<SweepCase> sweep_grid(const std::vector<std::int64_t>& alphas,
                                  const std::vector<double>& betas, bool betas_are_multipliers,
                                  const std::vector<int>& pattern_lengths,
                                  const std::vector<Metric>& metrics);

/// One full detection run per case over the same data, scored against truth.
std::vector<SweepRow> sweep(const std::vector<TimePointSeries>& data,
                            std::span<const GroundTruthEvent> truth,
                            std::span<const SweepCase> cases, const PipelineConfig& base);

} // namespace thaad
