#pragma once

#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "thaad/types.hpp"

namespace thaad {

/// Inclination, in degrees within [0, 90), of the segment from (0, y1) to
/// (1, y2): arccos(1 / sqrt((y2 - y1)^2 + 1)), i.e. arctan(|y2 - y1|).
double angle(double y1, double y2);

/// Magnitude of the mean signed pair angle over a window of consecutive
/// values: each adjacent pair contributes angle(a, b), negated when a > b,
/// and the signed sum is averaged over the pair count. Needs >= 2 values.
double slope(std::span<const double> window);

/// Ratio of the current value to the mean of the t values preceding it.
/// A zero mean is mapped to 1 when the current value is also zero and to the
/// high relation threshold (or its reciprocal) otherwise; a negative mean is
/// rejected as degenerate.
double relation(std::span<const double> suffix, double cur_value, const AbstractionConfig& cfg);

/// Table lookup from (slope, relation) to a trend symbol.
TrendSymbol classify_symbol(double slope_deg, double relation_value, const AbstractionConfig& cfg);

/// Incremental gradient abstraction of one series. Feed points in timestamp
/// order; an interval is returned once its run is closed by a point carrying
/// a different symbol. finish() closes the trailing run. Feeding all points
/// and then calling finish() is exactly the batch abstraction, so split
/// points never change the output.
class GradientAbstractor {
public:
    GradientAbstractor(std::string variable, AbstractionConfig cfg);

    std::optional<SymbolicTimeInterval> push(const TimePoint& p);
    std::optional<SymbolicTimeInterval> finish();

    /// Points consumed so far.
    std::int64_t point_count() const { return count_; }
    /// True until the series has enough history to emit symbols.
    bool in_warmup() const { return count_ <= cfg_.window_length; }
    /// True while a run is open, i.e. its closing boundary is still unknown.
    bool has_open_run() const { return run_.has_value(); }
    /// Timestamp of the last accepted point, if any.
    std::optional<Timestamp> last_timestamp() const {
        if (count_ == 0) return std::nullopt;
        return last_ts_;
    }
    const std::string& variable() const { return variable_; }

private:
    std::string variable_;
    AbstractionConfig cfg_;
    std::deque<double> recent_; // the t values preceding the next point
    std::int64_t count_ = 0;
    Timestamp last_ts_ = 0;
    bool finished_ = false;

    struct OpenRun {
        TrendSymbol symbol;
        Timestamp begin;
        Timestamp last;
    };
    std::optional<OpenRun> run_;
};

/// Whole-series abstraction: one symbol per point from index t onward,
/// merged into maximal runs. A series shorter than t + 1 points yields an
/// empty result; `too_short`, when given, reports that case.
std::vector<SymbolicTimeInterval> abstract_series(const TimePointSeries& series,
                                                  const AbstractionConfig& cfg,
                                                  bool* too_short = nullptr);

} // namespace thaad
