#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "thaad/errors.hpp"

namespace thaad {

using Timestamp = std::int64_t;

/// One observation of one variable: (timestamp, value).
struct TimePoint {
    Timestamp timestamp = 0;
    double value = 0.0;

    friend bool operator==(const TimePoint&, const TimePoint&) = default;
};

/// Ordered observations of a single (entity, variable) pair.
/// Timestamps are strictly increasing.
struct TimePointSeries {
    std::string entity;
    std::string variable;
    std::vector<TimePoint> points;

    friend bool operator==(const TimePointSeries&, const TimePointSeries&) = default;
};

/// A raw input row before it is grouped into series.
struct Record {
    std::string entity;
    std::string variable;
    Timestamp timestamp = 0;
    double value = 0.0;
};

/// The seven trend symbols, ordered from steepest decrease to steepest
/// increase. The underlying values are the numeric codes used by the
/// five-digit encoding and by the lexicographic event order, so they are
/// load-bearing: do not renumber.
enum class TrendSymbol : int {
    DecreaseHigh = 0,
    DecreaseMedium = 1,
    DecreaseLow = 2,
    Stable = 3,
    IncreaseLow = 4,
    IncreaseMedium = 5,
    IncreaseHigh = 6,
};

inline constexpr int kTrendSymbolCount = 7;

constexpr int ordinal(TrendSymbol s) { return static_cast<int>(s); }

inline TrendSymbol symbol_from_ordinal(int code) {
    if (code < 0 || code >= kTrendSymbolCount)
        throw InvalidInputError("trend symbol code out of range: " + std::to_string(code));
    return static_cast<TrendSymbol>(code);
}

inline std::string_view to_string(TrendSymbol s) {
    switch (s) {
    case TrendSymbol::DecreaseHigh: return "D-H";
    case TrendSymbol::DecreaseMedium: return "D-M";
    case TrendSymbol::DecreaseLow: return "D-L";
    case TrendSymbol::Stable: return "S";
    case TrendSymbol::IncreaseLow: return "I-L";
    case TrendSymbol::IncreaseMedium: return "I-M";
    case TrendSymbol::IncreaseHigh: return "I-H";
    }
    throw InvalidInputError("unknown trend symbol");
}

inline TrendSymbol symbol_from_string(std::string_view text) {
    for (int i = 0; i < kTrendSymbolCount; ++i) {
        auto s = static_cast<TrendSymbol>(i);
        if (to_string(s) == text) return s;
    }
    throw InvalidInputError("unknown trend symbol: " + std::string(text));
}

constexpr bool is_increasing(TrendSymbol s) { return ordinal(s) > ordinal(TrendSymbol::Stable); }
constexpr bool is_decreasing(TrendSymbol s) { return ordinal(s) < ordinal(TrendSymbol::Stable); }

/// Trend strength regardless of direction: S -> 0, L -> 1, M -> 2, H -> 3.
constexpr int intensity(TrendSymbol s) {
    int d = ordinal(s) - ordinal(TrendSymbol::Stable);
    return d < 0 ? -d : d;
}

/// A maximal run of equal consecutive symbols, closed on both ends.
struct SymbolicTimeInterval {
    Timestamp begin = 0;
    Timestamp finish = 0;
    std::string variable;
    TrendSymbol symbol = TrendSymbol::Stable;

    friend bool operator==(const SymbolicTimeInterval&, const SymbolicTimeInterval&) = default;
};

/// Gradient abstraction parameters. Defaults follow the reference
/// deployment: 45/15 degree slope bands, 2.0/1.5 ratio bands, a 5 percent
/// stability margin and a five point window.
struct AbstractionConfig {
    int window_length = 5; // t
    double high_slope_thresh = 45.0;
    double low_slope_thresh = 15.0;
    double high_relation_thresh = 2.0;
    double low_relation_thresh = 1.5;
    double stable_relation_epsilon = 0.05;

    void validate() const {
        if (window_length < 2)
            throw ConfigError("window_length must be at least 2");
        if (!(low_slope_thresh > 0) || !(high_slope_thresh > low_slope_thresh))
            throw ConfigError("slope thresholds must satisfy 0 < low < high");
        if (!(low_relation_thresh > 1) || !(high_relation_thresh > low_relation_thresh))
            throw ConfigError("relation thresholds must satisfy 1 < low < high");
        if (!(stable_relation_epsilon >= 0))
            throw ConfigError("stable_relation_epsilon must be non-negative");
    }
};

} // namespace thaad
