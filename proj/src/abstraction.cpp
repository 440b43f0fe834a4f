#include "thaad/abstraction.hpp"

#include <cmath>
#include <numbers>

namespace thaad {

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

double signed_pair_angle(double a, double b) {
    double ang = angle(a, b);
    return a > b ? -ang : ang;
}

} // namespace

double angle(double y1, double y2) {
    if (!std::isfinite(y1) || !std::isfinite(y2))
        throw InvalidInputError("angle requires finite values");
    return std::atan(std::abs(y2 - y1)) * kDegPerRad;
}

double slope(std::span<const double> window) {
    if (window.size() < 2)
        throw InsufficientHistoryError("slope needs at least two values");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < window.size(); ++i)
        sum += signed_pair_angle(window[i], window[i + 1]);
    return std::abs(sum / static_cast<double>(window.size() - 1));
}

double relation(std::span<const double> suffix, double cur_value, const AbstractionConfig& cfg) {
    if (suffix.empty())
        throw InsufficientHistoryError("relation needs a non-empty suffix");
    if (!std::isfinite(cur_value))
        throw InvalidInputError("relation requires finite values");
    double sum = 0.0;
    for (double v : suffix) {
        if (!std::isfinite(v))
            throw InvalidInputError("relation requires finite values");
        sum += v;
    }
    double mean = sum / static_cast<double>(suffix.size());
    if (mean < 0)
        throw DegenerateInputError("relation undefined for a negative window mean");
    if (mean == 0) {
        // An idle window: no change stays stable, any activity is treated as
        // the extreme ratio in its direction.
        if (cur_value == 0) return 1.0;
        return cur_value > 0 ? cfg.high_relation_thresh : 1.0 / cfg.high_relation_thresh;
    }
    if (cur_value <= 0) {
        // The level collapsed to or below zero: extreme decrease, keeping the
        // ratio positive.
        return 1.0 / cfg.high_relation_thresh;
    }
    return cur_value / mean;
}

TrendSymbol classify_symbol(double slope_deg, double relation_value, const AbstractionConfig& cfg) {
    if (!(slope_deg >= 0) || !(relation_value > 0))
        throw InvalidInputError("classify_symbol needs slope >= 0 and relation > 0");

    const double eps = cfg.stable_relation_epsilon;
    bool increasing;
    if (relation_value > 1.0 + eps) {
        increasing = true;
    } else if (relation_value < 1.0 / (1.0 + eps)) {
        increasing = false;
    } else {
        return TrendSymbol::Stable;
    }

    if (slope_deg < cfg.low_slope_thresh)
        return TrendSymbol::Stable;

    // Effective ratio measured away from 1 regardless of direction.
    double r = increasing ? relation_value : 1.0 / relation_value;

    // Strength is the weaker of the two band readings.
    int slope_band = slope_deg >= cfg.high_slope_thresh ? 3 : 2; // H or M
    int relation_band = r >= cfg.high_relation_thresh ? 3 : (r >= cfg.low_relation_thresh ? 2 : 1);
    int strength = slope_band < relation_band ? slope_band : relation_band;

    int offset = increasing ? strength : -strength;
    return static_cast<TrendSymbol>(ordinal(TrendSymbol::Stable) + offset);
}

GradientAbstractor::GradientAbstractor(std::string variable, AbstractionConfig cfg)
    : variable_(std::move(variable)), cfg_(cfg) {
    cfg_.validate();
}

std::optional<SymbolicTimeInterval> GradientAbstractor::push(const TimePoint& p) {
    if (finished_)
        throw InvalidInputError("abstractor already finished");
    if (!std::isfinite(p.value))
        throw InvalidInputError("time point value must be finite");
    if (count_ > 0 && p.timestamp <= last_ts_)
        throw InvalidInputError("time point timestamps must be strictly increasing");
    last_ts_ = p.timestamp;
    ++count_;

    const int t = cfg_.window_length;
    std::optional<SymbolicTimeInterval> closed;

    if (static_cast<int>(recent_.size()) == t) {
        // recent_ holds the t values preceding p. The slope window is the
        // last t values ending at p; the relation suffix is recent_ itself.
        std::vector<double> window(recent_.begin() + 1, recent_.end());
        window.push_back(p.value);
        double sl = slope(window);
        std::vector<double> suffix(recent_.begin(), recent_.end());
        double rel = relation(suffix, p.value, cfg_);
        TrendSymbol sym = classify_symbol(sl, rel, cfg_);

        if (run_ && run_->symbol == sym) {
            run_->last = p.timestamp;
        } else {
            if (run_)
                closed = SymbolicTimeInterval{run_->begin, run_->last, variable_, run_->symbol};
            run_ = OpenRun{sym, p.timestamp, p.timestamp};
        }
        recent_.pop_front();
    }
    recent_.push_back(p.value);
    return closed;
}

std::optional<SymbolicTimeInterval> GradientAbstractor::finish() {
    finished_ = true;
    if (!run_) return std::nullopt;
    SymbolicTimeInterval out{run_->begin, run_->last, variable_, run_->symbol};
    run_.reset();
    return out;
}

std::vector<SymbolicTimeInterval> abstract_series(const TimePointSeries& series,
                                                  const AbstractionConfig& cfg,
                                                  bool* too_short) {
    GradientAbstractor abs(series.variable, cfg);
    std::vector<SymbolicTimeInterval> out;
    for (const TimePoint& p : series.points)
        if (auto iv = abs.push(p)) out.push_back(*iv);
    if (auto iv = abs.finish()) out.push_back(*iv);
    if (too_short)
        *too_short = static_cast<int>(series.points.size()) <= cfg.window_length;
    return out;
}

} // namespace thaad
