#include "thaad/synth.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace thaad {

namespace {

/// Uniform in [0, 1) from the top 53 bits of one engine draw, so the value
/// stream depends only on the engine, not on a distribution implementation.
double unit_draw(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double daily_base(const SynthSpec& spec, Timestamp minute) {
    const auto mm = static_cast<double>(minute % spec.minutes_per_day);
    const double up_begin = spec.high_start_minute - spec.transition_minutes;
    const double down_begin = spec.minutes_per_day - spec.transition_minutes;
    if (mm < up_begin) return spec.low_level;
    if (mm < spec.high_start_minute) {
        const double f = (mm - up_begin) / spec.transition_minutes;
        return spec.low_level + f * (spec.high_level - spec.low_level);
    }
    if (mm < down_begin) return spec.high_level;
    const double f = (mm - down_begin) / spec.transition_minutes;
    return spec.high_level - f * (spec.high_level - spec.low_level);
}

/// Spike factor at `minute`. The head is a short convex climb to the peak,
/// so several consecutive deltas share the peak's sign no matter how the
/// noise falls; the rest is a linear decay back toward 1 inside the window,
/// mild enough that nothing past the window end looks anomalous.
double injection_factor(const InjectionSpec& inj, Timestamp minute) {
    if (minute < inj.start || minute > inj.end) return 1.0;
    static constexpr double kRise[] = {0.1, 0.25, 0.55, 1.0};
    const Timestamp span = inj.end - inj.start;
    const Timestamp rise_len = std::min<Timestamp>(3, span);
    const Timestamp k = minute - inj.start;
    const double lift = inj.magnitude - 1.0;
    if (k <= rise_len) return 1.0 + kRise[3 - rise_len + k] * lift;
    const auto fall = static_cast<double>(k - rise_len);
    const auto steps = static_cast<double>(span - rise_len + 1);
    return inj.magnitude - lift * fall / steps;
}

} // namespace

void SynthSpec::validate() const {
    if (n_entities < 1 || n_entities > 99)
        throw ConfigError("n_entities must be in 1..99");
    if (days < 1)
        throw ConfigError("days must be positive");
    if (minutes_per_day < 4)
        throw ConfigError("minutes_per_day must be at least 4");
    if (!(low_level > 0) || !(high_level > low_level))
        throw ConfigError("levels must satisfy 0 < low < high");
    if (transition_minutes < 1 || transition_minutes > high_start_minute ||
        high_start_minute > minutes_per_day - transition_minutes)
        throw ConfigError("daily profile segments do not fit the day");
    if (!(noise_fraction >= 0) || noise_fraction >= 0.5)
        throw ConfigError("noise_fraction must be in [0, 0.5)");

    std::map<std::string, std::vector<std::pair<Timestamp, Timestamp>>> windows;
    for (const auto& inj : injections) {
        if (inj.start > inj.end)
            throw ConfigError("injection window is inverted");
        if (inj.start < 0 || inj.end >= total_minutes())
            throw ConfigError("injection window outside the generated range");
        if (!(inj.magnitude > 0))
            throw ConfigError("injection magnitude must be positive");
        windows[inj.entity].emplace_back(inj.start, inj.end);
    }
    for (auto& [entity, spans] : windows) {
        std::sort(spans.begin(), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i)
            if (spans[i].first <= spans[i - 1].second)
                throw ConfigError("overlapping injection windows for entity " + entity);
    }
}

std::string synth_entity_name(int index) {
    const int n = index + 1;
    std::string s = std::to_string(n);
    if (s.size() < 2) s.insert(s.begin(), '0');
    return "e" + s;
}

std::vector<InjectionSpec> place_injections(const SynthSpec& spec, int count, double magnitude,
                                            Timestamp duration) {
    spec.validate();
    if (count < 0)
        throw ConfigError("injection count must be non-negative");
    if (duration < 1)
        throw ConfigError("injection duration must be positive");
    const Timestamp total = spec.total_minutes();
    const Timestamp spacing = total / (count + 1);
    if (count > 0 && spacing <= duration + 1)
        throw ConfigError("injections do not fit the timeline without overlap");

    std::vector<InjectionSpec> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        InjectionSpec inj;
        inj.entity = synth_entity_name(i % spec.n_entities);
        inj.start = spacing * (i + 1);
        inj.end = inj.start + duration - 1;
        inj.magnitude = magnitude;
        inj.label = "spike";
        out.push_back(std::move(inj));
    }
    return out;
}

SynthResult generate_synthetic(const SynthSpec& spec) {
    spec.validate();
    const Timestamp total = spec.total_minutes();

    std::map<std::string, std::vector<const InjectionSpec*>> by_entity;
    for (const auto& inj : spec.injections) by_entity[inj.entity].push_back(&inj);

    std::mt19937_64 gen(spec.seed);
    SynthResult result;
    result.series.reserve(static_cast<std::size_t>(spec.n_entities) + 1);
    std::vector<double> aggregate(static_cast<std::size_t>(total), 0.0);

    for (int e = 0; e < spec.n_entities; ++e) {
        TimePointSeries s;
        s.entity = synth_entity_name(e);
        s.variable = "pkts";
        s.points.reserve(static_cast<std::size_t>(total));
        const double scale = 0.8 + 0.4 * unit_draw(gen);
        const auto inj_it = by_entity.find(s.entity);
        for (Timestamp m = 0; m < total; ++m) {
            double v = daily_base(spec, m) * scale;
            v *= 1.0 + spec.noise_fraction * (2.0 * unit_draw(gen) - 1.0);
            if (inj_it != by_entity.end())
                for (const InjectionSpec* inj : inj_it->second) v *= injection_factor(*inj, m);
            v = std::floor(v + 0.5);
            s.points.push_back({m, v});
            aggregate[static_cast<std::size_t>(m)] += v;
        }
        result.series.push_back(std::move(s));
    }

    if (spec.include_aggregate) {
        TimePointSeries s;
        s.entity = std::string(kWildcardEntity);
        s.variable = "total";
        s.points.reserve(static_cast<std::size_t>(total));
        for (Timestamp m = 0; m < total; ++m)
            s.points.push_back({m, aggregate[static_cast<std::size_t>(m)]});
        result.series.push_back(std::move(s));
    }

    result.truth.reserve(spec.injections.size());
    for (const auto& inj : spec.injections)
        result.truth.push_back({inj.entity, inj.start, inj.end, inj.label});
    return result;
}

} // namespace thaad
