#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thaad/evaluation.hpp"
#include "thaad/types.hpp"

namespace thaad {

/// One multiplicative spike: the factor climbs steeply to `magnitude` over
/// the first few samples of the closed window and decays linearly back
/// toward 1 across the rest, so the sharp change sits at the window head and
/// the tail re-approaches the baseline from inside the window.
struct InjectionSpec {
    std::string entity;
    Timestamp start = 0;
    Timestamp end = 0;
    double magnitude = 3.0;
    std::string label = "spike";
};

/// Daily two-level traffic profile: a low plateau, a linear climb, a high
/// plateau and a linear descent, with per-minute bounded noise. Ramps are
/// gradual enough that normal days stay inside the stable band.
struct SynthSpec {
    std::uint64_t seed = 42;
    int n_entities = 20;
    int days = 7;
    int minutes_per_day = 1440;
    double low_level = 75000.0;
    double high_level = 200000.0;
    int high_start_minute = 840;
    int transition_minutes = 150;
    double noise_fraction = 0.01;
    bool include_aggregate = true;
    std::vector<InjectionSpec> injections;

    Timestamp total_minutes() const {
        return static_cast<Timestamp>(days) * minutes_per_day;
    }
    void validate() const;
};

struct SynthResult {
    std::vector<TimePointSeries> series;
    std::vector<GroundTruthEvent> truth; // one event per injection, same order
};

/// "e01", "e02", ... two-digit zero padded.
std::string synth_entity_name(int index);

/// Deterministic placement of `count` spikes of the given magnitude and
/// length: entities rotate, windows are spread evenly over the timeline and
/// never overlap globally.
std::vector<InjectionSpec> place_injections(const SynthSpec& spec, int count, double magnitude,
                                            Timestamp duration);

/// Per-entity series (variable "pkts") plus, when configured, the aggregate
/// entity "*" (variable "total") holding the per-minute sum. Deterministic:
/// equal specs yield identical results.
SynthResult generate_synthetic(const SynthSpec& spec);

} // namespace thaad
