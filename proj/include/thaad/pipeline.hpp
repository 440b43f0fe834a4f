#pragma once

#include <map>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thaad/abstraction.hpp"
#include "thaad/encoding.hpp"
#include "thaad/matching.hpp"
#include "thaad/types.hpp"

namespace thaad {

enum class Origin { Found, ColdStart };

const char* to_string(Origin o);
Origin origin_from_string(std::string_view text);

/// Found/cold-start routing backend: the tolerance index or the plain hash
/// table of windows. With alpha = beta = 0 the two agree report-for-report.
enum class MatcherKind { Indexed, HashExact };

const char* to_string(MatcherKind m);
MatcherKind matcher_from_string(std::string_view text);

struct PipelineConfig {
    int pattern_length = 5;
    std::int64_t alpha = 100;
    double beta = 300.0;
    Metric metric = Metric::L1;
    MatcherKind matcher = MatcherKind::Indexed;
    /// Time units between consecutive samples; scales the duration filter.
    std::int64_t sample_period = 1;
    /// Longest reportable candidate span; unset means 4 * x * sample_period.
    std::optional<std::int64_t> max_candidate_duration;
    AbstractionConfig abstraction;

    std::int64_t candidate_duration_limit() const;
    void validate() const;
};

/// The trailing pattern of one entity's event string, with the timestamps it
/// spans and how the matcher routed it.
struct PatternCandidate {
    std::string entity;
    std::vector<Code> pattern;
    std::vector<Timestamp> time_pattern;
    Origin origin = Origin::ColdStart;

    Timestamp duration() const {
        return time_pattern.empty() ? 0 : time_pattern.back() - time_pattern.front();
    }
};

struct AnomalyReport {
    std::string entity;
    Timestamp start = 0;
    Timestamp end = 0;
    Origin origin = Origin::ColdStart;
    std::vector<TrendSymbol> symbols; // decoded pattern content
    int max_intensity = 0;            // strongest trend present, 0..3

    friend bool operator==(const AnomalyReport&, const AnomalyReport&) = default;
};

/// Deterministic output order: (entity, start, end, origin).
bool report_less(const AnomalyReport& a, const AnomalyReport& b);

/// Applies the candidate filter rules to one candidate: it must carry at
/// least one medium-or-high trend symbol, a cold-start candidate must carry
/// a high one, and its span must not exceed the duration limit.
std::optional<AnomalyReport> filter_candidate(const PatternCandidate& cand,
                                              const PipelineConfig& cfg);

/// Filters both candidate lists into reports, found list first.
std::vector<AnomalyReport> filter_candidates(std::span<const PatternCandidate> found,
                                             std::span<const PatternCandidate> cold_start,
                                             const PipelineConfig& cfg);

/// Single-shot run over one entity's full history: abstract every variable,
/// merge and encode, split text/pattern and route through the matcher.
/// Yields the one trailing candidate, a whole-string cold-start candidate
/// when the string is no longer than x, or nothing when the string is empty.
std::optional<PatternCandidate> run_entity(const std::vector<TimePointSeries>& series,
                                           const PipelineConfig& cfg);

/// Streaming detector for one entity. Feed record batches in cycles; each
/// cycle extends the per-variable abstractions, merges newly fixed string
/// elements in final order, appends them to the text index and evaluates
/// every trailing window exactly once. finish() flushes the open runs and
/// short-string cold start. Because every string position is evaluated once
/// no matter how the input is batched, any split of the same records yields
/// the same final report set. Reports are deduplicated on their time range
/// across the detector's whole life.
class OnlineDetector {
public:
    OnlineDetector(std::string entity, PipelineConfig cfg);

    /// Ingests one batch. Records for other entities, non-finite values,
    /// timestamps not strictly increasing within their variable, and new
    /// variables starting below the released watermark are rejected and
    /// counted, not fatal.
    std::vector<AnomalyReport> ingest(std::span<const Record> batch);

    /// Closes all open runs and evaluates what remains, including the
    /// whole-string cold start for strings of length 1..x. Idempotent.
    std::vector<AnomalyReport> finish();

    const std::string& entity() const { return entity_; }
    std::int64_t rejected_count() const { return rejected_; }
    std::int64_t string_length() const { return static_cast<std::int64_t>(string_.size()); }

private:
    struct VarState {
        GradientAbstractor abstractor;
        int index;
    };
    struct PendingOrder {
        bool operator()(const Endpoint& a, const Endpoint& b) const {
            return endpoint_less(b, a); // min-heap
        }
    };

    void push_interval(const SymbolicTimeInterval& iv, int var_index);
    void append_symbol(const Endpoint& e, std::vector<AnomalyReport>& out);
    void emit(const PatternCandidate& cand, std::vector<AnomalyReport>& out);
    void drain(Timestamp watermark, std::vector<AnomalyReport>& out);

    std::string entity_;
    PipelineConfig cfg_;
    std::map<std::string, VarState> vars_;
    VariableMap varmap_;
    std::priority_queue<Endpoint, std::vector<Endpoint>, PendingOrder> pending_;
    std::vector<Code> string_;
    std::vector<Timestamp> string_ts_;
    TextIndex index_;
    std::set<std::pair<Timestamp, Timestamp>> seen_ranges_;
    Timestamp released_watermark_ = std::numeric_limits<Timestamp>::min();
    std::int64_t rejected_ = 0;
    bool finished_ = false;
};

/// Runs the streaming detector over every entity in the input, feeding each
/// entity's records in timestamp order as `cycles` contiguous batches, and
/// returns all reports sorted by report_less. Entities run in parallel.
std::vector<AnomalyReport> detect_series(const std::vector<TimePointSeries>& all_series,
                                         const PipelineConfig& cfg, int cycles = 1);

} // namespace thaad
