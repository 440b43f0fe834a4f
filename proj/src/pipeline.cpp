#include "thaad/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>
#include <tuple>

namespace thaad {

const char* to_string(Origin o) { return o == Origin::Found ? "found" : "cold_start"; }

Origin origin_from_string(std::string_view text) {
    if (text == "found") return Origin::Found;
    if (text == "cold_start") return Origin::ColdStart;
    throw InvalidInputError("unknown origin: " + std::string(text));
}

const char* to_string(MatcherKind m) {
    return m == MatcherKind::Indexed ? "indexed" : "hash_exact";
}

MatcherKind matcher_from_string(std::string_view text) {
    if (text == "indexed") return MatcherKind::Indexed;
    if (text == "hash_exact") return MatcherKind::HashExact;
    throw InvalidInputError("unknown matcher: " + std::string(text));
}

std::int64_t PipelineConfig::candidate_duration_limit() const {
    if (max_candidate_duration) return *max_candidate_duration;
    return 4 * static_cast<std::int64_t>(pattern_length) * sample_period;
}

void PipelineConfig::validate() const {
    if (pattern_length < 1)
        throw ConfigError("pattern_length must be at least 1");
    if (alpha < 0)
        throw ConfigError("alpha must be non-negative");
    if (std::isnan(beta) || beta < 0)
        throw ConfigError("beta must be non-negative");
    if (sample_period < 1)
        throw ConfigError("sample_period must be positive");
    if (max_candidate_duration && *max_candidate_duration < 0)
        throw ConfigError("max_candidate_duration must be non-negative");
    abstraction.validate();
}

bool report_less(const AnomalyReport& a, const AnomalyReport& b) {
    const int oa = static_cast<int>(a.origin);
    const int ob = static_cast<int>(b.origin);
    return std::tie(a.entity, a.start, a.end, oa) < std::tie(b.entity, b.start, b.end, ob);
}

std::optional<AnomalyReport> filter_candidate(const PatternCandidate& cand,
                                              const PipelineConfig& cfg) {
    if (cand.pattern.empty()) return std::nullopt;
    if (cand.pattern.size() != cand.time_pattern.size())
        throw InvalidInputError("candidate values and timestamps are misaligned");

    std::vector<TrendSymbol> symbols;
    symbols.reserve(cand.pattern.size());
    int max_intensity = 0;
    for (Code c : cand.pattern) {
        TrendSymbol s = decode(c).symbol;
        symbols.push_back(s);
        max_intensity = std::max(max_intensity, intensity(s));
    }

    if (max_intensity < 2) return std::nullopt; // no medium-or-high trend at all
    if (cand.origin == Origin::ColdStart && max_intensity < 3) return std::nullopt;
    if (cand.duration() > cfg.candidate_duration_limit()) return std::nullopt;

    AnomalyReport rep;
    rep.entity = cand.entity;
    rep.start = cand.time_pattern.front();
    rep.end = cand.time_pattern.back();
    rep.origin = cand.origin;
    rep.symbols = std::move(symbols);
    rep.max_intensity = max_intensity;
    return rep;
}

std::vector<AnomalyReport> filter_candidates(std::span<const PatternCandidate> found,
                                             std::span<const PatternCandidate> cold_start,
                                             const PipelineConfig& cfg) {
    std::vector<AnomalyReport> out;
    for (const auto& c : found)
        if (auto r = filter_candidate(c, cfg)) out.push_back(std::move(*r));
    for (const auto& c : cold_start)
        if (auto r = filter_candidate(c, cfg)) out.push_back(std::move(*r));
    return out;
}

std::optional<PatternCandidate> run_entity(const std::vector<TimePointSeries>& series,
                                           const PipelineConfig& cfg) {
    cfg.validate();
    VariableMap vars;
    std::vector<Endpoint> endpoints;
    for (const auto& s : series) {
        const int vi = vars.index_of(s.variable);
        for (const auto& iv : abstract_series(s, cfg.abstraction)) {
            auto [open, close] = split_interval(iv, vi);
            endpoints.push_back(open);
            endpoints.push_back(close);
        }
    }
    NumericString str = encode(merge_endpoints(std::move(endpoints)));
    if (str.values.empty()) return std::nullopt;

    TextPatternSplit split = split_text_pattern(str, cfg.pattern_length);
    PatternCandidate cand;
    cand.entity = series.front().entity;
    cand.pattern = std::move(split.pattern);
    cand.time_pattern = std::move(split.time_pattern);
    if (split.cold_start_only) {
        cand.origin = Origin::ColdStart;
        return cand;
    }
    TextIndex idx = TextIndex::build(split.text, cfg.pattern_length);
    const bool found = cfg.matcher == MatcherKind::HashExact
                           ? idx.exact(cand.pattern).found
                           : idx.query(cand.pattern, cfg.alpha, cfg.beta, cfg.metric).found;
    cand.origin = found ? Origin::Found : Origin::ColdStart;
    return cand;
}

namespace {

PipelineConfig validated(PipelineConfig cfg) {
    cfg.validate();
    return cfg;
}

} // namespace

OnlineDetector::OnlineDetector(std::string entity, PipelineConfig cfg)
    : entity_(std::move(entity)), cfg_(validated(std::move(cfg))), index_(cfg_.pattern_length) {}

void OnlineDetector::push_interval(const SymbolicTimeInterval& iv, int var_index) {
    auto [open, close] = split_interval(iv, var_index);
    pending_.push(open);
    pending_.push(close);
}

void OnlineDetector::emit(const PatternCandidate& cand, std::vector<AnomalyReport>& out) {
    auto rep = filter_candidate(cand, cfg_);
    if (!rep) return;
    if (!seen_ranges_.emplace(rep->start, rep->end).second) return;
    out.push_back(std::move(*rep));
}

void OnlineDetector::append_symbol(const Endpoint& e, std::vector<AnomalyReport>& out) {
    string_.push_back(encode_endpoint(e));
    string_ts_.push_back(e.timestamp);
    const auto x = static_cast<std::size_t>(cfg_.pattern_length);
    const std::size_t len = string_.size();
    if (len < x + 1) return;

    // The element leaving the trailing window becomes text; the window that
    // ends at this append is the one pattern this position ever forms.
    index_.append(string_[len - x - 1]);
    std::span<const Code> pattern(string_.data() + (len - x), x);
    const bool found = cfg_.matcher == MatcherKind::HashExact
                           ? index_.exact(pattern).found
                           : index_.query(pattern, cfg_.alpha, cfg_.beta, cfg_.metric).found;

    PatternCandidate cand;
    cand.entity = entity_;
    cand.pattern.assign(pattern.begin(), pattern.end());
    cand.time_pattern.assign(string_ts_.end() - static_cast<std::ptrdiff_t>(x), string_ts_.end());
    cand.origin = found ? Origin::Found : Origin::ColdStart;
    emit(cand, out);
}

void OnlineDetector::drain(Timestamp watermark, std::vector<AnomalyReport>& out) {
    while (!pending_.empty() && pending_.top().timestamp < watermark) {
        Endpoint e = pending_.top();
        pending_.pop();
        append_symbol(e, out);
    }
}

std::vector<AnomalyReport> OnlineDetector::ingest(std::span<const Record> batch) {
    if (finished_)
        throw InvalidInputError("detector already finished");
    std::vector<AnomalyReport> out;

    // A pure fold over the record sequence: each record is admitted or
    // rejected from the per-variable prefix alone, so any batching of the
    // same stream admits the same points.
    for (const Record& r : batch) {
        if (r.entity != entity_ || !std::isfinite(r.value)) {
            ++rejected_;
            continue;
        }
        auto it = vars_.find(r.variable);
        if (it == vars_.end()) {
            // A variable surfacing below already-released string positions
            // could only sort endpoints into the past; refuse it.
            if (r.timestamp < released_watermark_) {
                ++rejected_;
                continue;
            }
            const int idx = varmap_.index_of(r.variable);
            it = vars_
                     .emplace(r.variable,
                              VarState{GradientAbstractor(r.variable, cfg_.abstraction), idx})
                     .first;
        } else if (auto last = it->second.abstractor.last_timestamp();
                   last && r.timestamp <= *last) {
            ++rejected_;
            continue;
        }
        if (auto iv = it->second.abstractor.push({r.timestamp, r.value}))
            push_interval(*iv, it->second.index);
    }

    if (!vars_.empty()) {
        // Endpoints strictly below every variable's next possible endpoint
        // timestamp are final in merged order.
        Timestamp w = std::numeric_limits<Timestamp>::max();
        for (const auto& [name, vs] : vars_) {
            const Timestamp last = *vs.abstractor.last_timestamp();
            Timestamp bound = last;
            if (!vs.abstractor.has_open_run() && last < std::numeric_limits<Timestamp>::max())
                bound = last + 1;
            w = std::min(w, bound);
        }
        drain(w, out);
        released_watermark_ = std::max(released_watermark_, w);
    }
    return out;
}

std::vector<AnomalyReport> OnlineDetector::finish() {
    std::vector<AnomalyReport> out;
    if (finished_) return out;
    finished_ = true;

    for (auto& [name, vs] : vars_)
        if (auto iv = vs.abstractor.finish()) push_interval(*iv, vs.index);
    while (!pending_.empty()) {
        Endpoint e = pending_.top();
        pending_.pop();
        append_symbol(e, out);
    }

    // A string that never outgrew the pattern length is itself the pattern;
    // it had no text to match against, so it can only be a cold start.
    if (!string_.empty() && string_.size() <= static_cast<std::size_t>(cfg_.pattern_length)) {
        PatternCandidate cand;
        cand.entity = entity_;
        cand.pattern = string_;
        cand.time_pattern = string_ts_;
        cand.origin = Origin::ColdStart;
        emit(cand, out);
    }
    return out;
}

std::vector<AnomalyReport> detect_series(const std::vector<TimePointSeries>& all_series,
                                         const PipelineConfig& cfg, int cycles) {
    cfg.validate();
    if (cycles < 1)
        throw InvalidInputError("cycle count must be positive");

    std::map<std::string, std::vector<Record>> per_entity;
    for (const auto& s : all_series)
        for (const auto& p : s.points)
            per_entity[s.entity].push_back({s.entity, s.variable, p.timestamp, p.value});

    std::vector<std::pair<std::string, std::vector<Record>>> work;
    work.reserve(per_entity.size());
    for (auto& [entity, recs] : per_entity) {
        std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
            return std::tie(a.timestamp, a.variable) < std::tie(b.timestamp, b.variable);
        });
        work.emplace_back(entity, std::move(recs));
    }

    std::vector<std::vector<AnomalyReport>> results(work.size());
    auto run_one = [&](std::size_t i) {
        const auto& [entity, recs] = work[i];
        OnlineDetector det(entity, cfg);
        std::vector<AnomalyReport> reps;
        const std::size_t n = recs.size();
        const auto k = static_cast<std::size_t>(cycles);
        for (std::size_t c = 0; c < k; ++c) {
            const std::size_t lo = n * c / k;
            const std::size_t hi = n * (c + 1) / k;
            auto r = det.ingest(std::span<const Record>(recs.data() + lo, hi - lo));
            reps.insert(reps.end(), std::make_move_iterator(r.begin()),
                        std::make_move_iterator(r.end()));
        }
        auto r = det.finish();
        reps.insert(reps.end(), std::make_move_iterator(r.begin()),
                    std::make_move_iterator(r.end()));
        results[i] = std::move(reps);
    };

    const auto workers = std::min<std::size_t>(
        std::max(1u, std::thread::hardware_concurrency()), work.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < work.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> futures;
        futures.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1))
                    run_one(i);
            }));
        for (auto& f : futures) f.get();
    }

    std::vector<AnomalyReport> out;
    for (auto& r : results)
        out.insert(out.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    std::sort(out.begin(), out.end(), report_less);
    return out;
}

} // namespace thaad
