#include "thaad/evaluation.hpp"

#include <algorithm>

namespace thaad {

bool intervals_overlap(Timestamp a_start, Timestamp a_end, Timestamp b_start, Timestamp b_end) {
    return a_start <= b_end && b_start <= a_end;
}

EvalResult EvalResult::from_counts(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
    if (tp < 0 || fp < 0 || fn < 0)
        throw InvalidInputError("counts must be non-negative");
    EvalResult r;
    r.tp = tp;
    r.fp = fp;
    r.fn = fn;
    if (tp + fn > 0) {
        r.tpr = static_cast<double>(tp) / static_cast<double>(tp + fn);
        r.fnr = 1.0 - *r.tpr;
    }
    if (2 * tp + fp + fn > 0)
        r.f1 = 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    return r;
}

EvalResult score(std::span<const AnomalyReport> reports, std::span<const GroundTruthEvent> truth) {
    for (const auto& r : reports)
        if (r.start > r.end)
            throw InvalidInputError("report interval is inverted");
    for (const auto& t : truth)
        if (t.start > t.end)
            throw InvalidInputError("truth interval is inverted");

    std::vector<bool> hit(truth.size(), false);
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    for (const auto& r : reports) {
        bool matched = false;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            const auto& t = truth[i];
            if (t.entity != kWildcardEntity && t.entity != r.entity) continue;
            if (!intervals_overlap(r.start, r.end, t.start, t.end)) continue;
            matched = true;
            hit[i] = true;
        }
        if (matched)
            ++tp;
        else
            ++fp;
    }
    const auto fn = static_cast<std::int64_t>(std::count(hit.begin(), hit.end(), false));
    return EvalResult::from_counts(tp, fp, fn);
}

std::vector<SweepCase> sweep_grid(const std::vector<std::int64_t>& alphas,
                                  const std::vector<double>& betas, bool betas_are_multipliers,
                                  const std::vector<int>& pattern_lengths,
                                  const std::vector<Metric>& metrics) {
    std::vector<SweepCase> cases;
    cases.reserve(alphas.size() * betas.size() * pattern_lengths.size() * metrics.size());
    for (std::int64_t a : alphas)
        for (double b : betas)
            for (int x : pattern_lengths)
                for (Metric m : metrics) {
                    SweepCase c;
                    c.alpha = a;
                    c.beta = betas_are_multipliers ? b * static_cast<double>(a) : b;
                    c.pattern_length = x;
                    c.metric = m;
                    cases.push_back(c);
                }
    return cases;
}

std::vector<SweepRow> sweep(const std::vector<TimePointSeries>& data,
                            std::span<const GroundTruthEvent> truth,
                            std::span<const SweepCase> cases, const PipelineConfig& base) {
    std::vector<SweepRow> rows;
    rows.reserve(cases.size());
    for (const SweepCase& c : cases) {
        PipelineConfig cfg = base;
        cfg.alpha = c.alpha;
        cfg.beta = c.beta;
        cfg.pattern_length = c.pattern_length;
        cfg.metric = c.metric;
        auto reports = detect_series(data, cfg);
        rows.push_back({c, score(reports, truth)});
    }
    return rows;
}

} // namespace thaad
