#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thaad/bench.hpp"
#include "thaad/evaluation.hpp"
#include "thaad/pipeline.hpp"
#include "thaad/types.hpp"

namespace thaad {

/// Full run settings: the pipeline knobs, the variable order that pins the
/// first variable indices, the generator seed and optional file paths.
struct RunConfig {
    PipelineConfig pipeline;
    std::vector<std::string> variables;
    std::uint64_t seed = 42;
    std::string points_path;
    std::string truth_path;
    std::string output_path;

    /// Parses the JSON object; unknown keys and ill-typed values are
    /// configuration errors, malformed JSON is a parse error.
    static RunConfig from_json_text(const std::string& text);
    static RunConfig from_json_file(const std::string& path);
};

/// THAAD_SEED from the environment, when set. Non-numeric content is a
/// configuration error.
std::optional<std::uint64_t> env_seed_override();

/// CSV: entity,variable,timestamp,value. Rows are grouped into series sorted
/// by (entity, variable) and each series is sorted by timestamp; duplicate
/// (entity, variable, timestamp) rows are rejected with their line number.
std::vector<TimePointSeries> load_time_points(const std::string& path);
void write_time_points(const std::string& path, std::span<const TimePointSeries> series);

/// CSV: entity,start,end,label. The entity "*" matches any report entity.
std::vector<GroundTruthEvent> load_truth(const std::string& path);
void write_truth(const std::string& path, std::span<const GroundTruthEvent> truth);

/// One abstraction interval, tagged with its entity for serialization.
struct IntervalRow {
    std::string entity;
    SymbolicTimeInterval interval;

    friend bool operator==(const IntervalRow&, const IntervalRow&) = default;
};

/// CSV: entity,variable,begin,finish,symbol.
std::vector<IntervalRow> load_intervals(const std::string& path);
void write_intervals(const std::string& path, std::span<const IntervalRow> rows);

/// CSV: entity,start,end,origin.
std::vector<AnomalyReport> load_reports(const std::string& path);
void write_reports(const std::string& path, std::span<const AnomalyReport> reports);

/// CSV: alpha,beta,x,metric,tp,fp,fn,tpr,fnr,f1. Absent rates are "na".
std::vector<SweepRow> load_sweep(const std::string& path);
void write_sweep(const std::string& path, std::span<const SweepRow> rows);

/// CSV: n,x,alpha,beta,oracle_ns,index_ns.
std::vector<BenchRow> load_bench(const std::string& path);
void write_bench(const std::string& path, std::span<const BenchRow> rows);

} // namespace thaad
