#pragma once

#include <cstdint>
#include <vector>

#include "thaad/matching.hpp"

namespace thaad {

struct BenchSpec {
    /// Text sizes in codes; defaults to 2^10 .. 2^17.
    std::vector<std::int64_t> sizes;
    int pattern_length = 5;
    std::int64_t alpha = 100;
    double beta = 300.0;
    Metric metric = Metric::L1;
    int queries_per_size = 64;
    std::uint64_t seed = 7;

    static BenchSpec defaults();
    void validate() const;
};

struct BenchRow {
    std::int64_t n = 0;
    int x = 0;
    std::int64_t alpha = 0;
    double beta = 0.0;
    std::int64_t oracle_ns = 0; // mean per query
    std::int64_t index_ns = 0;  // mean per query
};

/// Times the scan matcher against the indexed matcher on one shared text per
/// size. The text is an encoded two-variable event string built through the
/// split/merge/encode path; queries are displaced windows verified to match
/// nowhere, so the scan must always walk the whole text while the index can
/// prune.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

/// Least-squares slope of log(index_ns) against log(n); the growth exponent
/// of query time in text size.
double fitted_exponent(const std::vector<BenchRow>& rows);

} // namespace thaad
