#include "thaad/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "thaad/encoding.hpp"

namespace thaad {

namespace {

/// Two interleaved variables with randomized run lengths and symbols, pushed
/// through the interval split, merge and encode path, truncated to `count`
/// codes.
std::vector<Code> workload_text(std::int64_t count, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::vector<Endpoint> endpoints;
    const std::int64_t per_var = count / 2 + 2; // endpoints each variable contributes
    for (int var = 0; var < 2; ++var) {
        Timestamp t = 10 + var; // interleave the two variables' boundaries
        int prev_symbol = -1;
        for (std::int64_t made = 0; made < per_var; made += 2) {
            const auto run = static_cast<Timestamp>(1 + gen() % 6);
            int sym = static_cast<int>(gen() % kTrendSymbolCount);
            if (sym == prev_symbol) sym = (sym + 1) % kTrendSymbolCount;
            prev_symbol = sym;
            SymbolicTimeInterval iv{t, t + run - 1, "v", symbol_from_ordinal(sym)};
            auto [open, close] = split_interval(iv, var);
            endpoints.push_back(open);
            endpoints.push_back(close);
            t += run * 2; // leave gaps so the two variables interleave
        }
    }
    NumericString s = encode(merge_endpoints(std::move(endpoints)));
    s.values.resize(static_cast<std::size_t>(count));
    return std::move(s.values);
}

std::vector<Code> non_matching_pattern(std::span<const Code> text, const BenchSpec& spec,
                                       std::mt19937_64& gen) {
    const auto n = static_cast<std::int64_t>(text.size());
    const auto x = static_cast<std::int64_t>(spec.pattern_length);
    const auto shift = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n - x + 1));
    std::vector<Code> pattern(text.begin() + shift, text.begin() + shift + x);
    // Push the last coordinate out of every window's reach, then verify.
    const std::int64_t bump = 2 * spec.alpha + 1 + static_cast<std::int64_t>(
                                                       gen() % static_cast<std::uint64_t>(
                                                                   spec.alpha + 1));
    pattern.back() += bump;
    while (!brute_force_shifts(text, pattern, spec.alpha, spec.beta, spec.metric).empty())
        pattern.back() += spec.alpha + 1;
    return pattern;
}

} // namespace

BenchSpec BenchSpec::defaults() {
    BenchSpec spec;
    for (int p = 10; p <= 17; ++p) spec.sizes.push_back(std::int64_t{1} << p);
    return spec;
}

void BenchSpec::validate() const {
    if (sizes.empty())
        throw ConfigError("bench needs at least one size");
    if (pattern_length < 1)
        throw ConfigError("pattern_length must be at least 1");
    for (std::int64_t n : sizes)
        if (n < pattern_length)
            throw ConfigError("every bench size must be at least the pattern length");
    if (alpha < 0 || std::isnan(beta) || beta < 0)
        throw ConfigError("tolerances must be non-negative");
    if (queries_per_size < 1)
        throw ConfigError("queries_per_size must be positive");
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
    spec.validate();
    using clock = std::chrono::steady_clock;

    const std::int64_t max_n = *std::max_element(spec.sizes.begin(), spec.sizes.end());
    const std::vector<Code> master = workload_text(max_n, spec.seed);

    std::vector<BenchRow> rows;
    rows.reserve(spec.sizes.size());
    std::mt19937_64 gen(spec.seed + 1);

    for (std::int64_t n : spec.sizes) {
        std::span<const Code> text(master.data(), static_cast<std::size_t>(n));
        TextIndex index = TextIndex::build(text, spec.pattern_length);

        std::vector<std::vector<Code>> patterns;
        patterns.reserve(static_cast<std::size_t>(spec.queries_per_size));
        for (int q = 0; q < spec.queries_per_size; ++q)
            patterns.push_back(non_matching_pattern(text, spec, gen));

        // One untimed pass warms caches and checks the hard-negative
        // property; the reported cost is the fastest of several timed
        // passes, which rejects scheduler interference.
        std::int64_t hits = 0;
        for (const auto& p : patterns) {
            hits += static_cast<std::int64_t>(
                brute_force_shifts(text, p, spec.alpha, spec.beta, spec.metric).size());
            hits += index.query(p, spec.alpha, spec.beta, spec.metric).count;
        }
        if (hits != 0)
            throw Error("bench patterns unexpectedly matched");

        constexpr int kReps = 5;
        const auto best_of = [&](auto&& pass) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (int rep = 0; rep < kReps; ++rep) {
                const auto t0 = clock::now();
                pass();
                const auto t1 = clock::now();
                best = std::min(
                    best, std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
            }
            return best;
        };
        std::int64_t sink = 0;
        const std::int64_t oracle_total = best_of([&] {
            for (const auto& p : patterns)
                sink += static_cast<std::int64_t>(
                    brute_force_shifts(text, p, spec.alpha, spec.beta, spec.metric).size());
        });
        const std::int64_t index_total = best_of([&] {
            for (const auto& p : patterns)
                sink += index.query(p, spec.alpha, spec.beta, spec.metric).count;
        });
        if (sink != 0)
            throw Error("bench patterns unexpectedly matched");

        const auto q = static_cast<std::int64_t>(spec.queries_per_size);
        BenchRow row;
        row.n = n;
        row.x = spec.pattern_length;
        row.alpha = spec.alpha;
        row.beta = spec.beta;
        row.oracle_ns = oracle_total / q;
        row.index_ns = index_total / q;
        rows.push_back(row);
    }
    return rows;
}

double fitted_exponent(const std::vector<BenchRow>& rows) {
    if (rows.size() < 2)
        throw InvalidInputError("exponent fit needs at least two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const auto n = static_cast<double>(rows.size());
    for (const auto& r : rows) {
        const double lx = std::log(static_cast<double>(r.n));
        const double ly = std::log(static_cast<double>(std::max<std::int64_t>(r.index_ns, 1)));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace thaad
