#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "thaad/errors.hpp"
#include "thaad/matching.hpp"

using namespace thaad;

namespace {

/// Small-alphabet texts make approximate collisions common, so tolerance
/// logic is actually exercised instead of everything missing trivially.
std::vector<Code> random_text(std::mt19937_64& gen, std::int64_t n, Code lo = 20000,
                              Code spread = 40) {
    std::vector<Code> text;
    text.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i)
        text.push_back(lo + static_cast<Code>(gen() % static_cast<std::uint64_t>(spread)));
    return text;
}

std::vector<Code> random_pattern(std::mt19937_64& gen, std::span<const Code> text, int x) {
    // Usually a displaced copy of a real window, sometimes pure noise.
    std::vector<Code> p;
    const auto n = static_cast<std::int64_t>(text.size());
    if (n >= x && gen() % 4 != 0) {
        const auto shift = static_cast<std::int64_t>(gen() % static_cast<std::uint64_t>(n - x + 1));
        p.assign(text.begin() + shift, text.begin() + shift + x);
        for (auto& v : p)
            if (gen() % 3 == 0) v += static_cast<Code>(gen() % 7) - 3;
    } else {
        std::mt19937_64 g2(gen());
        p = random_text(g2, x);
    }
    return p;
}

std::int64_t random_alpha(std::mt19937_64& gen) {
    switch (gen() % 5) {
    case 0: return 0;
    case 1: return kAlphaUnbounded;
    case 2: return static_cast<std::int64_t>(gen() % 3);
    case 3: return static_cast<std::int64_t>(gen() % 20);
    default: return static_cast<std::int64_t>(gen() % 200);
    }
}

double random_beta(std::mt19937_64& gen) {
    switch (gen() % 5) {
    case 0: return 0.0;
    case 1: return kBetaUnbounded;
    case 2: return static_cast<double>(gen() % 8);
    default: return static_cast<double>(gen() % 400);
    }
}

QueryResult oracle_result(std::span<const Code> text, std::span<const Code> pattern,
                          std::int64_t alpha, double beta, Metric metric) {
    const auto shifts = brute_force_shifts(text, pattern, alpha, beta, metric);
    QueryResult r;
    r.found = !shifts.empty();
    r.count = static_cast<std::int64_t>(shifts.size());
    if (r.found) r.first_shift = shifts.front();
    return r;
}

} // namespace

TEST_CASE("occurs_at checks both tolerance stages") {
    const std::vector<Code> text{10, 20, 30, 40, 50};
    const std::vector<Code> pat{21, 29};

    // Shift 1: per-element deviations (1, 1).
    CHECK(occurs_at(text, pat, 1, 1, 2.0, Metric::L1));
    CHECK_FALSE(occurs_at(text, pat, 1, 0, 2.0, Metric::L1)); // alpha too tight
    CHECK_FALSE(occurs_at(text, pat, 1, 1, 1.9, Metric::L1)); // beta too tight
    CHECK(occurs_at(text, pat, 1, 1, std::sqrt(2.0) + 1e-9, Metric::L2));
    CHECK_FALSE(occurs_at(text, pat, 1, 1, std::sqrt(2.0) - 1e-9, Metric::L2));

    // Alpha alone passing does not imply beta passes.
    CHECK_FALSE(occurs_at(text, pat, 1, 2, 1.0, Metric::L1));

    CHECK_THROWS_AS(occurs_at(text, pat, -1, 1, 1.0, Metric::L1), InvalidQueryError);
    CHECK_THROWS_AS(occurs_at(text, pat, 4, 1, 1.0, Metric::L1), InvalidQueryError);
    CHECK_THROWS_AS(occurs_at(text, std::vector<Code>{}, 0, 1, 1.0, Metric::L1),
                    InvalidQueryError);
    CHECK_THROWS_AS(occurs_at(text, pat, 0, -1, 1.0, Metric::L1), InvalidQueryError);
    CHECK_THROWS_AS(occurs_at(text, pat, 0, 1, -0.5, Metric::L1), InvalidQueryError);
}

TEST_CASE("brute force on a worked example") {
    const std::vector<Code> text{5, 6, 7, 6, 5, 6, 7};
    const std::vector<Code> pat{6, 7};
    CHECK(brute_force_shifts(text, pat, 0, 0.0, Metric::L1) == std::vector<std::int64_t>{1, 5});
    CHECK(brute_force_shifts(text, pat, 1, 2.0, Metric::L1) ==
          std::vector<std::int64_t>{0, 1, 2, 4, 5});
    CHECK(brute_force_shifts(text, pat, kAlphaUnbounded, kBetaUnbounded, Metric::L1) ==
          std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
    // Pattern longer than the text: nowhere to stand.
    CHECK(brute_force_shifts(pat, text, kAlphaUnbounded, kBetaUnbounded, Metric::L1).empty());
}

TEST_CASE("indexed query equals the scan oracle over randomized instances") {
    std::mt19937_64 gen(99);
    int nonempty = 0;
    for (int round = 0; round < 12000; ++round) {
        const int x = 1 + static_cast<int>(gen() % 6);
        const auto n = static_cast<std::int64_t>(gen() % 501);
        const auto text = random_text(gen, n);
        const auto pattern = random_pattern(gen, text, x);
        const std::int64_t alpha = random_alpha(gen);
        const double beta = random_beta(gen);
        const Metric metric = gen() % 2 == 0 ? Metric::L1 : Metric::L2;

        const TextIndex index = TextIndex::build(text, x);
        const QueryResult got = index.query(pattern, alpha, beta, metric);
        const QueryResult want = oracle_result(text, pattern, alpha, beta, metric);
        REQUIRE(got == want);
        if (want.found) ++nonempty;
    }
    // The instance mix must exercise real matches, not just misses.
    CHECK(nonempty > 2000);
}

TEST_CASE("append interleaved with queries equals from-scratch rebuild") {
    std::mt19937_64 gen(123);
    for (int round = 0; round < 1000; ++round) {
        const int x = 1 + static_cast<int>(gen() % 4);
        TextIndex live(x);
        std::vector<Code> text;
        const int steps = 1 + static_cast<int>(gen() % 40);
        for (int s = 0; s < steps; ++s) {
            const Code v = 20000 + static_cast<Code>(gen() % 25);
            live.append(v);
            text.push_back(v);
            if (gen() % 3 == 0) {
                const auto pattern = random_pattern(gen, text, x);
                const std::int64_t alpha = random_alpha(gen);
                const double beta = random_beta(gen);
                const Metric metric = gen() % 2 == 0 ? Metric::L1 : Metric::L2;
                const TextIndex rebuilt = TextIndex::build(text, x);
                const QueryResult a = live.query(pattern, alpha, beta, metric);
                REQUIRE(a == rebuilt.query(pattern, alpha, beta, metric));
                REQUIRE(a == oracle_result(text, pattern, alpha, beta, metric));
                REQUIRE(live.exact(pattern) == rebuilt.exact(pattern));
            }
        }
        REQUIRE(live.text() == text);
        const auto want_windows =
            static_cast<std::int64_t>(text.size()) >= x
                ? static_cast<std::int64_t>(text.size()) - x + 1
                : 0;
        REQUIRE(live.window_count() == want_windows);
    }
}

TEST_CASE("exact lookup equals the zero-tolerance query") {
    std::mt19937_64 gen(7);
    for (int round = 0; round < 1000; ++round) {
        const int x = 1 + static_cast<int>(gen() % 5);
        const auto text = random_text(gen, static_cast<std::int64_t>(gen() % 200), 20000, 12);
        const auto pattern = random_pattern(gen, text, x);
        const TextIndex index = TextIndex::build(text, x);
        const QueryResult via_hash = index.exact(pattern);
        const QueryResult via_tree = index.query(pattern, 0, 0.0, Metric::L1);
        REQUIRE(via_hash == via_tree);
        REQUIRE(via_hash == index.query(pattern, 0, 0.0, Metric::L2));
    }
}

TEST_CASE("match sets grow with alpha and beta and L1 implies L2") {
    std::mt19937_64 gen(31);
    for (int round = 0; round < 400; ++round) {
        const int x = 1 + static_cast<int>(gen() % 5);
        const auto text = random_text(gen, 40 + static_cast<std::int64_t>(gen() % 200));
        const auto pattern = random_pattern(gen, text, x);
        const std::int64_t alpha = static_cast<std::int64_t>(gen() % 40);
        const double beta = static_cast<double>(gen() % 80);

        const auto base = brute_force_shifts(text, pattern, alpha, beta, Metric::L1);
        const auto wider_alpha =
            brute_force_shifts(text, pattern, alpha + 1 + static_cast<std::int64_t>(gen() % 30),
                               beta, Metric::L1);
        const auto wider_beta =
            brute_force_shifts(text, pattern, alpha,
                               beta + 1.0 + static_cast<double>(gen() % 50), Metric::L1);
        const auto l2 = brute_force_shifts(text, pattern, alpha, beta, Metric::L2);

        CHECK(std::includes(wider_alpha.begin(), wider_alpha.end(), base.begin(), base.end()));
        CHECK(std::includes(wider_beta.begin(), wider_beta.end(), base.begin(), base.end()));
        // An L1 sum within beta forces the L2 norm within beta.
        CHECK(std::includes(l2.begin(), l2.end(), base.begin(), base.end()));
    }
}

TEST_CASE("unbounded sentinels accept every shift") {
    std::mt19937_64 gen(17);
    const auto text = random_text(gen, 300);
    const std::vector<Code> pattern{20001, 29999, 10000, 25000};
    const TextIndex index = TextIndex::build(text, 4);
    const QueryResult r = index.query(pattern, kAlphaUnbounded, kBetaUnbounded, Metric::L1);
    CHECK(r.found);
    CHECK(r.count == static_cast<std::int64_t>(text.size()) - 4 + 1);
    CHECK(r.first_shift == 0);

    // Alpha alone unbounded still enforces beta.
    const QueryResult tight = index.query(pattern, kAlphaUnbounded, 0.0, Metric::L1);
    CHECK(tight ==
          oracle_result(text, pattern, kAlphaUnbounded, 0.0, Metric::L1));
}

TEST_CASE("count is per occurrence and first_shift is minimal") {
    // Three identical windows; a repeated window must count every shift.
    const std::vector<Code> text{20005, 20005, 20005, 20005};
    const TextIndex index = TextIndex::build(text, 2);
    const QueryResult r = index.query(std::vector<Code>{20005, 20005}, 0, 0.0, Metric::L1);
    CHECK(r.found);
    CHECK(r.count == 3);
    CHECK(r.first_shift == 0);

    const QueryResult near = index.query(std::vector<Code>{20004, 20006}, 1, 2.0, Metric::L1);
    CHECK(near.count == 3);
    CHECK(near.first_shift == 0);
}

TEST_CASE("queries on short or empty texts return nothing but still validate") {
    TextIndex index(3);
    const std::vector<Code> pattern{20000, 20001, 20002};
    CHECK(index.query(pattern, 5, 5.0, Metric::L1) == QueryResult{});
    CHECK(index.exact(pattern) == QueryResult{});
    index.append(20000);
    index.append(20001);
    CHECK(index.query(pattern, kAlphaUnbounded, kBetaUnbounded, Metric::L1) == QueryResult{});
    CHECK(index.window_count() == 0);

    CHECK_THROWS_AS(index.query(pattern, -2, 5.0, Metric::L1), InvalidQueryError);
    CHECK_THROWS_AS(index.query(pattern, 2, -5.0, Metric::L1), InvalidQueryError);
    CHECK_THROWS_AS(index.query(pattern, 2, std::nan(""), Metric::L1), InvalidQueryError);
}

TEST_CASE("dimension mismatches are rejected") {
    std::mt19937_64 gen(3);
    const auto text = random_text(gen, 50);
    const TextIndex index = TextIndex::build(text, 4);
    const std::vector<Code> wrong{20000, 20001};
    CHECK_THROWS_AS(index.query(wrong, 1, 1.0, Metric::L1), InvalidQueryError);
    CHECK_THROWS_AS(index.exact(wrong), InvalidQueryError);
    CHECK_THROWS_AS(TextIndex(0), InvalidQueryError);
    CHECK_THROWS_AS(WindowTree(0), InvalidQueryError);

    WindowTree tree(3);
    const std::vector<Code> window{1, 2};
    CHECK_THROWS_AS(tree.insert(window, 0), InvalidQueryError);
}

TEST_CASE("window tree stands alone") {
    WindowTree tree(2);
    CHECK(tree.size() == 0);
    tree.insert(std::vector<Code>{10, 20}, 7);
    tree.insert(std::vector<Code>{10, 22}, 3);
    tree.insert(std::vector<Code>{10, 20}, 1);
    CHECK(tree.size() == 3);
    CHECK(tree.dimension() == 2);

    QueryResult r = tree.query(std::vector<Code>{10, 21}, 2, 3.0, Metric::L1);
    CHECK(r.count == 3);
    CHECK(r.first_shift == 1); // min shift across duplicates, not insert order

    r = tree.query(std::vector<Code>{10, 20}, 0, 0.0, Metric::L1);
    CHECK(r.count == 2);
    CHECK(r.first_shift == 1);

    r = tree.query(std::vector<Code>{11, 21}, 1, 1.0, Metric::L1);
    CHECK_FALSE(r.found); // each element passes alpha, the sum misses beta
}

TEST_CASE("metric names round-trip") {
    CHECK(metric_from_string(to_string(Metric::L1)) == Metric::L1);
    CHECK(metric_from_string(to_string(Metric::L2)) == Metric::L2);
    CHECK(metric_from_string("l2") == Metric::L2);
    CHECK_THROWS_AS(metric_from_string("L3"), InvalidInputError);
    MatchQuery q;
    q.pattern = {20000};
    q.alpha = -1;
    CHECK_THROWS_AS(q.validate(), InvalidQueryError);
}

TEST_CASE("concurrent readers observe consistent snapshots") {
    TextIndex index(3);
    for (int i = 0; i < 50; ++i) index.append(20000 + i % 9);

    std::atomic<bool> stop{false};
    std::atomic<bool> failed{false};
    std::vector<std::thread> readers;
    const std::vector<Code> pattern{20002, 20003, 20004};
    for (int r = 0; r < 4; ++r) {
        readers.emplace_back([&] {
            while (!stop.load()) {
                const auto text = index.text();
                const QueryResult got =
                    index.query(pattern, 1, 3.0, Metric::L1);
                // The live result can only outgrow this snapshot's answer.
                const QueryResult want = oracle_result(text, pattern, 1, 3.0, Metric::L1);
                if (got.count < want.count) failed.store(true);
            }
        });
    }
    for (int i = 0; i < 3000; ++i) index.append(20000 + i % 9);
    stop.store(true);
    for (auto& t : readers) t.join();
    CHECK_FALSE(failed.load());

    const QueryResult finally = index.query(pattern, 1, 3.0, Metric::L1);
    CHECK(finally == oracle_result(index.text(), pattern, 1, 3.0, Metric::L1));
}
