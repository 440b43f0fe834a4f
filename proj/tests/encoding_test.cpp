#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "thaad/encoding.hpp"
#include "thaad/errors.hpp"

using namespace thaad;

TEST_CASE("worked code values") {
    const Endpoint open_ih{7, 0, TrendSymbol::IncreaseHigh, true};
    const Endpoint open_im{7, 1, TrendSymbol::IncreaseMedium, true};
    CHECK(encode_endpoint(open_ih) == 20600);
    CHECK(encode_endpoint(open_im) == 20501);
    CHECK(encode_endpoint(open_ih) - encode_endpoint(open_im) == 99);

    const Endpoint close_s{7, 42, TrendSymbol::Stable, false};
    CHECK(encode_endpoint(close_s) == 10342);
}

TEST_CASE("decode inverts encode over every valid endpoint") {
    int checked = 0;
    for (int open = 0; open < 2; ++open) {
        for (int sym = 0; sym < kTrendSymbolCount; ++sym) {
            for (int var = 0; var < kMaxVariables; ++var) {
                const Endpoint e{0, var, symbol_from_ordinal(sym), open == 1};
                const Code c = encode_endpoint(e);
                CHECK(c >= kMinCode);
                CHECK(c <= kMaxCode);
                CHECK(decode(c) == e);
                ++checked;
            }
        }
    }
    CHECK(checked == 2 * kTrendSymbolCount * kMaxVariables);
}

TEST_CASE("decode rejects out-of-range and gap codes") {
    CHECK_THROWS_AS(decode(9999), EncodingError);
    CHECK_THROWS_AS(decode(30000), EncodingError);
    CHECK_THROWS_AS(decode(0), EncodingError);
    CHECK_THROWS_AS(decode(-20600), EncodingError);
    CHECK_THROWS_AS(decode(20700), EncodingError); // symbol digit pair 7 has no meaning
    CHECK_THROWS_AS(decode(29999), EncodingError);
}

TEST_CASE("encode_endpoint rejects out-of-range variables") {
    CHECK_THROWS_AS(encode_endpoint({0, -1, TrendSymbol::Stable, true}), EncodingError);
    CHECK_THROWS_AS(encode_endpoint({0, kMaxVariables, TrendSymbol::Stable, true}),
                    EncodingError);
}

TEST_CASE("split_interval produces the interval's two ends") {
    const SymbolicTimeInterval iv{5, 9, "pkts", TrendSymbol::DecreaseMedium};
    const auto [open, close] = split_interval(iv, 3);
    CHECK(open == Endpoint{5, 3, TrendSymbol::DecreaseMedium, true});
    CHECK(close == Endpoint{9, 3, TrendSymbol::DecreaseMedium, false});

    CHECK_THROWS_AS(split_interval({9, 5, "pkts", TrendSymbol::Stable}, 0), InvalidInputError);
    CHECK_THROWS_AS(split_interval(iv, -1), EncodingError);
    CHECK_THROWS_AS(split_interval(iv, kMaxVariables), EncodingError);
}

TEST_CASE("merged order: timestamp, variable, symbol, close before open") {
    // A zero-length interval's close endpoint sorts before its own open.
    const SymbolicTimeInterval point{4, 4, "v", TrendSymbol::IncreaseHigh};
    const auto [open, close] = split_interval(point, 0);
    const EventString merged = merge_endpoints({open, close});
    REQUIRE(merged.size() == 2);
    CHECK_FALSE(merged[0].open);
    CHECK(merged[1].open);

    Endpoint a{1, 0, TrendSymbol::Stable, true};
    Endpoint b{2, 0, TrendSymbol::Stable, true};
    CHECK(endpoint_less(a, b));
    b = a;
    b.variable = 1;
    CHECK(endpoint_less(a, b));
    b = a;
    a.symbol = TrendSymbol::DecreaseHigh;
    CHECK(endpoint_less(a, b));
    b = a;
    b.open = true;
    a.open = false;
    CHECK(endpoint_less(a, b));
    CHECK_FALSE(endpoint_less(b, b));
}

TEST_CASE("merge_endpoints sorts like the comparator on shuffled input") {
    std::mt19937_64 gen(5);
    std::vector<Endpoint> endpoints;
    for (int i = 0; i < 1400; ++i) {
        Endpoint e;
        e.timestamp = static_cast<Timestamp>(gen() % 50);
        e.variable = static_cast<int>(gen() % 4);
        e.symbol = symbol_from_ordinal(static_cast<int>(gen() % kTrendSymbolCount));
        e.open = gen() % 2 == 0;
        endpoints.push_back(e);
    }
    const EventString merged = merge_endpoints(endpoints);
    REQUIRE(merged.size() == endpoints.size());
    CHECK(std::is_sorted(merged.begin(), merged.end(), endpoint_less));

    // Same multiset both sides.
    auto expected = endpoints;
    std::sort(expected.begin(), expected.end(), endpoint_less);
    CHECK(merged == expected);

    // Encoding stays index-aligned with the merged order.
    const NumericString s = encode(merged);
    REQUIRE(s.size() == merged.size());
    for (std::size_t i = 0; i < merged.size(); ++i) {
        CHECK(s.values[i] == encode_endpoint(merged[i]));
        CHECK(s.timestamps[i] == merged[i].timestamp);
        Endpoint back = decode(s.values[i]);
        back.timestamp = merged[i].timestamp;
        CHECK(back == merged[i]);
    }
}

TEST_CASE("variable map assigns first-seen indices and honors the seed order") {
    VariableMap map;
    CHECK(map.index_of("b") == 0);
    CHECK(map.index_of("a") == 1);
    CHECK(map.index_of("b") == 0);
    CHECK(map.find("a") == 1);
    CHECK_FALSE(map.find("zzz").has_value());
    CHECK(map.names() == std::vector<std::string>{"b", "a"});

    VariableMap seeded(std::vector<std::string>{"total", "pkts"});
    CHECK(seeded.find("total") == 0);
    CHECK(seeded.index_of("pkts") == 1);
    CHECK(seeded.index_of("new") == 2);
}

TEST_CASE("variable map capacity is the two-digit space") {
    VariableMap map;
    for (int i = 0; i < kMaxVariables; ++i)
        CHECK(map.index_of("v" + std::to_string(i)) == i);
    CHECK_THROWS_AS(map.index_of("one-too-many"), EncodingError);
    // Existing names still resolve after the failed insert.
    CHECK(map.index_of("v0") == 0);
    CHECK(map.size() == static_cast<std::size_t>(kMaxVariables));
}

TEST_CASE("text/pattern split") {
    NumericString s;
    for (Code c = 0; c < 8; ++c) {
        s.values.push_back(20300 + c);
        s.timestamps.push_back(100 + c);
    }

    SUBCASE("long string: text is the prefix, pattern the last x") {
        const auto split = split_text_pattern(s, 5);
        CHECK_FALSE(split.cold_start_only);
        CHECK(split.text == std::vector<Code>{20300, 20301, 20302});
        CHECK(split.pattern == std::vector<Code>{20303, 20304, 20305, 20306, 20307});
        CHECK(split.time_pattern == std::vector<Timestamp>{103, 104, 105, 106, 107});
    }

    SUBCASE("string of exactly x: everything is a cold-start pattern") {
        s.values.resize(5);
        s.timestamps.resize(5);
        const auto split = split_text_pattern(s, 5);
        CHECK(split.cold_start_only);
        CHECK(split.text.empty());
        CHECK(split.pattern == s.values);
        CHECK(split.time_pattern == s.timestamps);
    }

    SUBCASE("shorter than x is still a cold start") {
        s.values.resize(2);
        s.timestamps.resize(2);
        const auto split = split_text_pattern(s, 5);
        CHECK(split.cold_start_only);
        CHECK(split.pattern.size() == 2);
    }

    SUBCASE("empty string") {
        const NumericString empty;
        const auto split = split_text_pattern(empty, 5);
        CHECK(split.cold_start_only);
        CHECK(split.pattern.empty());
    }

    SUBCASE("invalid inputs") {
        CHECK_THROWS_AS(split_text_pattern(s, 0), InvalidInputError);
        NumericString skewed = s;
        skewed.timestamps.pop_back();
        CHECK_THROWS_AS(split_text_pattern(skewed, 5), InvalidInputError);
    }
}
