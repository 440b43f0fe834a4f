#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "thaad/types.hpp"

namespace thaad {

/// A five-digit endpoint code: open_digit * 10000 + symbol * 100 + variable.
using Code = std::int64_t;

inline constexpr int kMaxVariables = 100;
inline constexpr Code kMinCode = 10000;
inline constexpr Code kMaxCode = 29999;

/// One end of a symbolic interval, ready for lexicographic merging.
/// `open` marks the begin endpoint; the close endpoint of the same interval
/// carries its finish timestamp.
struct Endpoint {
    Timestamp timestamp = 0;
    int variable = 0; // 0..99
    TrendSymbol symbol = TrendSymbol::Stable;
    bool open = true;

    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// Total order of the merged event string: timestamp, then variable index,
/// then symbol code, then the open digit (close = 1 before open = 2).
bool endpoint_less(const Endpoint& a, const Endpoint& b);

/// Endpoints sorted by endpoint_less.
using EventString = std::vector<Endpoint>;

/// The encoded event string: code values plus their source timestamps,
/// index-aligned.
struct NumericString {
    std::vector<Code> values;
    std::vector<Timestamp> timestamps;

    std::size_t size() const { return values.size(); }
};

/// Assigns each variable name a stable small index in first-seen order.
/// An explicit seed list pins the first indices from configuration.
class VariableMap {
public:
    VariableMap() = default;
    explicit VariableMap(const std::vector<std::string>& seed_order);

    /// Index of `name`, assigning the next free index on first sight.
    /// Throws EncodingError once the two-digit capacity is exhausted.
    int index_of(const std::string& name);

    std::optional<int> find(const std::string& name) const;
    const std::vector<std::string>& names() const { return names_; }
    std::size_t size() const { return names_.size(); }

private:
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> names_;
};

/// The two endpoints of an interval. A zero-length interval yields two
/// endpoints with equal timestamps; the merged order then places the close
/// endpoint first.
std::pair<Endpoint, Endpoint> split_interval(const SymbolicTimeInterval& interval,
                                             int variable_index);

/// Sorts endpoints into the pinned total order.
EventString merge_endpoints(std::vector<Endpoint> endpoints);

/// Five-digit code of one endpoint.
Code encode_endpoint(const Endpoint& e);

/// Encodes a merged event string. Values and timestamps stay index-aligned.
NumericString encode(const EventString& events);

/// Exact inverse of encode_endpoint for valid codes; the timestamp is not
/// part of the code and comes back as 0. Codes outside [10000, 29999] or
/// with a symbol digit pair above 6 are rejected.
Endpoint decode(Code value);

/// The string split used by matching: text = everything before the last x
/// values, pattern = the last x values with their timestamps. A string of
/// length <= x cannot form a text; `cold_start_only` is set and the whole
/// string becomes the pattern.
struct TextPatternSplit {
    std::vector<Code> text;
    std::vector<Code> pattern;
    std::vector<Timestamp> time_pattern;
    bool cold_start_only = false;
};

TextPatternSplit split_text_pattern(const NumericString& s, int x);

} // namespace thaad
