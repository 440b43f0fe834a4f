#include "thaad/encoding.hpp"

#include <algorithm>
#include <tuple>

namespace thaad {

namespace {

int open_digit(bool open) { return open ? 2 : 1; }

} // namespace

bool endpoint_less(const Endpoint& a, const Endpoint& b) {
    return std::tuple(a.timestamp, a.variable, ordinal(a.symbol), open_digit(a.open)) <
           std::tuple(b.timestamp, b.variable, ordinal(b.symbol), open_digit(b.open));
}

VariableMap::VariableMap(const std::vector<std::string>& seed_order) {
    for (const auto& name : seed_order) index_of(name);
}

int VariableMap::index_of(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    if (names_.size() >= kMaxVariables)
        throw EncodingError("variable capacity exhausted: cannot map '" + name +
                            "' beyond " + std::to_string(kMaxVariables) + " variables");
    int idx = static_cast<int>(names_.size());
    index_.emplace(name, idx);
    names_.push_back(name);
    return idx;
}

std::optional<int> VariableMap::find(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::pair<Endpoint, Endpoint> split_interval(const SymbolicTimeInterval& interval,
                                             int variable_index) {
    if (interval.finish < interval.begin)
        throw InvalidInputError("interval finish precedes begin");
    if (variable_index < 0 || variable_index >= kMaxVariables)
        throw EncodingError("variable index out of range: " + std::to_string(variable_index));
    Endpoint open{interval.begin, variable_index, interval.symbol, true};
    Endpoint close{interval.finish, variable_index, interval.symbol, false};
    return {open, close};
}

EventString merge_endpoints(std::vector<Endpoint> endpoints) {
    std::stable_sort(endpoints.begin(), endpoints.end(), endpoint_less);
    return endpoints;
}

Code encode_endpoint(const Endpoint& e) {
    if (e.variable < 0 || e.variable >= kMaxVariables)
        throw EncodingError("variable index out of range: " + std::to_string(e.variable));
    return static_cast<Code>(open_digit(e.open)) * 10000 +
           static_cast<Code>(ordinal(e.symbol)) * 100 + e.variable;
}

NumericString encode(const EventString& events) {
    NumericString out;
    out.values.reserve(events.size());
    out.timestamps.reserve(events.size());
    for (const Endpoint& e : events) {
        out.values.push_back(encode_endpoint(e));
        out.timestamps.push_back(e.timestamp);
    }
    return out;
}

Endpoint decode(Code value) {
    if (value < kMinCode || value > kMaxCode)
        throw EncodingError("code out of range: " + std::to_string(value));
    int open = static_cast<int>(value / 10000);
    int sym = static_cast<int>((value / 100) % 100);
    int var = static_cast<int>(value % 100);
    if (sym >= kTrendSymbolCount)
        throw EncodingError("code has no trend symbol: " + std::to_string(value));
    return Endpoint{0, var, static_cast<TrendSymbol>(sym), open == 2};
}

TextPatternSplit split_text_pattern(const NumericString& s, int x) {
    if (x < 1) throw InvalidInputError("pattern length must be at least 1");
    if (s.values.size() != s.timestamps.size())
        throw InvalidInputError("numeric string values/timestamps misaligned");

    TextPatternSplit out;
    const std::size_t n = s.size();
    if (n <= static_cast<std::size_t>(x)) {
        out.cold_start_only = true;
        out.pattern = s.values;
        out.time_pattern = s.timestamps;
        return out;
    }
    const std::size_t cut = n - static_cast<std::size_t>(x);
    out.text.assign(s.values.begin(), s.values.begin() + cut);
    out.pattern.assign(s.values.begin() + cut, s.values.end());
    out.time_pattern.assign(s.timestamps.begin() + cut, s.timestamps.end());
    return out;
}

} // namespace thaad
