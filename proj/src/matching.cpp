#include "thaad/matching.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <shared_mutex>

namespace thaad {

namespace {

std::int64_t sat_add(std::int64_t a, std::int64_t b) {
    if (b > 0 && a > std::numeric_limits<std::int64_t>::max() - b)
        return std::numeric_limits<std::int64_t>::max();
    if (b < 0 && a < std::numeric_limits<std::int64_t>::min() - b)
        return std::numeric_limits<std::int64_t>::min();
    return a + b;
}

std::int64_t sat_sub(std::int64_t a, std::int64_t b) {
    if (b < 0 && a > std::numeric_limits<std::int64_t>::max() + b)
        return std::numeric_limits<std::int64_t>::max();
    if (b > 0 && a < std::numeric_limits<std::int64_t>::min() + b)
        return std::numeric_limits<std::int64_t>::min();
    return a - b;
}

void check_tolerances(std::int64_t alpha, double beta) {
    if (alpha < 0)
        throw InvalidQueryError("alpha must be non-negative");
    if (std::isnan(beta) || beta < 0)
        throw InvalidQueryError("beta must be non-negative");
}

/// The single aggregate-bound comparison both matcher routes share. `accum`
/// is the deviation sum for L1 and the sum of squared deviations for L2;
/// keeping the expression identical on every path makes the routes agree
/// bit-for-bit.
bool within_beta(std::int64_t accum, double beta, Metric metric) {
    if (metric == Metric::L1)
        return static_cast<double>(accum) <= beta;
    return std::sqrt(static_cast<double>(accum)) <= beta;
}

bool window_matches(const Code* text, const Code* pattern, int x, std::int64_t alpha, double beta,
                    Metric metric) {
    std::int64_t accum = 0;
    for (int j = 0; j < x; ++j) {
        std::int64_t d = text[j] - pattern[j];
        if (d < 0) d = -d;
        if (alpha != kAlphaUnbounded && d > alpha) return false;
        accum += metric == Metric::L1 ? d : d * d;
    }
    return within_beta(accum, beta, metric);
}

} // namespace

const char* to_string(Metric m) { return m == Metric::L1 ? "L1" : "L2"; }

Metric metric_from_string(std::string_view text) {
    if (text == "L1" || text == "l1") return Metric::L1;
    if (text == "L2" || text == "l2") return Metric::L2;
    throw InvalidInputError("unknown metric: " + std::string(text));
}

void MatchQuery::validate() const {
    if (pattern.empty())
        throw InvalidQueryError("pattern must not be empty");
    check_tolerances(alpha, beta);
}

bool occurs_at(std::span<const Code> text, std::span<const Code> pattern, std::int64_t shift,
               std::int64_t alpha, double beta, Metric metric) {
    if (pattern.empty())
        throw InvalidQueryError("pattern must not be empty");
    check_tolerances(alpha, beta);
    const auto n = static_cast<std::int64_t>(text.size());
    const auto x = static_cast<std::int64_t>(pattern.size());
    if (shift < 0 || shift > n - x)
        throw InvalidQueryError("shift outside [0, n - x]");
    return window_matches(text.data() + shift, pattern.data(), static_cast<int>(x), alpha, beta,
                          metric);
}

std::vector<std::int64_t> brute_force_shifts(std::span<const Code> text,
                                             std::span<const Code> pattern, std::int64_t alpha,
                                             double beta, Metric metric) {
    if (pattern.empty())
        throw InvalidQueryError("pattern must not be empty");
    check_tolerances(alpha, beta);
    std::vector<std::int64_t> shifts;
    const auto n = static_cast<std::int64_t>(text.size());
    const auto x = static_cast<std::int64_t>(pattern.size());
    for (std::int64_t s = 0; s + x <= n; ++s)
        if (window_matches(text.data() + s, pattern.data(), static_cast<int>(x), alpha, beta,
                           metric))
            shifts.push_back(s);
    return shifts;
}

struct WindowTree::Node {
    std::int64_t count = 0;
    std::int64_t min_shift = std::numeric_limits<std::int64_t>::max();
    // Bounds of the subtree's points over the coordinates below this depth.
    std::vector<Code> lo, hi;
    // Distinct coordinate values one level down, sorted, with their subtrees.
    std::vector<Code> child_keys;
    std::vector<std::unique_ptr<Node>> children;
};

WindowTree::WindowTree(int dimension) : dimension_(dimension), root_(std::make_unique<Node>()) {
    if (dimension < 1)
        throw InvalidQueryError("window dimension must be at least 1");
}

WindowTree::~WindowTree() = default;
WindowTree::WindowTree(WindowTree&&) noexcept = default;
WindowTree& WindowTree::operator=(WindowTree&&) noexcept = default;

std::int64_t WindowTree::size() const { return root_->count; }

void WindowTree::insert(std::span<const Code> window, std::int64_t shift) {
    if (static_cast<int>(window.size()) != dimension_)
        throw InvalidQueryError("window size does not match index dimension");
    Node* node = root_.get();
    for (int depth = 0;; ++depth) {
        node->count += 1;
        node->min_shift = std::min(node->min_shift, shift);
        const int rem = dimension_ - depth;
        if (rem > 0) {
            if (node->lo.empty()) {
                node->lo.assign(window.begin() + depth, window.end());
                node->hi = node->lo;
            } else {
                for (int j = 0; j < rem; ++j) {
                    node->lo[j] = std::min(node->lo[j], window[depth + j]);
                    node->hi[j] = std::max(node->hi[j], window[depth + j]);
                }
            }
        }
        if (depth == dimension_) break;
        const Code key = window[depth];
        auto it = std::lower_bound(node->child_keys.begin(), node->child_keys.end(), key);
        auto pos = static_cast<std::size_t>(it - node->child_keys.begin());
        if (it == node->child_keys.end() || *it != key) {
            node->child_keys.insert(it, key);
            node->children.insert(node->children.begin() + static_cast<std::ptrdiff_t>(pos),
                                  std::make_unique<Node>());
        }
        node = node->children[pos].get();
    }
}

QueryResult WindowTree::query(std::span<const Code> pattern, std::int64_t alpha, double beta,
                              Metric metric) const {
    if (static_cast<int>(pattern.size()) != dimension_)
        throw InvalidQueryError("pattern size does not match index dimension");
    check_tolerances(alpha, beta);

    struct Search {
        std::span<const Code> pattern;
        std::int64_t alpha;
        double beta;
        Metric metric;
        std::int64_t count = 0;
        std::int64_t min_shift = std::numeric_limits<std::int64_t>::max();

        void descend(const Node* node, int depth, std::int64_t partial) {
            const int rem = static_cast<int>(pattern.size()) - depth;

            // The per-coordinate boxes give an exact envelope for the cube
            // test and lower/upper envelopes for the aggregate deviation of
            // every point below this node.
            std::int64_t min_rem = 0;
            std::int64_t max_rem = 0;
            bool cube_contains_box = true;
            for (int j = 0; j < rem; ++j) {
                const Code p = pattern[static_cast<std::size_t>(depth + j)];
                const Code lo = node->lo[static_cast<std::size_t>(j)];
                const Code hi = node->hi[static_cast<std::size_t>(j)];
                if (alpha != kAlphaUnbounded) {
                    const Code cube_lo = sat_sub(p, alpha);
                    const Code cube_hi = sat_add(p, alpha);
                    if (lo > cube_hi || hi < cube_lo) return; // subtree misses the cube
                    if (lo < cube_lo || hi > cube_hi) cube_contains_box = false;
                }
                const std::int64_t near = p < lo ? lo - p : (p > hi ? p - hi : 0);
                const std::int64_t far = std::max(p - lo, hi - p);
                if (metric == Metric::L1) {
                    min_rem += near;
                    max_rem += far;
                } else {
                    min_rem += near * near;
                    max_rem += far * far;
                }
            }

            if (!within_beta(partial + min_rem, beta, metric)) return;
            if (cube_contains_box && within_beta(partial + max_rem, beta, metric)) {
                count += node->count;
                min_shift = std::min(min_shift, node->min_shift);
                return;
            }

            // Mixed subtree: refine along the next coordinate.
            const Code p = pattern[static_cast<std::size_t>(depth)];
            const Code cube_lo =
                alpha == kAlphaUnbounded ? std::numeric_limits<Code>::min() : sat_sub(p, alpha);
            const Code cube_hi =
                alpha == kAlphaUnbounded ? std::numeric_limits<Code>::max() : sat_add(p, alpha);
            auto it = std::lower_bound(node->child_keys.begin(), node->child_keys.end(), cube_lo);
            for (; it != node->child_keys.end() && *it <= cube_hi; ++it) {
                const auto idx = static_cast<std::size_t>(it - node->child_keys.begin());
                std::int64_t d = *it - p;
                if (d < 0) d = -d;
                const std::int64_t step = metric == Metric::L1 ? d : d * d;
                descend(node->children[idx].get(), depth + 1, partial + step);
            }
        }
    };

    Search search{pattern, alpha, beta, metric};
    if (root_->count > 0) search.descend(root_.get(), 0, 0);
    QueryResult out;
    out.count = search.count;
    out.found = search.count > 0;
    if (out.found) out.first_shift = search.min_shift;
    return out;
}

std::size_t TextIndex::WindowHash::operator()(const std::vector<Code>& w) const {
    std::uint64_t h = 1469598103934665603ull;
    for (Code c : w) {
        auto v = static_cast<std::uint64_t>(c);
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xffu;
            h *= 1099511628211ull;
        }
    }
    return static_cast<std::size_t>(h);
}

TextIndex::TextIndex(int dimension) : dimension_(dimension), tree_(dimension) {
    if (dimension < 1)
        throw InvalidQueryError("index dimension must be at least 1");
}

TextIndex::TextIndex(std::span<const Code> text, int dimension) : TextIndex(dimension) {
    for (Code v : text) append(v);
}

TextIndex TextIndex::build(std::span<const Code> text, int dimension) {
    return TextIndex(text, dimension);
}

void TextIndex::append(Code value) {
    std::unique_lock lock(mutex_);
    text_.push_back(value);
    const auto n = static_cast<std::int64_t>(text_.size());
    if (n < dimension_) return;
    const std::int64_t shift = n - dimension_;
    std::span<const Code> window(text_.data() + shift, static_cast<std::size_t>(dimension_));
    tree_.insert(window, shift);
    std::vector<Code> key(window.begin(), window.end());
    auto [it, fresh] = exact_.try_emplace(std::move(key), WindowAgg{0, shift});
    it->second.count += 1;
    if (!fresh) it->second.min_shift = std::min(it->second.min_shift, shift);
}

QueryResult TextIndex::query(std::span<const Code> pattern, std::int64_t alpha, double beta,
                             Metric metric) const {
    std::shared_lock lock(mutex_);
    if (static_cast<int>(pattern.size()) != dimension_)
        throw InvalidQueryError("pattern size does not match index dimension");
    if (static_cast<std::int64_t>(text_.size()) < dimension_) {
        check_tolerances(alpha, beta);
        return {};
    }
    return tree_.query(pattern, alpha, beta, metric);
}

QueryResult TextIndex::exact(std::span<const Code> pattern) const {
    std::shared_lock lock(mutex_);
    if (static_cast<int>(pattern.size()) != dimension_)
        throw InvalidQueryError("pattern size does not match index dimension");
    std::vector<Code> key(pattern.begin(), pattern.end());
    auto it = exact_.find(key);
    if (it == exact_.end()) return {};
    return {true, it->second.count, it->second.min_shift};
}

std::int64_t TextIndex::window_count() const {
    std::shared_lock lock(mutex_);
    return tree_.size();
}

std::vector<Code> TextIndex::text() const {
    std::shared_lock lock(mutex_);
    return text_;
}

} // namespace thaad
