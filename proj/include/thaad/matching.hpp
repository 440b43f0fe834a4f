#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "thaad/encoding.hpp"
#include "thaad/errors.hpp"

namespace thaad {

enum class Metric { L1, L2 };

/// Per-element tolerance sentinel: no per-element bound at all.
inline constexpr std::int64_t kAlphaUnbounded = std::numeric_limits<std::int64_t>::max();

/// Aggregate tolerance sentinel for convenience; any non-finite beta works.
inline constexpr double kBetaUnbounded = std::numeric_limits<double>::infinity();

const char* to_string(Metric m);
Metric metric_from_string(std::string_view text);

/// A pattern with its matching tolerances.
struct MatchQuery {
    std::vector<Code> pattern;
    std::int64_t alpha = 0;
    double beta = 0.0;
    Metric metric = Metric::L1;

    void validate() const;
};

/// True when pattern occurs at `shift`: every element within alpha and the
/// aggregate deviation within beta. shift must lie in [0, n - x].
bool occurs_at(std::span<const Code> text, std::span<const Code> pattern, std::int64_t shift,
               std::int64_t alpha, double beta, Metric metric);

/// Every matching shift, ascending. The reference matcher: a plain scan that
/// every indexed path must agree with exactly.
std::vector<std::int64_t> brute_force_shifts(std::span<const Code> text,
                                             std::span<const Code> pattern, std::int64_t alpha,
                                             double beta, Metric metric);

struct QueryResult {
    bool found = false;
    std::int64_t count = 0;
    std::optional<std::int64_t> first_shift;

    friend bool operator==(const QueryResult&, const QueryResult&) = default;
};

/// Multi-level range structure over the x-dimensional window points of a
/// text. One search level per coordinate, over the distinct values seen for
/// that coordinate under each prefix; every node carries its subtree's
/// multiplicity, minimum shift and per-coordinate bounds, so whole canonical
/// subtrees are counted or pruned without enumeration and only distinct
/// surviving windows are checked against the aggregate bound.
class WindowTree {
public:
    explicit WindowTree(int dimension);
    ~WindowTree();
    WindowTree(WindowTree&&) noexcept;
    WindowTree& operator=(WindowTree&&) noexcept;

    void insert(std::span<const Code> window, std::int64_t shift);
    QueryResult query(std::span<const Code> pattern, std::int64_t alpha, double beta,
                      Metric metric) const;

    int dimension() const { return dimension_; }
    std::int64_t size() const;

private:
    struct Node;
    int dimension_;
    std::unique_ptr<Node> root_;
};

/// Index over the text side of a growing string. Holds the text values, the
/// range structure over their x-windows, and a hash table of the same
/// windows for exact lookups. Appends extend the text by one value and admit
/// the window that newly fits inside it; queries after any append sequence
/// equal a from-scratch rebuild. One writer and any number of concurrent
/// readers are supported; readers see a consistent snapshot.
class TextIndex {
public:
    explicit TextIndex(int dimension);

    static TextIndex build(std::span<const Code> text, int dimension);

    /// Appends the next text value, indexing the window it completes.
    void append(Code value);

    /// Two-stage tolerance query; agrees with brute_force_shifts exactly.
    QueryResult query(std::span<const Code> pattern, std::int64_t alpha, double beta,
                      Metric metric) const;
    QueryResult query(const MatchQuery& q) const { return query(q.pattern, q.alpha, q.beta, q.metric); }

    /// Hash-table equality lookup; equals query(pattern, 0, 0, any metric).
    QueryResult exact(std::span<const Code> pattern) const;

    int dimension() const { return dimension_; }
    std::int64_t window_count() const;
    std::vector<Code> text() const;

private:
    TextIndex(std::span<const Code> text, int dimension);

    struct WindowHash {
        std::size_t operator()(const std::vector<Code>& w) const;
    };
    struct WindowAgg {
        std::int64_t count = 0;
        std::int64_t min_shift = 0;
    };

    int dimension_;
    std::vector<Code> text_;
    WindowTree tree_;
    std::unordered_map<std::vector<Code>, WindowAgg, WindowHash> exact_;
    mutable std::shared_mutex mutex_;
};

} // namespace thaad
