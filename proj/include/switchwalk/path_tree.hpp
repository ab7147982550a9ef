#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace switchwalk {

/// Lazy segment tree over a walk Z_1..Z_n against a fixed barrier b_1..b_n.
///
/// Every node keeps min(Z_i - b_i) and max(Z_i + b_i) over its range. Range
/// updates are maps x -> sign * x + shift on Z; a reflection x -> c - x swaps
/// the two aggregates and negates them about c, so both stay exact under any
/// composition of updates. Point queries and updates are O(log n).
class PathTree {
public:
    PathTree() = default;

    /// positions[i] is Z_{i+1}; barrier[i] is b_{i+1}. Sizes must match.
    PathTree(std::span<const std::int64_t> positions, std::span<const std::int64_t> barrier);

    std::size_t size() const noexcept { return n_; }

    /// Z_i for 1 <= i <= n.
    std::int64_t position(std::size_t i);

    /// Z_i <- pivot - Z_i for first <= i <= n (1-based).
    void reflect_suffix(std::size_t first, std::int64_t pivot);

    /// Z_i <- Z_i + shift on [first, last] (1-based, inclusive).
    void shift_range(std::size_t first, std::size_t last, std::int64_t shift);

    /// min_i (Z_i - b_i); the barrier event holds iff this is >= 0.
    std::int64_t min_slack() const noexcept { return n_ == 0 ? 0 : nodes_[1].min_lo; }

    /// max_i (Z_i + b_i).
    std::int64_t max_hi() const noexcept { return n_ == 0 ? 0 : nodes_[1].max_hi; }

    bool barrier_holds() const noexcept { return min_slack() >= 0; }

    /// Current Z_1..Z_n.
    std::vector<std::int64_t> positions();

private:
    struct Affine {
        std::int64_t sign = 1;
        std::int64_t shift = 0;
        bool identity() const noexcept { return sign == 1 && shift == 0; }
    };

    struct Node {
        std::int64_t min_lo = 0;  // min(Z - b)
        std::int64_t max_hi = 0;  // max(Z + b)
        Affine pending;
    };

    void build(std::size_t node, std::size_t lo, std::size_t hi, std::span<const std::int64_t> positions);
    static void apply(Node& node, const Affine& f) noexcept;
    void push_down(std::size_t node);
    void pull_up(std::size_t node) noexcept;
    void update(std::size_t node, std::size_t lo, std::size_t hi, std::size_t first, std::size_t last,
                const Affine& f);
    std::int64_t query(std::size_t node, std::size_t lo, std::size_t hi, std::size_t i);

    std::size_t n_ = 0;
    std::vector<std::int64_t> barrier_;
    std::vector<Node> nodes_;
};

}  // namespace switchwalk
