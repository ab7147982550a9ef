#include "switchwalk/path_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace switchwalk {

PathTree::PathTree(std::span<const std::int64_t> positions, std::span<const std::int64_t> barrier)
    : n_(positions.size()), barrier_(barrier.begin(), barrier.end()) {
    if (positions.size() != barrier.size()) {
        throw std::invalid_argument("PathTree: positions and barrier differ in length");
    }
    if (n_ == 0) return;
    nodes_.resize(4 * n_);
    build(1, 0, n_ - 1, positions);
}

void PathTree::build(std::size_t node, std::size_t lo, std::size_t hi,
                     std::span<const std::int64_t> positions) {
    if (lo == hi) {
        nodes_[node].min_lo = positions[lo] - barrier_[lo];
        nodes_[node].max_hi = positions[lo] + barrier_[lo];
        return;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    build(2 * node, lo, mid, positions);
    build(2 * node + 1, mid + 1, hi, positions);
    pull_up(node);
}

void PathTree::apply(Node& node, const Affine& f) noexcept {
    if (f.sign == 1) {
        node.min_lo += f.shift;
        node.max_hi += f.shift;
    } else {
        // Z' = c - Z:  Z' - b = c - (Z + b),  Z' + b = c - (Z - b)
        const std::int64_t lo = f.shift - node.max_hi;
        const std::int64_t hi = f.shift - node.min_lo;
        node.min_lo = lo;
        node.max_hi = hi;
    }
    // pending g then f: x -> f.sign * (g.sign * x + g.shift) + f.shift
    node.pending.shift = f.sign * node.pending.shift + f.shift;
    node.pending.sign *= f.sign;
}

void PathTree::push_down(std::size_t node) {
    if (nodes_[node].pending.identity()) return;
    apply(nodes_[2 * node], nodes_[node].pending);
    apply(nodes_[2 * node + 1], nodes_[node].pending);
    nodes_[node].pending = Affine{};
}

void PathTree::pull_up(std::size_t node) noexcept {
    nodes_[node].min_lo = std::min(nodes_[2 * node].min_lo, nodes_[2 * node + 1].min_lo);
    nodes_[node].max_hi = std::max(nodes_[2 * node].max_hi, nodes_[2 * node + 1].max_hi);
}

void PathTree::update(std::size_t node, std::size_t lo, std::size_t hi, std::size_t first,
                      std::size_t last, const Affine& f) {
    if (last < lo || hi < first) return;
    if (first <= lo && hi <= last) {
        apply(nodes_[node], f);
        return;
    }
    push_down(node);
    const std::size_t mid = lo + (hi - lo) / 2;
    update(2 * node, lo, mid, first, last, f);
    update(2 * node + 1, mid + 1, hi, first, last, f);
    pull_up(node);
}

std::int64_t PathTree::query(std::size_t node, std::size_t lo, std::size_t hi, std::size_t i) {
    while (lo != hi) {
        push_down(node);
        const std::size_t mid = lo + (hi - lo) / 2;
        if (i <= mid) {
            node = 2 * node;
            hi = mid;
        } else {
            node = 2 * node + 1;
            lo = mid + 1;
        }
    }
    return nodes_[node].min_lo + barrier_[i];
}

std::int64_t PathTree::position(std::size_t i) {
    if (i < 1 || i > n_) throw std::out_of_range("PathTree::position index out of range");
    return query(1, 0, n_ - 1, i - 1);
}

void PathTree::reflect_suffix(std::size_t first, std::int64_t pivot) {
    if (first < 1 || first > n_) throw std::out_of_range("PathTree::reflect_suffix index out of range");
    update(1, 0, n_ - 1, first - 1, n_ - 1, Affine{-1, pivot});
}

void PathTree::shift_range(std::size_t first, std::size_t last, std::int64_t shift) {
    if (first < 1 || last > n_ || first > last) {
        throw std::out_of_range("PathTree::shift_range bounds out of range");
    }
    update(1, 0, n_ - 1, first - 1, last - 1, Affine{1, shift});
}

std::vector<std::int64_t> PathTree::positions() {
    std::vector<std::int64_t> out(n_);
    for (std::size_t i = 1; i <= n_; ++i) out[i - 1] = position(i);
    return out;
}

}  // namespace switchwalk
