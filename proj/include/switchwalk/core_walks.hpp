#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace switchwalk {

/// A finite string of fair signs X_1..X_n. Entries are exactly -1 or +1.
class BitSequence {
public:
    BitSequence() = default;
    explicit BitSequence(std::vector<int8_t> bits);
    BitSequence(std::initializer_list<int> bits);

    /// n copies of `value`.
    static BitSequence filled(std::size_t n, int value);

    /// Bit i (0-based) is -1 iff bit i of `mask` is set.
    static BitSequence from_mask(std::uint64_t mask, std::size_t n);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    /// 0-based access; X_{i+1} in walk notation.
    int operator[](std::size_t i) const noexcept { return bits_[i]; }

    /// Negate the bit at 0-based index i.
    void flip(std::size_t i) noexcept { bits_[i] = static_cast<int8_t>(-bits_[i]); }
    void set(std::size_t i, int value);

    std::span<const int8_t> view() const noexcept { return bits_; }

    friend bool operator==(const BitSequence&, const BitSequence&) = default;

private:
    std::vector<int8_t> bits_;
};

enum class WalkKind { compass, switch_walk };

const char* to_string(WalkKind kind) noexcept;

/// Absolute positions of a unit-step lattice path, positions[0] is the origin.
struct WalkPath {
    WalkKind kind = WalkKind::switch_walk;
    std::vector<std::int64_t> positions;

    std::int64_t origin() const { return positions.front(); }
    std::size_t steps() const noexcept { return positions.empty() ? 0 : positions.size() - 1; }
    std::int64_t operator[](std::size_t i) const noexcept { return positions[i]; }

    friend bool operator==(const WalkPath&, const WalkPath&) = default;
};

/// Z_i = origin + sum_{k<=i} prod_{j<=k} X_j.
WalkPath switch_walk(const BitSequence& bits, std::int64_t origin = 0);

/// Y_i = origin + sum_{j<=i} X_j.
WalkPath compass_walk(const BitSequence& bits, std::int64_t origin = 0);

WalkPath walk(WalkKind kind, const BitSequence& bits, std::int64_t origin = 0);

/// Switch path of the string with bit m (1-based) negated, obtained by
/// reflecting positions m..n about positions[m-1]. Throws std::out_of_range
/// unless 1 <= m <= n.
WalkPath flip_suffix_image(const WalkPath& path, std::size_t m);

/// Smallest integer b with b >= i^alpha. Exact at integer powers.
std::int64_t barrier_floor(std::size_t i, double alpha);

/// The barrier sequence ceil(i^alpha) for i = 0..n (entry 0 unused, set to 0).
std::vector<std::int64_t> barrier_sequence(std::size_t n, double alpha);

/// True iff positions[i] >= ceil(i^alpha) for every 1 <= i <= n.
bool barrier_positive(const WalkPath& path, double alpha);

}  // namespace switchwalk
