#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace switchwalk {

/// Philox4x32-10 counter-based block function (Salmon et al., SC'11 / Random123).
/// Maps a 128-bit counter and 64-bit key to 128 pseudo-random bits.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) noexcept {
        ctr = round(ctr, key);
        for (int r = 1; r < 10; ++r) {
            key[0] += 0x9E3779B9U;
            key[1] += 0xBB67AE85U;
            ctr = round(ctr, key);
        }
        return ctr;
    }

private:
    static Counter round(const Counter& c, const Key& k) noexcept {
        const std::uint64_t p0 = std::uint64_t{0xD2511F53U} * c[0];
        const std::uint64_t p1 = std::uint64_t{0xCD9E8D57U} * c[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    }
};

/// Identifies one trial's randomness: the master seed is the Philox key and the
/// stream index occupies the upper half of the counter, so distinct
/// (master_seed, stream_index) pairs address disjoint counter ranges of one
/// keyed bijection. Within a stream, 2^64 blocks are available.
struct RngStreamSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;
};

/// UniformRandomBitGenerator over one Philox stream, producing 64-bit words.
class StreamRng {
public:
    using result_type = std::uint64_t;

    explicit StreamRng(RngStreamSpec spec) noexcept
        : key_{static_cast<std::uint32_t>(spec.master_seed),
               static_cast<std::uint32_t>(spec.master_seed >> 32)},
          stream_lo_(static_cast<std::uint32_t>(spec.stream_index)),
          stream_hi_(static_cast<std::uint32_t>(spec.stream_index >> 32)) {}

    StreamRng(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
        : StreamRng(RngStreamSpec{master_seed, stream_index}) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        if (buffered_ == 0) refill();
        --buffered_;
        return buffer_[buffered_];
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_open_closed() noexcept { return 1.0 - uniform(); }

    /// Exponential with the given rate.
    double exponential(double rate) noexcept { return -std::log(uniform_open_closed()) / rate; }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// +1 or -1 with equal probability.
    int sign() noexcept { return ((*this)() >> 63) ? -1 : 1; }

    /// Number of failures before the first success, success probability p in (0, 1].
    std::uint64_t geometric(double p) noexcept {
        if (p >= 1.0) return 0;
        const double g = std::floor(std::log(uniform_open_closed()) / std::log1p(-p));
        if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
        return static_cast<std::uint64_t>(g);
    }

    std::uint64_t blocks_used() const noexcept { return block_index_; }

private:
    void refill() noexcept {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(block_index_),
                                      static_cast<std::uint32_t>(block_index_ >> 32), stream_lo_,
                                      stream_hi_};
        const auto out = Philox4x32::block(ctr, key_);
        ++block_index_;
        // served from the back, so buffer_[1] is the first word of the block
        buffer_[1] = (std::uint64_t{out[1]} << 32) | out[0];
        buffer_[0] = (std::uint64_t{out[3]} << 32) | out[2];
        buffered_ = 2;
    }

    Philox4x32::Key key_;
    std::uint32_t stream_lo_;
    std::uint32_t stream_hi_;
    std::uint64_t block_index_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    int buffered_ = 0;
};

}  // namespace switchwalk
