#include <cmath>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "switchwalk/core_walks.hpp"

using namespace switchwalk;

namespace {

std::vector<std::int64_t> brute_switch(const BitSequence& bits) {
    std::vector<std::int64_t> z{0};
    for (std::size_t k = 0; k < bits.size(); ++k) {
        int prod = 1;
        for (std::size_t j = 0; j <= k; ++j) prod *= bits[j];
        z.push_back(z.back() + prod);
    }
    return z;
}

}  // namespace

TEST_CASE("switch and compass walks on a hand example") {
    const BitSequence bits{1, -1, -1, 1, -1};
    CHECK(switch_walk(bits).positions == std::vector<std::int64_t>{0, 1, 0, 1, 2, 1});
    CHECK(compass_walk(bits).positions == std::vector<std::int64_t>{0, 1, 0, -1, 0, -1});
    CHECK(switch_walk(bits, 3).positions.front() == 3);
    CHECK(walk(WalkKind::compass, bits) == compass_walk(bits));
    CHECK(switch_walk(BitSequence{}).positions == std::vector<std::int64_t>{0});
}

TEST_CASE("bit validation") {
    CHECK_THROWS_AS(BitSequence({1, 0, -1}), std::invalid_argument);
    BitSequence b = BitSequence::filled(3, 1);
    CHECK_THROWS_AS(b.set(1, 2), std::invalid_argument);
    b.set(1, -1);
    CHECK(b[1] == -1);
    CHECK(BitSequence::from_mask(0b101, 3) == BitSequence{-1, 1, -1});
}

TEST_CASE("switch walk matches the product definition and is a bijection onto paths") {
    for (std::size_t n = 1; n <= 12; ++n) {
        std::set<std::vector<std::int64_t>> switch_paths;
        std::set<std::vector<std::int64_t>> compass_paths;
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            const auto bits = BitSequence::from_mask(mask, n);
            const auto z = switch_walk(bits);
            REQUIRE(z.positions == brute_switch(bits));
            switch_paths.insert(z.positions);
            compass_paths.insert(compass_walk(bits).positions);
        }
        CHECK(switch_paths.size() == (1ULL << n));
        CHECK(switch_paths == compass_paths);
    }
}

TEST_CASE("flipping bit m reflects the suffix about Z_{m-1}") {
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
            const auto bits = BitSequence::from_mask(mask, n);
            const auto z = switch_walk(bits);
            for (std::size_t m = 1; m <= n; ++m) {
                auto flipped = bits;
                flipped.flip(m - 1);
                const auto image = flip_suffix_image(z, m);
                REQUIRE(image == switch_walk(flipped));
                REQUIRE(flip_suffix_image(image, m) == z);
            }
        }
    }
    const auto z = switch_walk(BitSequence{1, 1});
    CHECK_THROWS_AS(flip_suffix_image(z, 0), std::out_of_range);
    CHECK_THROWS_AS(flip_suffix_image(z, 3), std::out_of_range);
}

TEST_CASE("barrier values") {
    CHECK(barrier_floor(0, 0.5) == 0);
    CHECK(barrier_floor(1, 0.9) == 1);
    CHECK(barrier_floor(7, 0.0) == 1);
    CHECK(barrier_floor(4, 0.5) == 2);
    CHECK(barrier_floor(5, 0.5) == 3);
    CHECK(barrier_floor(9, 0.5) == 3);
    CHECK(barrier_floor(8, 1.0 / 3.0) == 2);
    CHECK(barrier_floor(1000, 1.0 / 3.0) == 10);
    CHECK(barrier_floor(1024, 0.75) == 182);
    CHECK(barrier_floor(4, 0.75) == 3);
    for (std::size_t i = 1; i <= 2000; ++i) {
        const double a = 0.61;
        const auto b = barrier_floor(i, a);
        REQUIRE(static_cast<double>(b) >= std::pow(static_cast<double>(i), a) - 1e-12);
        REQUIRE(static_cast<double>(b - 1) < std::pow(static_cast<double>(i), a));
    }
    const auto seq = barrier_sequence(5, 0.5);
    CHECK(seq == std::vector<std::int64_t>{0, 1, 2, 2, 2, 3});
}

TEST_CASE("barrier positivity") {
    CHECK(barrier_positive(switch_walk(BitSequence{1, 1, 1}), 0.5));
    CHECK_FALSE(barrier_positive(switch_walk(BitSequence{1, -1, 1}), 0.0));
    CHECK(barrier_positive(switch_walk(BitSequence{1, 1, -1}), 0.0));
    CHECK_FALSE(barrier_positive(switch_walk(BitSequence{1, 1, -1}), 0.5));
    CHECK(barrier_positive(switch_walk(BitSequence{}), 0.5));
}
