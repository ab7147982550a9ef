#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "switchwalk/dynamics.hpp"
#include "switchwalk/exact_engine.hpp"

using namespace switchwalk;

namespace {

TwoTimeCoupling hand_coupling() {
    TwoTimeCoupling c;
    c.t = 0.3;
    c.bits0 = BitSequence::filled(5, 1);
    c.bits_t = BitSequence{1, -1, 1, -1, 1};
    c.changes = {2, 4};
    return c;
}

}  // namespace

TEST_CASE("clock sampling") {
    CHECK(sample_clocks(5, 0.0, 3).total_events() == 0);
    CHECK(sample_clocks(50, 2.0, 9) == sample_clocks(50, 2.0, 9));
    CHECK_FALSE(sample_clocks(50, 2.0, 9) == sample_clocks(50, 2.0, 10));
    const auto clocks = sample_clocks(40, 3.0, 4);
    for (std::size_t j = 1; j <= 40; ++j) {
        double prev = 0.0;
        for (const auto& e : clocks.events(j)) {
            REQUIRE(e.time > prev);
            REQUIRE(e.time <= 3.0);
            REQUIRE((e.value == 1 || e.value == -1));
            prev = e.time;
        }
    }
    CHECK_THROWS(ClockSet(BitSequence{1}, {{{0.5, 1}, {0.4, -1}}}, 1.0));
    CHECK_THROWS(ClockSet(BitSequence{1}, {{{1.5, 1}}}, 1.0));
    CHECK_THROWS(ClockSet(BitSequence{1, 1}, {{}}, 1.0));
}

TEST_CASE("event counts follow the Poisson mean") {
    const std::size_t n = 20;
    const double horizon = 1.5;
    const int seeds = 4000;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const double k = static_cast<double>(sample_clocks(n, horizon, 1000 + s).total_events());
        sum += k;
        sum_sq += k * k;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt((sum_sq / seeds - mean * mean) / seeds);
    CHECK(std::abs(mean - n * horizon) < 3.0 * se);
}

TEST_CASE("bits_at") {
    const ClockSet clocks(BitSequence{1, -1}, {{{0.25, -1}, {0.5, 1}}, {}}, 1.0);
    CHECK(bits_at(clocks, 0.0) == BitSequence{1, -1});
    CHECK(bits_at(clocks, 0.25) == BitSequence{-1, -1});
    CHECK(bits_at(clocks, 0.3) == BitSequence{-1, -1});
    CHECK(bits_at(clocks, 0.5) == BitSequence{1, -1});
    CHECK(bits_at(clocks, 1.0) == BitSequence{1, -1});
    CHECK_THROWS(bits_at(clocks, 1.5));
    CHECK_THROWS(bits_at(clocks, -0.1));
    const auto merged = merged_events(clocks, 2, 1.0);
    REQUIRE(merged.size() == 2);
    CHECK(merged[0].bit == 1);
    CHECK(merged[1].time == 0.5);
}

TEST_CASE("marginal of bits_at is uniform at a fixed time") {
    const std::size_t n = 8;
    const int seeds = 20000;
    std::vector<long> pattern(1U << n, 0);
    long plus = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto bits = bits_at(sample_clocks(n, 1.0, 50000 + s), 0.7);
        unsigned code = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (bits[i] > 0) {
                ++plus;
                code |= 1U << i;
            }
        }
        ++pattern[code];
    }
    const double total = double(seeds) * n;
    CHECK(std::abs(plus / total - 0.5) < 3.0 * 0.5 / std::sqrt(total));
    const double expected = double(seeds) / pattern.size();
    double chi2 = 0.0;
    for (long c : pattern) chi2 += (c - expected) * (c - expected) / expected;
    // 255 degrees of freedom; the 1e-6 upper quantile is about 390
    CHECK(chi2 < 390.0);
}

TEST_CASE("two-time coupling") {
    const auto zero = two_time_sample(100, 0.0, 3);
    CHECK(zero.bits0 == zero.bits_t);
    CHECK(zero.changes.empty());
    CHECK(flip_probability(0.0) == 0.0);
    CHECK(flip_probability(0.5) == doctest::Approx((1 - std::exp(-0.5)) / 2));
    CHECK(flip_probability(1e9) == 0.5);
    const auto c = two_time_sample(1000, 0.4, 17);
    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.bits0[i] != c.bits_t[i]) diff.push_back(i + 1);
    }
    CHECK(diff == c.changes);
    CHECK(two_time_sample(1000, 0.4, 17).changes == c.changes);
}

TEST_CASE("flip frequency and period lengths") {
    const double t = 0.5;
    const double p = (1 - std::exp(-t)) / 2;
    StreamRng rng(23, 0);
    const std::size_t n = 1000;
    const int samples = 100;
    double flips = 0.0, j_sum = 0.0, j_sq = 0.0;
    long j_count = 0;
    for (int s = 0; s < samples; ++s) {
        const auto c = two_time_sample(n, t, rng);
        flips += static_cast<double>(c.changes.size());
        for (auto len : decompose_periods(c, n).lengths) {
            j_sum += double(len);
            j_sq += double(len) * double(len);
            ++j_count;
        }
    }
    const double total = double(samples) * n;
    CHECK(std::abs(flips / total - p) < 3.0 * std::sqrt(p * (1 - p) / total));
    const double j_mean = j_sum / j_count;
    const double j_se = std::sqrt((j_sq / j_count - j_mean * j_mean) / j_count);
    // the last period is cut at n, so lengths are slightly biased down; allow for it
    CHECK(std::abs(j_mean - 1 / p) < 3.0 * j_se + 0.02);
}

TEST_CASE("periods") {
    TwoTimeCoupling c;
    c.bits0 = BitSequence::filled(10, 1);
    c.bits_t = c.bits0;
    CHECK(decompose_periods(c, 10).starts == std::vector<std::size_t>{0});
    CHECK(decompose_periods(c, 10).lengths.empty());
    c.bits_t.flip(2);
    c.bits_t.flip(6);
    c.changes = {3, 7};
    const auto d = decompose_periods(c, 10);
    CHECK(d.starts == std::vector<std::size_t>{0, 3, 7});
    CHECK(d.lengths == std::vector<std::size_t>{3, 4});
    CHECK(decompose_periods(c, 5).starts == std::vector<std::size_t>{0, 3});
}

TEST_CASE("hand instance") {
    const auto c = hand_coupling();
    CHECK(switch_walk(c.bits_t).positions == std::vector<std::int64_t>{0, 1, 0, -1, 0, 1});
    CHECK(mirror_residual(c, 5) == 0);
    const auto uv = uv_decomposition(c, 2);
    CHECK(uv.u == 2);
    CHECK(uv.v == 2);
    CHECK(uv.last_change == 4);
    CHECK(w_path(c, 5) == std::vector<std::int64_t>{0, 1, 1, 1, 2, 3});
    CHECK_THROWS_AS(uv_decomposition(c, 3), std::invalid_argument);
    CHECK_THROWS_AS(uv_decomposition(c, 0), std::invalid_argument);
    CHECK_THROWS_AS(uv_decomposition(c, 4), std::out_of_range);

    auto same = c;
    same.bits_t = same.bits0;
    same.changes.clear();
    CHECK(mirror_residual(same, 5) == 0);
    CHECK(w_path(same, 5) == switch_walk(same.bits0).positions);
    CHECK_THROWS_AS(uv_decomposition(same, 2), std::out_of_range);
}

TEST_CASE("mirror, U/V and W on random couplings") {
    StreamRng rng(31, 0);
    const std::size_t n = 1000;
    for (int s = 0; s < 300; ++s) {
        const auto c = two_time_sample(n, 0.1, rng);
        REQUIRE(mirror_residual(c, n) == 0);
        const auto z0 = switch_walk(c.bits0).positions;
        const auto zt = switch_walk(c.bits_t).positions;
        const auto w = w_path(c, n);
        const auto periods = decompose_periods(c, n);
        for (std::size_t i = 1; i <= n; ++i) {
            REQUIRE(2 * w[i] == z0[i] + zt[i]);
            // step i lies in period k, where k - 1 changes occur at or before i
            const auto k = static_cast<std::size_t>(
                std::upper_bound(periods.starts.begin() + 1, periods.starts.end(), i) - periods.starts.begin());
            if (k % 2 == 0) REQUIRE(w[i] == w[i - 1]);
        }
        const std::size_t kk = (c.changes.size() / 2) * 2;
        if (kk >= 2) {
            const auto uv = uv_decomposition(c, kk);
            REQUIRE(uv.u + uv.v == z0[uv.last_change]);
            REQUIRE(uv.u - uv.v == zt[uv.last_change]);
        }
    }
}

TEST_CASE("covering coupling reaches the requested change count") {
    StreamRng rng(37, 0);
    for (int s = 0; s < 200; ++s) {
        const auto c = two_time_sample_covering(50, 0.05, 6, rng);
        REQUIRE(c.changes.size() >= 6);
        REQUIRE(c.size() >= 50);
        REQUIRE(mirror_residual(c, c.size()) == 0);
    }
    CHECK_THROWS(two_time_sample_covering(50, 0.0, 2, rng));
}

TEST_CASE("packed endpoints equal walking the coupling") {
    for (WalkKind kind : {WalkKind::switch_walk, WalkKind::compass}) {
        for (std::size_t n : {1, 63, 64, 65, 200, 1000}) {
            for (std::uint64_t s = 0; s < 40; ++s) {
                StreamRng a(99, s);
                StreamRng b(99, s);
                const auto c = two_time_sample(n, 0.3, a);
                const auto [e0, et] = two_time_endpoints(kind, n, 0.3, b);
                REQUIRE(e0 == walk(kind, c.bits0).positions.back());
                REQUIRE(et == walk(kind, c.bits_t).positions.back());
                REQUIRE(a() == b());
            }
        }
    }
}

TEST_CASE("timeline with no events") {
    const ClockSet clocks(BitSequence{1, 1, -1}, {{}, {}, {}}, 1.0);
    const auto tl = positivity_timeline(clocks, 3, 0.0);
    REQUIRE(tl.segments.size() == 1);
    CHECK(tl.segments[0] == Segment{0.0, 1.0, true});
    CHECK(kappa_measure(tl) == 1.0);
    CHECK_THROWS(positivity_timeline(ClockSet(BitSequence{1}, {{}}, 0.5), 1, 0.0));
    CHECK_THROWS(positivity_timeline(clocks, 4, 0.0));
}

TEST_CASE("timeline on a hand clock set") {
    // Z(0) = (1, 2); bit 2 flips at 0.4 (Z = (1, 0)), bit 1 redraws +1 at 0.5 (no-op),
    // bit 2 returns at 0.8.
    const ClockSet clocks(BitSequence{1, 1}, {{{0.5, 1}}, {{0.4, -1}, {0.8, 1}}}, 1.0);
    const auto tl = positivity_timeline(clocks, 2, 0.0);
    REQUIRE(tl.segments.size() == 3);
    CHECK(tl.segments[0] == Segment{0.0, 0.4, true});
    CHECK(tl.segments[1] == Segment{0.4, 0.8, false});
    CHECK(tl.segments[2] == Segment{0.8, 1.0, true});
    REQUIRE(tl.trace.size() == 3);
    CHECK(tl.trace[1].bit == 1);
    CHECK_FALSE(tl.trace[1].status_after);
    CHECK(kappa_measure(tl) == doctest::Approx(0.6));
}

TEST_CASE("incremental timeline equals full recomputation") {
    for (double alpha : {0.0, 0.25, 0.6}) {
        for (std::uint64_t seed = 0; seed < 300; ++seed) {
            const std::size_t n = 1 + seed % 64;
            const auto clocks = sample_clocks(n, 1.0, 7000 + seed);
            const auto fast = positivity_timeline(clocks, n, alpha);
            const auto slow = positivity_timeline_naive(clocks, n, alpha);
            REQUIRE(fast.segments == slow.segments);
            REQUIRE(fast.trace.size() == slow.trace.size());
            for (std::size_t i = 0; i < fast.trace.size(); ++i) {
                REQUIRE(fast.trace[i].status_after == slow.trace[i].status_after);
            }
        }
    }
}

TEST_CASE("timeline engine on a long walk against bits_at") {
    const std::size_t n = 3000;
    const auto clocks = sample_clocks(n, 1.0, 5);
    const auto tl = positivity_timeline(clocks, n, 0.3);
    for (const auto& seg : tl.segments) {
        const double mid = 0.5 * (seg.start + seg.end);
        REQUIRE(barrier_positive(switch_walk(bits_at(clocks, mid)), 0.3) == seg.status);
    }
}

TEST_CASE("kappa mean matches the exact probability") {
    const std::size_t n = 64;
    const int seeds = 20000;
    double sum = 0.0, sum_sq = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const double k = kappa_measure(positivity_timeline(sample_clocks(n, 1.0, 900000 + s), n, 0.0));
        sum += k;
        sum_sq += k * k;
    }
    const double mean = sum / seeds;
    const double se = std::sqrt((sum_sq / seeds - mean * mean) / (seeds - 1));
    CHECK(std::abs(mean - exact::stay_positive_prob(64).to_double()) < 3.5 * se);
}

namespace {

// Leb(A ∩ (A + u)) for a union of disjoint segments A.
double overlap(const std::vector<Segment>& segs, double u) {
    double total = 0.0;
    for (const auto& a : segs) {
        if (!a.status) continue;
        for (const auto& b : segs) {
            if (!b.status) continue;
            total += std::max(0.0, std::min(a.end, b.end + u) - std::max(a.start, b.start + u));
        }
    }
    return total;
}

// 2 ∫_0^1 u^{-γ} Leb(A ∩ (A+u)) du with u = v^{1/(1-γ)}, by composite Simpson.
double energy_quadrature(const std::vector<Segment>& segs, double gamma) {
    const int steps = 20000;
    const double h = 1.0 / steps;
    double acc = 0.0;
    for (int i = 0; i <= steps; ++i) {
        const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        acc += w * overlap(segs, std::pow(i * h, 1.0 / (1.0 - gamma)));
    }
    return 2.0 / (1.0 - gamma) * acc * h / 3.0;
}

}  // namespace

TEST_CASE("kappa and pair energy on fixed segments") {
    const std::vector<Segment> full{{0.0, 1.0, true}};
    const std::vector<Segment> none{{0.0, 1.0, false}};
    const std::vector<Segment> split{{0.0, 0.5, true}, {0.5, 1.0, true}};
    const std::vector<Segment> ends{{0.0, 0.25, true}, {0.25, 0.75, false}, {0.75, 1.0, true}};
    CHECK(kappa_measure(full) == 1.0);
    CHECK(kappa_measure(none) == 0.0);
    CHECK(kappa_measure(ends) == 0.5);
    CHECK(pair_energy(full, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pair_energy(none, 0.5) == 0.0);
    CHECK(energy_quadrature(full, 0.5) == doctest::Approx(8.0 / 3.0).epsilon(1e-6));
    CHECK(pair_energy(full, 0.5) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(pair_energy(split, 0.5) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    CHECK(pair_energy(ends, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    for (double gamma : {0.1, 0.25, 0.5, 0.8}) {
        CHECK(pair_energy(ends, gamma) == doctest::Approx(energy_quadrature(ends, gamma)).epsilon(1e-6));
    }
    CHECK_THROWS(pair_energy(full, 1.0));
    CHECK_THROWS(pair_energy(full, -0.1));
    CHECK_THROWS(pair_energy(std::vector<Segment>{{0.0, 0.6, true}, {0.5, 1.0, true}}, 0.5));
}

TEST_CASE("pair energy on random timelines") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto tl = positivity_timeline(sample_clocks(12, 1.0, 300 + seed), 12, 0.0);
        const double k = kappa_measure(tl);
        CHECK(pair_energy(tl, 0.0) == doctest::Approx(k * k).epsilon(1e-12));
        CHECK(pair_energy(tl, 0.3) == doctest::Approx(energy_quadrature(tl.segments, 0.3)).epsilon(1e-5));
    }
}

TEST_CASE("event counts in disjoint windows are uncorrelated") {
    const std::size_t n = 10;
    const int seeds = 20000;
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto clocks = sample_clocks(n, 1.0, 200000 + s);
        double a = 0, b = 0;
        for (std::size_t j = 1; j <= n; ++j) {
            for (const auto& e : clocks.events(j)) (e.time <= 0.5 ? a : b) += 1.0;
        }
        sa += a;
        sb += b;
        sab += a * b;
        saa += a * a;
        sbb += b * b;
    }
    const double ma = sa / seeds, mb = sb / seeds;
    const double corr = (sab / seeds - ma * mb) / std::sqrt((saa / seeds - ma * ma) * (sbb / seeds - mb * mb));
    CHECK(std::abs(corr) < 4.0 / std::sqrt(double(seeds)));
    CHECK(std::abs(ma - 5.0) < 0.1);
}
