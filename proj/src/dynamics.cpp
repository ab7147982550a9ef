#include "switchwalk/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace switchwalk {

ClockSet::ClockSet(BitSequence initial, std::vector<std::vector<BitEvent>> events, double horizon)
    : initial_(std::move(initial)), events_(std::move(events)), horizon_(horizon) {
    if (events_.size() != initial_.size()) {
        throw std::invalid_argument("ClockSet: one event list per bit required");
    }
    if (!(horizon_ >= 0.0)) throw std::invalid_argument("ClockSet: horizon must be >= 0");
    for (const auto& list : events_) {
        double prev = 0.0;
        for (const auto& e : list) {
            if (!(e.time > prev) || e.time > horizon_) {
                throw std::invalid_argument("ClockSet: event times must increase within (0, horizon]");
            }
            if (e.value != 1 && e.value != -1) throw std::invalid_argument("ClockSet: event value must be +-1");
            prev = e.time;
        }
    }
}

std::size_t ClockSet::total_events() const noexcept {
    std::size_t total = 0;
    for (const auto& list : events_) total += list.size();
    return total;
}

ClockSet sample_clocks(std::size_t n, double horizon, StreamRng& rng) {
    if (n < 1) throw std::invalid_argument("sample_clocks needs n >= 1");
    if (!(horizon >= 0.0)) throw std::invalid_argument("sample_clocks needs horizon >= 0");
    std::vector<int8_t> initial(n);
    std::vector<std::vector<BitEvent>> events(n);
    for (std::size_t j = 0; j < n; ++j) {
        initial[j] = static_cast<int8_t>(rng.sign());
        double t = rng.exponential(1.0);
        while (t <= horizon) {
            events[j].push_back(BitEvent{t, rng.sign()});
            t += rng.exponential(1.0);
        }
    }
    return ClockSet(BitSequence(std::move(initial)), std::move(events), horizon);
}

ClockSet sample_clocks(std::size_t n, double horizon, std::uint64_t seed) {
    StreamRng rng(seed, 0);
    return sample_clocks(n, horizon, rng);
}

BitSequence bits_at(const ClockSet& clocks, double t) {
    if (!(t >= 0.0) || t > clocks.horizon()) {
        throw std::out_of_range("bits_at: time outside [0, horizon]");
    }
    BitSequence out = clocks.initial();
    for (std::size_t j = 1; j <= clocks.size(); ++j) {
        const auto& list = clocks.events(j);
        auto it = std::upper_bound(list.begin(), list.end(), t,
                                   [](double value, const BitEvent& e) { return value < e.time; });
        if (it != list.begin()) out.set(j - 1, std::prev(it)->value);
    }
    return out;
}

std::vector<TimedEvent> merged_events(const ClockSet& clocks, std::size_t n, double t_max) {
    if (n > clocks.size()) throw std::out_of_range("merged_events: n exceeds clock count");
    std::vector<TimedEvent> out;
    for (std::size_t j = 1; j <= n; ++j) {
        for (const auto& e : clocks.events(j)) {
            if (e.time > t_max) break;
            out.push_back(TimedEvent{e.time, j, e.value});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TimedEvent& a, const TimedEvent& b) { return a.time < b.time; });
    return out;
}

double flip_probability(double t) {
    if (!(t >= 0.0)) throw std::invalid_argument("time gap must be >= 0");
    return -std::expm1(-t) / 2.0;
}

namespace {

// X(0) as packed words, bit set <=> X_i = -1 (bit i-1 of the stream).
std::vector<std::uint64_t> draw_words(std::size_t n, StreamRng& rng) {
    std::vector<std::uint64_t> words((n + 63) / 64);
    for (auto& w : words) w = rng();
    if (n % 64 != 0) words.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    return words;
}

// Change indices in [1, n] as a renewal sequence of Geometric(p) gaps.
std::vector<std::size_t> draw_changes(std::size_t n, double p, StreamRng& rng) {
    std::vector<std::size_t> changes;
    if (p <= 0.0) return changes;
    std::size_t pos = 0;
    for (;;) {
        const std::uint64_t gap = rng.geometric(p);
        if (gap >= n - pos) break;
        pos += static_cast<std::size_t>(gap) + 1;
        changes.push_back(pos);
    }
    return changes;
}

BitSequence unpack(const std::vector<std::uint64_t>& words, std::size_t n) {
    std::vector<int8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = ((words[i / 64] >> (i % 64)) & 1U) ? -1 : 1;
    return BitSequence(std::move(bits));
}

TwoTimeCoupling assemble(double t, BitSequence bits0, std::vector<std::size_t> changes) {
    TwoTimeCoupling c;
    c.t = t;
    c.bits_t = bits0;
    for (std::size_t i : changes) c.bits_t.flip(i - 1);
    c.bits0 = std::move(bits0);
    c.changes = std::move(changes);
    return c;
}

// Number of set bits among bit positions [first, last) of a packed vector.
std::int64_t popcount_range(const std::vector<std::uint64_t>& words, std::size_t first, std::size_t last) {
    if (first >= last) return 0;
    std::int64_t count = 0;
    std::size_t wf = first / 64;
    const std::size_t wl = (last - 1) / 64;
    const std::uint64_t head = ~std::uint64_t{0} << (first % 64);
    const std::uint64_t tail = (last % 64 == 0) ? ~std::uint64_t{0} : ((std::uint64_t{1} << (last % 64)) - 1);
    if (wf == wl) return std::popcount(words[wf] & head & tail);
    count += std::popcount(words[wf] & head);
    for (++wf; wf < wl; ++wf) count += std::popcount(words[wf]);
    count += std::popcount(words[wl] & tail);
    return count;
}

// Running parity S_i = prod_{j<=i} X_j, packed the same way as the input.
std::vector<std::uint64_t> prefix_parity(const std::vector<std::uint64_t>& words, std::size_t n) {
    std::vector<std::uint64_t> out(words.size());
    std::uint64_t carry = 0;
    for (std::size_t w = 0; w < words.size(); ++w) {
        std::uint64_t s = words[w];
        s ^= s << 1;
        s ^= s << 2;
        s ^= s << 4;
        s ^= s << 8;
        s ^= s << 16;
        s ^= s << 32;
        if (carry) s = ~s;
        carry = s >> 63;
        out[w] = s;
    }
    if (n % 64 != 0 && !out.empty()) out.back() &= (std::uint64_t{1} << (n % 64)) - 1;
    return out;
}

}  // namespace

TwoTimeCoupling two_time_sample(std::size_t n, double t, StreamRng& rng) {
    const double p = flip_probability(t);
    auto words = draw_words(n, rng);
    auto changes = draw_changes(n, p, rng);
    return assemble(t, unpack(words, n), std::move(changes));
}

TwoTimeCoupling two_time_sample(std::size_t n, double t, std::uint64_t seed) {
    StreamRng rng(seed, 0);
    return two_time_sample(n, t, rng);
}

TwoTimeCoupling two_time_sample_covering(std::size_t n, double t, std::size_t changes_needed,
                                         StreamRng& rng) {
    if (!(t > 0.0)) throw std::invalid_argument("two_time_sample_covering needs t > 0");
    const double p = flip_probability(t);
    std::vector<std::size_t> changes;
    std::size_t pos = 0;
    while (changes.size() < changes_needed || pos < n) {
        const std::uint64_t gap = rng.geometric(p);
        const std::size_t next = pos + static_cast<std::size_t>(gap) + 1;
        if (changes.size() >= changes_needed && next > n) break;
        pos = next;
        changes.push_back(pos);
    }
    const std::size_t length = std::max(n, pos);
    auto words = draw_words(length, rng);
    return assemble(t, unpack(words, length), std::move(changes));
}

std::pair<std::int64_t, std::int64_t> two_time_endpoints(WalkKind kind, std::size_t n, double t,
                                                         StreamRng& rng) {
    const double p = flip_probability(t);
    const auto words = draw_words(n, rng);
    const auto changes = draw_changes(n, p, rng);
    const auto len = static_cast<std::int64_t>(n);
    if (kind == WalkKind::compass) {
        const std::int64_t end0 = len - 2 * popcount_range(words, 0, n);
        std::int64_t flipped = 0;  // sum of X_i over changed indices
        for (std::size_t i : changes) flipped += ((words[(i - 1) / 64] >> ((i - 1) % 64)) & 1U) ? -1 : 1;
        return {end0, end0 - 2 * flipped};
    }
    const auto parity = prefix_parity(words, n);
    const std::int64_t end0 = len - 2 * popcount_range(parity, 0, n);
    // increments of Z(t) are those of Z(0) times (-1)^{#changes <= i}
    std::int64_t end_t = 0;
    std::size_t from = 0;
    std::int64_t sign = 1;
    for (std::size_t k = 0; k <= changes.size(); ++k) {
        const std::size_t to = (k < changes.size()) ? changes[k] - 1 : n;
        const auto seg = static_cast<std::int64_t>(to - from);
        end_t += sign * (seg - 2 * popcount_range(parity, from, to));
        from = to;
        sign = -sign;
    }
    return {end0, end_t};
}

PeriodDecomposition decompose_periods(const TwoTimeCoupling& coupling, std::size_t n) {
    PeriodDecomposition out;
    out.starts.push_back(0);
    for (std::size_t i : coupling.changes) {
        if (i > n) break;
        out.lengths.push_back(i - out.starts.back());
        out.starts.push_back(i);
    }
    return out;
}

std::int64_t mirror_residual(const TwoTimeCoupling& coupling, std::size_t n) {
    n = std::min(n, coupling.size());
    const WalkPath z0 = switch_walk(coupling.bits0);
    const WalkPath zt = switch_walk(coupling.bits_t);
    std::int64_t worst = 0;
    std::size_t next_change = 0;
    std::int64_t period_sign = 1;  // +1 on odd periods, -1 on even periods
    for (std::size_t i = 1; i <= n; ++i) {
        while (next_change < coupling.changes.size() && coupling.changes[next_change] <= i) {
            period_sign = -period_sign;
            ++next_change;
        }
        const std::int64_t expected = period_sign * (z0[i] - z0[i - 1]);
        worst = std::max(worst, std::abs((zt[i] - zt[i - 1]) - expected));
    }
    return worst;
}

UvPair uv_decomposition(const TwoTimeCoupling& coupling, std::size_t k_periods) {
    if (k_periods < 2 || k_periods % 2 != 0) {
        throw std::invalid_argument("uv_decomposition needs an even period count K >= 2, got " +
                                    std::to_string(k_periods));
    }
    if (coupling.changes.size() < k_periods) {
        throw std::out_of_range("uv_decomposition: coupling has " + std::to_string(coupling.changes.size()) +
                                " changes, fewer than K=" + std::to_string(k_periods));
    }
    const WalkPath z = switch_walk(coupling.bits0);
    const auto& I = coupling.changes;  // I[k-1] is I_k
    auto at = [&](std::size_t idx) { return z[idx]; };
    UvPair out;
    out.last_change = I[k_periods - 1];
    out.u = at(I[0] - 1);
    for (std::size_t k = 3; k + 1 <= k_periods; k += 2) out.u += at(I[k - 1] - 1) - at(I[k - 2] - 1);
    out.u += at(I[k_periods - 1]) - at(I[k_periods - 1] - 1);
    for (std::size_t k = 2; k <= k_periods; k += 2) out.v += at(I[k - 1] - 1) - at(I[k - 2] - 1);
    return out;
}

std::vector<std::int64_t> w_path(const TwoTimeCoupling& coupling, std::size_t n) {
    n = std::min(n, coupling.size());
    const WalkPath z0 = switch_walk(coupling.bits0);
    const WalkPath zt = switch_walk(coupling.bits_t);
    std::vector<std::int64_t> w(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        const std::int64_t sum = z0[i] + zt[i];
        if (sum % 2 != 0) throw std::logic_error("w_path: Z(0) and Z(t) differ in parity");
        w[i] = sum / 2;
    }
    return w;
}

}  // namespace switchwalk
