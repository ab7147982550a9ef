#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "switchwalk/core_walks.hpp"
#include "switchwalk/rng.hpp"

namespace switchwalk {

/// One rerandomization of one bit.
struct BitEvent {
    double time = 0.0;
    int value = 1;
    friend bool operator==(const BitEvent&, const BitEvent&) = default;
};

/// Rate-1 Poisson rerandomization clocks for bits 1..n on (0, horizon].
/// Events that redraw the current value are kept.
class ClockSet {
public:
    ClockSet(BitSequence initial, std::vector<std::vector<BitEvent>> events, double horizon);

    std::size_t size() const noexcept { return initial_.size(); }
    double horizon() const noexcept { return horizon_; }
    const BitSequence& initial() const noexcept { return initial_; }
    /// Events of bit j (1-based), strictly increasing in time.
    const std::vector<BitEvent>& events(std::size_t j) const { return events_.at(j - 1); }
    std::size_t total_events() const noexcept;

    friend bool operator==(const ClockSet&, const ClockSet&) = default;

private:
    BitSequence initial_;
    std::vector<std::vector<BitEvent>> events_;
    double horizon_;
};

ClockSet sample_clocks(std::size_t n, double horizon, StreamRng& rng);
ClockSet sample_clocks(std::size_t n, double horizon, std::uint64_t seed);

/// X(t): each bit takes the value of its last event at or before t.
BitSequence bits_at(const ClockSet& clocks, double t);

/// A merged, time-ordered view of every event of bits 1..n up to t_max.
struct TimedEvent {
    double time = 0.0;
    std::size_t bit = 0;  // 1-based
    int value = 1;
};
std::vector<TimedEvent> merged_events(const ClockSet& clocks, std::size_t n, double t_max);

/// The pair (X(0), X(t)) and the indices where they differ.
struct TwoTimeCoupling {
    double t = 0.0;
    BitSequence bits0;
    BitSequence bits_t;
    std::vector<std::size_t> changes;  // 1-based, increasing

    std::size_t size() const noexcept { return bits0.size(); }
};

/// Probability that a bit differs between times 0 and t: (1 - e^{-t}) / 2.
double flip_probability(double t);

/// X(0) uniform; each index independently differs at time t with probability
/// (1 - e^{-t}) / 2.
TwoTimeCoupling two_time_sample(std::size_t n, double t, StreamRng& rng);
TwoTimeCoupling two_time_sample(std::size_t n, double t, std::uint64_t seed);

/// Like two_time_sample, but extended past n until at least `changes` changes
/// exist; the length is max(n, I_changes). Requires t > 0.
TwoTimeCoupling two_time_sample_covering(std::size_t n, double t, std::size_t changes, StreamRng& rng);

/// (Z_n(0), Z_n(t)) (or the compass analogue) for a fresh coupling, computed on
/// packed words. Consumes the stream exactly as two_time_sample does, so the
/// result equals walking that coupling.
std::pair<std::int64_t, std::int64_t> two_time_endpoints(WalkKind kind, std::size_t n, double t,
                                                         StreamRng& rng);

/// Change indices I_0 = 0 < I_1 < ... (those <= n) and period lengths J_k = I_k - I_{k-1}.
struct PeriodDecomposition {
    std::vector<std::size_t> starts;   // I_0, I_1, ...
    std::vector<std::size_t> lengths;  // J_1, J_2, ...
};

PeriodDecomposition decompose_periods(const TwoTimeCoupling& coupling, std::size_t n);

/// Largest deviation over i <= n from "increments of Z(t) equal those of Z(0) on
/// odd periods and their negatives on even periods". Zero for a valid coupling.
std::int64_t mirror_residual(const TwoTimeCoupling& coupling, std::size_t n);

/// Odd-period and even-period increment sums of Z(0) up to step I_K.
struct UvPair {
    std::int64_t u = 0;
    std::int64_t v = 0;
    std::size_t last_change = 0;  // I_K
};

/// Throws std::invalid_argument unless K is even and >= 2, and std::out_of_range
/// if the coupling has fewer than K changes.
UvPair uv_decomposition(const TwoTimeCoupling& coupling, std::size_t k_periods);

/// W_i = (Z_i(0) + Z_i(t)) / 2 for i = 0..n.
std::vector<std::int64_t> w_path(const TwoTimeCoupling& coupling, std::size_t n);

struct Segment {
    double start = 0.0;
    double end = 0.0;
    bool status = false;

    double length() const noexcept { return end - start; }
    friend bool operator==(const Segment&, const Segment&) = default;
};

/// One processed event, for trace dumps.
struct TraceEvent {
    std::size_t index = 0;
    double time = 0.0;
    std::size_t bit = 0;
    int new_value = 1;
    bool status_after = false;
};

/// Status of {Z_i(t) >= ceil(i^alpha), i = 1..n} over t in [0, 1]. Segments
/// cover [0, 1], are disjoint and ordered, and adjacent segments differ in status.
struct PositivityTimeline {
    std::size_t n = 0;
    double alpha = 0.0;
    std::vector<Segment> segments;
    std::vector<TraceEvent> trace;  // every event in (0, 1], no-ops included
};

/// Incremental engine: O(log n) per rerandomization.
PositivityTimeline positivity_timeline(const ClockSet& clocks, std::size_t n, double alpha);

/// Recomputes the whole path at every event; reference for the engine.
PositivityTimeline positivity_timeline_naive(const ClockSet& clocks, std::size_t n, double alpha);

/// Lebesgue measure of the true segments.
double kappa_measure(const PositivityTimeline& timeline);
double kappa_measure(const std::vector<Segment>& segments);

/// integral over [0,1]^2 of 1{P(s)} 1{P(t)} |t - s|^{-gamma} ds dt, gamma in [0, 1).
double pair_energy(const PositivityTimeline& timeline, double gamma);
double pair_energy(const std::vector<Segment>& segments, double gamma);

}  // namespace switchwalk
