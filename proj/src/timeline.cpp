#include <cmath>
#include <stdexcept>

#include "switchwalk/dynamics.hpp"
#include "switchwalk/path_tree.hpp"

namespace switchwalk {

namespace {

void check_inputs(const ClockSet& clocks, std::size_t n, double alpha) {
    if (clocks.horizon() < 1.0) {
        throw std::invalid_argument("positivity_timeline: clock horizon must cover [0, 1]");
    }
    if (n < 1 || n > clocks.size()) throw std::invalid_argument("positivity_timeline: need 1 <= n <= clock count");
    if (!(alpha >= 0.0)) throw std::invalid_argument("positivity_timeline: alpha must be >= 0");
}

// Appends [from, to) with the given status, merging equal neighbours and
// dropping empty pieces.
void push_segment(std::vector<Segment>& segments, double from, double to, bool status) {
    if (!(to > from)) return;
    if (!segments.empty() && segments.back().status == status && segments.back().end == from) {
        segments.back().end = to;
        return;
    }
    segments.push_back(Segment{from, to, status});
}

template <class Engine>
PositivityTimeline run_timeline(const ClockSet& clocks, std::size_t n, double alpha, Engine& engine) {
    PositivityTimeline out;
    out.n = n;
    out.alpha = alpha;
    std::vector<int> current(n);
    for (std::size_t i = 0; i < n; ++i) current[i] = clocks.initial()[i];

    bool status = engine.status();
    double since = 0.0;
    std::size_t index = 0;
    for (const TimedEvent& e : merged_events(clocks, n, 1.0)) {
        ++index;
        if (e.value != current[e.bit - 1]) {
            current[e.bit - 1] = e.value;
            engine.flip(e.bit);
            const bool next = engine.status();
            if (next != status) {
                push_segment(out.segments, since, e.time, status);
                since = e.time;
                status = next;
            }
        }
        out.trace.push_back(TraceEvent{index, e.time, e.bit, e.value, status});
    }
    push_segment(out.segments, since, 1.0, status);
    return out;
}

class TreeEngine {
public:
    TreeEngine(const BitSequence& initial, std::size_t n, double alpha) {
        const BitSequence prefix(std::vector<int8_t>(initial.view().begin(), initial.view().begin() + n));
        const WalkPath path = switch_walk(prefix);
        const auto barrier = barrier_sequence(n, alpha);
        tree_ = PathTree(std::span(path.positions).subspan(1), std::span(barrier).subspan(1));
    }
    bool status() const { return tree_.barrier_holds(); }
    void flip(std::size_t j) {
        const std::int64_t before = (j == 1) ? 0 : tree_.position(j - 1);
        tree_.reflect_suffix(j, 2 * before);
    }

private:
    PathTree tree_;
};

class NaiveEngine {
public:
    NaiveEngine(const BitSequence& initial, std::size_t n, double alpha)
        : bits_(std::vector<int8_t>(initial.view().begin(), initial.view().begin() + n)), alpha_(alpha) {}
    bool status() const { return barrier_positive(switch_walk(bits_), alpha_); }
    void flip(std::size_t j) { bits_.flip(j - 1); }

private:
    BitSequence bits_;
    double alpha_;
};

}  // namespace

PositivityTimeline positivity_timeline(const ClockSet& clocks, std::size_t n, double alpha) {
    check_inputs(clocks, n, alpha);
    TreeEngine engine(clocks.initial(), n, alpha);
    return run_timeline(clocks, n, alpha, engine);
}

PositivityTimeline positivity_timeline_naive(const ClockSet& clocks, std::size_t n, double alpha) {
    check_inputs(clocks, n, alpha);
    NaiveEngine engine(clocks.initial(), n, alpha);
    return run_timeline(clocks, n, alpha, engine);
}

double kappa_measure(const std::vector<Segment>& segments) {
    double total = 0.0;
    for (const auto& s : segments) {
        if (s.status) total += s.length();
    }
    return total;
}

double kappa_measure(const PositivityTimeline& timeline) { return kappa_measure(timeline.segments); }

double pair_energy(const std::vector<Segment>& segments, double gamma) {
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("pair_energy needs gamma in [0, 1)");
    const double scale = 1.0 / ((1.0 - gamma) * (2.0 - gamma));
    auto antideriv = [&](double u) { return u > 0.0 ? std::pow(u, 2.0 - gamma) * scale : 0.0; };

    std::vector<Segment> on;
    for (const auto& s : segments) {
        if (s.status && s.end > s.start) on.push_back(s);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < on.size(); ++i) {
        const double a = on[i].start;
        const double b = on[i].end;
        total += 2.0 * antideriv(b - a);
        for (std::size_t k = i + 1; k < on.size(); ++k) {
            const double c = on[k].start;
            const double d = on[k].end;
            if (c < b) throw std::invalid_argument("pair_energy: segments overlap or are unordered");
            // both orderings (s in A, t in B) and (s in B, t in A)
            total += 2.0 * (antideriv(d - a) - antideriv(d - b) - antideriv(c - a) + antideriv(c - b));
        }
    }
    return total;
}

double pair_energy(const PositivityTimeline& timeline, double gamma) {
    return pair_energy(timeline.segments, gamma);
}

}  // namespace switchwalk
