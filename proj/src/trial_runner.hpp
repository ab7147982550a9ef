#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "switchwalk/experiments.hpp"
#include "switchwalk/rng.hpp"

namespace switchwalk::detail {

inline constexpr std::uint64_t trials_per_chunk = 1024;

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs `trials` independent trials; trial i draws from stream
/// (options.seed, stream_base + i). Trials are grouped into fixed chunks whose
/// accumulators are merged in chunk order, so the result does not depend on how
/// many workers ran or how chunks were scheduled.
template <class Acc, class TrialFn>
Acc run_trials(std::uint64_t trials, const RunOptions& options, std::uint64_t stream_base, TrialFn&& trial) {
    const std::uint64_t chunks = (trials + trials_per_chunk - 1) / trials_per_chunk;
    std::vector<Acc> partial(chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1);
            if (c >= chunks) return;
            try {
                Acc local;
                const std::uint64_t first = c * trials_per_chunk;
                const std::uint64_t last = std::min(trials, first + trials_per_chunk);
                for (std::uint64_t i = first; i < last; ++i) {
                    StreamRng rng(options.seed, stream_base + i);
                    trial(rng, local);
                }
                partial[c] = std::move(local);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };

    const unsigned workers = std::min<std::uint64_t>(resolve_workers(options.workers), std::max<std::uint64_t>(chunks, 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    Acc total;
    for (auto& p : partial) total.merge(p);
    return total;
}

}  // namespace switchwalk::detail
