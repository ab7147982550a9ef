#include "switchwalk/exact_engine.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "switchwalk/core_walks.hpp"
#include "exact_internal.hpp"

namespace switchwalk::exact {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

BinomialRow::BinomialRow(std::int64_t steps) : steps_(steps) {
    require(steps >= 0, "binomial row needs steps >= 0");
    counts_.resize(static_cast<std::size_t>(steps) + 1);
    counts_[0] = 1;
    for (std::int64_t k = 0; k < steps; ++k) {
        counts_[k + 1] = counts_[k] * (steps - k);
        mpz_divexact_ui(counts_[k + 1].get_mpz_t(), counts_[k + 1].get_mpz_t(),
                        static_cast<unsigned long>(k + 1));
    }
    prefix_.resize(counts_.size() + 1);
    prefix_[0] = 0;
    for (std::size_t k = 0; k < counts_.size(); ++k) prefix_[k + 1] = prefix_[k] + counts_[k];
}

const mpz_class& BinomialRow::choose(std::int64_t k) const {
    static const mpz_class zero{0};
    if (k < 0 || k > steps_) return zero;
    return counts_[static_cast<std::size_t>(k)];
}

mpz_class BinomialRow::paths_between(std::int64_t lo, std::int64_t hi) const {
    // displacement d = 2k - N, so d in [lo, hi] <=> k in [ceil((N+lo)/2), floor((N+hi)/2)]
    std::int64_t klo = ceil_div(steps_ + lo, 2);
    std::int64_t khi = floor_div(steps_ + hi, 2);
    klo = std::max<std::int64_t>(klo, 0);
    khi = std::min<std::int64_t>(khi, steps_);
    if (klo > khi) return 0;
    return prefix_[static_cast<std::size_t>(khi) + 1] - prefix_[static_cast<std::size_t>(klo)];
}

mpz_class BinomialRow::paths_to(std::int64_t d) const {
    if ((steps_ + d) % 2 != 0) return 0;
    return choose((steps_ + d) / 2);
}

const BinomialRow& binomial_row(std::int64_t steps) {
    static std::mutex mutex;
    static std::unordered_map<std::int64_t, std::unique_ptr<const BinomialRow>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[steps];
    if (!slot) slot = std::make_unique<const BinomialRow>(steps);
    return *slot;
}

namespace detail {

std::vector<mpz_class> count_paths(std::int64_t start, std::int64_t steps, std::int64_t lo,
                                   std::int64_t hi, const AllowedFn& allowed) {
    const auto width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<mpz_class> cur(width + 2);
    std::vector<mpz_class> nxt(width + 2);
    // index p - lo + 1; slots 0 and width+1 stay zero as guards
    if (start < lo || start > hi) return std::vector<mpz_class>(width);
    cur[static_cast<std::size_t>(start - lo + 1)] = 1;
    for (std::int64_t i = 1; i <= steps; ++i) {
        const std::int64_t plo = std::max(lo, start - i);
        const std::int64_t phi = std::min(hi, start + i);
        // positions outside the reachable band are already zero in cur
        for (std::int64_t p = std::max(lo, start - i - 1); p <= std::min(hi, start + i + 1); ++p) {
            nxt[static_cast<std::size_t>(p - lo + 1)] = 0;
        }
        for (std::int64_t p = plo; p <= phi; ++p) {
            if (!allowed(i, p)) continue;
            const auto idx = static_cast<std::size_t>(p - lo + 1);
            mpz_add(nxt[idx].get_mpz_t(), cur[idx - 1].get_mpz_t(), cur[idx + 1].get_mpz_t());
        }
        std::swap(cur, nxt);
    }
    return std::vector<mpz_class>(cur.begin() + 1, cur.end() - 1);
}

mpz_class sum_counts(const std::vector<mpz_class>& counts) {
    mpz_class total = 0;
    for (const auto& c : counts) total += c;
    return total;
}

mpz_class strip_count_series(std::int64_t x, std::int64_t upper, std::int64_t steps) {
    if (x <= 0 || x >= upper) return 0;
    if (steps == 0) return 1;
    const BinomialRow& row = binomial_row(steps);
    const std::int64_t period = 2 * upper;
    // Paths from x to y inside (0, upper) number
    //   sum_k [N(y + 2k*upper - x) - N(-y + 2k*upper - x)];
    // summed over y this is a difference of displacement-interval counts.
    const std::int64_t kmin = floor_div(-steps + x - upper, period) - 1;
    const std::int64_t kmax = ceil_div(steps + x + upper, period) + 1;
    mpz_class total = 0;
    for (std::int64_t k = kmin; k <= kmax; ++k) {
        const std::int64_t shift = k * period - x;
        total += row.paths_between(1 + shift, upper - 1 + shift);
        total -= row.paths_between(-upper + 1 + shift, -1 + shift);
    }
    if (sgn(total) < 0) throw InternalError("strip series produced a negative count");
    return total;
}

mpz_class ballot_count(std::int64_t j, std::int64_t z) {
    if (j < 1 || z < 1 || z > j || (j - z) % 2 != 0) return 0;
    mpz_class num = binomial_row(j).choose((j + z) / 2) * z;
    if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(j))) {
        throw InternalError("ballot count " + num.get_str() + " not divisible by " +
                            std::to_string(j));
    }
    mpz_divexact_ui(num.get_mpz_t(), num.get_mpz_t(), static_cast<unsigned long>(j));
    return num;
}

}  // namespace detail

DyadicProb position_prob(std::int64_t j, std::int64_t z) {
    require(j >= 0, "position_prob needs j >= 0");
    if (z < -j || z > j || (j - z) % 2 != 0) return DyadicProb::zero();
    return DyadicProb(binomial_row(j).paths_to(z), static_cast<std::uint64_t>(j));
}

PositionDist position_dist(std::int64_t j) {
    require(j >= 0, "position_dist needs j >= 0");
    PositionDist dist;
    dist.step = j;
    for (std::int64_t z = -j; z <= j; z += 2) dist.mass.emplace(z, position_prob(j, z));
    return dist;
}

DyadicProb stay_positive_prob(std::int64_t n) {
    require(n >= 1, "stay_positive_prob needs n >= 1");
    const std::int64_t m = n - 1;
    return DyadicProb(binomial_row(m).choose(m / 2), static_cast<std::uint64_t>(n));
}

DyadicProb barrier_positive_prob(std::int64_t n, double alpha) {
    require(n >= 1, "barrier_positive_prob needs n >= 1");
    require(alpha >= 0.0, "barrier_positive_prob needs alpha >= 0");
    const std::vector<std::int64_t> floor = barrier_sequence(static_cast<std::size_t>(n), alpha);
    const auto counts = detail::count_paths(
        0, n, 0, n, [&](std::int64_t i, std::int64_t p) { return p >= floor[static_cast<std::size_t>(i)]; });
    return DyadicProb(detail::sum_counts(counts), static_cast<std::uint64_t>(n));
}

std::pair<DyadicProb, DyadicProb> reflection_pair(std::int64_t z, std::int64_t j) {
    require(z >= 1 && j >= 1, "reflection_pair needs z, j >= 1");
    const auto counts =
        detail::count_paths(0, j, -z + 1, j, [](std::int64_t, std::int64_t) { return true; });
    DyadicProb avoid(detail::sum_counts(counts), static_cast<std::uint64_t>(j));
    DyadicProb window(binomial_row(j).paths_between(-z + 1, z), static_cast<std::uint64_t>(j));
    return {std::move(avoid), std::move(window)};
}

DyadicProb ballot_prob(std::int64_t j, std::int64_t z) {
    require(j >= 1, "ballot_prob needs j >= 1");
    return DyadicProb(detail::ballot_count(j, z), static_cast<std::uint64_t>(j));
}

DyadicProb positive_endpoint_prob_dp(std::int64_t j, std::int64_t z) {
    require(j >= 1, "positive_endpoint_prob_dp needs j >= 1");
    if (z < 1 || z > j) return DyadicProb::zero();
    const auto counts =
        detail::count_paths(0, j, 0, j, [](std::int64_t, std::int64_t p) { return p >= 1; });
    return DyadicProb(counts[static_cast<std::size_t>(z)], static_cast<std::uint64_t>(j));
}

DyadicProb strip_stay_prob(std::int64_t z, std::int64_t steps) {
    require(z >= 1, "strip_stay_prob needs z >= 1");
    return strip_stay_prob_from(z, 2 * z, steps);
}

DyadicProb strip_stay_prob_from(std::int64_t x, std::int64_t upper, std::int64_t steps) {
    require(steps >= 0, "strip_stay_prob needs steps >= 0");
    return DyadicProb(detail::strip_count_series(x, upper, steps), static_cast<std::uint64_t>(steps));
}

DyadicProb strip_stay_prob_dp(std::int64_t x, std::int64_t upper, std::int64_t steps) {
    require(steps >= 0, "strip_stay_prob_dp needs steps >= 0");
    if (x <= 0 || x >= upper) return DyadicProb::zero();
    const auto counts = detail::count_paths(x, steps, 0, upper, [upper](std::int64_t, std::int64_t p) {
        return p > 0 && p < upper;
    });
    return DyadicProb(detail::sum_counts(counts), static_cast<std::uint64_t>(steps));
}

DyadicProb tail_prob(std::int64_t j, std::int64_t x) {
    require(j >= 1, "tail_prob needs j >= 1");
    return DyadicProb(binomial_row(j).paths_between(x, j), static_cast<std::uint64_t>(j));
}

bool chernoff_holds(std::int64_t j, std::int64_t x) {
    require(j >= 1 && x > 0, "chernoff_holds needs j >= 1 and x > 0");
    const DyadicProb tail = tail_prob(j, x);
    if (tail.is_zero()) return true;
    const double bound_log2 = -static_cast<double>(x) * static_cast<double>(x) /
                              (2.0 * static_cast<double>(j)) / std::log(2.0);
    return tail.log2() <= bound_log2;
}

}  // namespace switchwalk::exact
