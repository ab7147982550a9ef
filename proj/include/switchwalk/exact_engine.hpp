#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "switchwalk/dyadic.hpp"

// Exact probabilities of static walk events. The switch walk and the compass
// walk have the same law, so every quantity here is a statement about the simple
// symmetric random walk started from 0 (or from a stated point), with values held
// as exact dyadic rationals.
namespace switchwalk::exact {

/// Raised when a brute-force computation is asked to exceed its enumeration budget.
class BudgetError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Raised when an internal consistency guard trips (an implementation bug).
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Row N of Pascal's triangle with prefix sums, counts of N-step paths by endpoint.
class BinomialRow {
public:
    explicit BinomialRow(std::int64_t steps);

    std::int64_t steps() const noexcept { return steps_; }
    /// C(N, k), zero outside 0..N.
    const mpz_class& choose(std::int64_t k) const;
    /// Number of N-step paths whose displacement lies in [lo, hi].
    mpz_class paths_between(std::int64_t lo, std::int64_t hi) const;
    /// Number of N-step paths with displacement exactly d.
    mpz_class paths_to(std::int64_t d) const;

private:
    std::int64_t steps_;
    std::vector<mpz_class> counts_;
    std::vector<mpz_class> prefix_;  // prefix_[k] = sum_{i<k} counts_[i]
};

/// Shared, lazily built rows; safe for concurrent callers.
const BinomialRow& binomial_row(std::int64_t steps);

/// Law of Z_j: position -> probability; only reachable positions are stored.
struct PositionDist {
    std::int64_t step = 0;
    std::map<std::int64_t, DyadicProb> mass;
};

DyadicProb position_prob(std::int64_t j, std::int64_t z);
PositionDist position_dist(std::int64_t j);

/// P(Z_i > 0 for i = 1..n) = C(n-1, floor((n-1)/2)) / 2^n.
DyadicProb stay_positive_prob(std::int64_t n);

/// P(Z_i >= ceil(i^alpha) for i = 1..n) by dynamic programming on path counts.
DyadicProb barrier_positive_prob(std::int64_t n, double alpha);

/// (P(Z_i > -z for all i <= j), P(Z_j in [-z+1, z])): the first by dynamic
/// programming, the second from binomial sums.
std::pair<DyadicProb, DyadicProb> reflection_pair(std::int64_t z, std::int64_t j);

/// P(Z_i > 0 for i <= j and Z_j = z) = (z / j) P(Z_j = z); zero on parity mismatch.
DyadicProb ballot_prob(std::int64_t j, std::int64_t z);

/// Same event as ballot_prob, computed by direct dynamic programming.
DyadicProb positive_endpoint_prob_dp(std::int64_t j, std::int64_t z);

/// P_z(0 < Z_i < 2z for all i <= steps): walk started at z confined to the open strip.
DyadicProb strip_stay_prob(std::int64_t z, std::int64_t steps);

/// P_x(0 < Z_i < upper for all i <= steps) via the iterated-reflection series.
DyadicProb strip_stay_prob_from(std::int64_t x, std::int64_t upper, std::int64_t steps);

/// The same confinement probability by absorbing-barrier dynamic programming.
DyadicProb strip_stay_prob_dp(std::int64_t x, std::int64_t upper, std::int64_t steps);

/// One summand of the influence of bit m >= 2, split over Z_{m-1} = z.
struct InfluenceTerm {
    std::int64_t z = 0;
    DyadicProb ballot_weight;  // (z/(m-1)) P(Z_{m-1} = z)
    DyadicProb p_stay;         // P_z(min_{i <= n-m+1} Z_i > 0)
    DyadicProb p_strip;        // P_z(0 < Z_i < 2z for i <= n-m+1)
    DyadicProb contribution;   // ballot_weight * (p_stay - p_strip)
};

/// Influence of bit m on {Z_i > 0, i = 1..n}; exact. Throws std::out_of_range
/// unless 1 <= m <= n.
DyadicProb influence_exact(std::int64_t n, std::int64_t m);

/// The summands behind influence_exact(n, m) for m >= 2 (empty for m = 1).
/// influence_exact = 2 * sum of contributions.
std::vector<InfluenceTerm> influence_terms(std::int64_t n, std::int64_t m);

/// (I_1, ..., I_n) exactly.
std::vector<DyadicProb> influence_profile_exact(std::int64_t n);

/// (I_1, ..., I_n) in double precision; relative error well under 1e-9.
std::vector<double> influence_profile_float(std::int64_t n);

/// Largest n accepted by the enumeration oracles.
inline constexpr std::int64_t oracle_max_n = 20;

/// Influence of bit m by enumerating all 2^n strings and flipping bit m.
DyadicProb influence_oracle(std::int64_t n, std::int64_t m);

/// All n influences from a single enumeration.
std::vector<DyadicProb> influence_oracle_profile(std::int64_t n);

/// P(Z_j >= x).
DyadicProb tail_prob(std::int64_t j, std::int64_t x);

/// P(Z_j >= x) <= exp(-x^2 / (2j)).
bool chernoff_holds(std::int64_t j, std::int64_t x);

}  // namespace switchwalk::exact
