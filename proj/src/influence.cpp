#include <cmath>
#include <string>

#include "exact_internal.hpp"
#include "switchwalk/exact_engine.hpp"

// Influence of bit m on P_n = {Z_i > 0, i = 1..n}.
//
// Bit m is pivotal with P_n holding iff the walk stays positive up to step n and
// the part after step m-1 reaches 2 Z_{m-1}; flipping X_m reflects that part about
// Z_{m-1}. Pivotality does not depend on X_m, so I_m = 2 P(pivotal and P_n).
// Splitting over Z_{m-1} = z, the first m-1 steps contribute a ballot weight and the
// remaining N = n-m+1 steps contribute P_z(stay positive) - P_z(stay in (0, 2z)).

namespace switchwalk::exact {

namespace {

void check_index(std::int64_t n, std::int64_t m) {
    if (n < 1 || m < 1 || m > n) {
        throw std::out_of_range("influence index m=" + std::to_string(m) + " outside [1, n=" +
                                std::to_string(n) + "]");
    }
}

// Count of N-step paths from z that stay positive and reach 2z.
mpz_class hit_count(const BinomialRow& row, std::int64_t z) {
    const std::int64_t steps = row.steps();
    if (z > steps) return 0;
    mpz_class stay = row.paths_between(-z + 1, z);
    stay -= detail::strip_count_series(z, 2 * z, steps);
    if (sgn(stay) < 0) throw InternalError("strip probability exceeds stay-positive probability");
    return stay;
}

}  // namespace

DyadicProb influence_exact(std::int64_t n, std::int64_t m) {
    check_index(n, m);
    if (m == 1) {
        return DyadicProb(binomial_row(n - 1).choose((n - 1) / 2), static_cast<std::uint64_t>(n - 1));
    }
    const std::int64_t j = m - 1;
    const BinomialRow& tail_row = binomial_row(n - m + 1);
    mpz_class total = 0;
    for (std::int64_t z = (j % 2 == 0) ? 2 : 1; z <= j; z += 2) {
        const mpz_class hits = hit_count(tail_row, z);
        if (hits == 0) continue;
        total += detail::ballot_count(j, z) * hits;
    }
    // 2 * total / 2^(j + N) with j + N = n
    return DyadicProb(std::move(total), static_cast<std::uint64_t>(n - 1));
}

std::vector<InfluenceTerm> influence_terms(std::int64_t n, std::int64_t m) {
    check_index(n, m);
    std::vector<InfluenceTerm> terms;
    if (m == 1) return terms;
    const std::int64_t j = m - 1;
    const std::int64_t steps = n - m + 1;
    for (std::int64_t z = (j % 2 == 0) ? 2 : 1; z <= j; z += 2) {
        InfluenceTerm term;
        term.z = z;
        term.ballot_weight = ballot_prob(j, z);
        term.p_stay = reflection_pair(z, steps).second;
        term.p_strip = strip_stay_prob(z, steps);
        term.contribution = term.ballot_weight * (term.p_stay - term.p_strip);
        terms.push_back(std::move(term));
    }
    return terms;
}

std::vector<DyadicProb> influence_profile_exact(std::int64_t n) {
    check_index(n, 1);
    std::vector<DyadicProb> out;
    out.reserve(static_cast<std::size_t>(n));
    for (std::int64_t m = 1; m <= n; ++m) out.push_back(influence_exact(n, m));
    return out;
}

namespace {

// Upper tails of an N-step walk: tail(d) = P(S_N >= d), summed from the top so
// small tails keep full relative precision.
class FloatTails {
public:
    FloatTails(std::int64_t steps, const std::vector<double>& log_fact) : steps_(steps) {
        const auto size = static_cast<std::size_t>(steps) + 2;
        tail_by_k_.assign(size, 0.0);
        const double base = log_fact[static_cast<std::size_t>(steps)] -
                            static_cast<double>(steps) * std::log(2.0);
        for (std::int64_t k = steps; k >= 0; --k) {
            const double lp = base - log_fact[static_cast<std::size_t>(k)] -
                              log_fact[static_cast<std::size_t>(steps - k)];
            tail_by_k_[static_cast<std::size_t>(k)] = tail_by_k_[static_cast<std::size_t>(k) + 1] + std::exp(lp);
        }
    }

    double tail(std::int64_t d) const {
        // S_N = 2k - N >= d <=> k >= ceil((N + d) / 2)
        std::int64_t k = steps_ + d;
        k = (k >= 0) ? (k + 1) / 2 : -((-k) / 2);
        if (k <= 0) return 1.0;
        if (k > steps_) return 0.0;
        return tail_by_k_[static_cast<std::size_t>(k)];
    }

    double between(std::int64_t lo, std::int64_t hi) const {
        if (lo > hi) return 0.0;
        if (lo >= 1) return tail(lo) - tail(hi + 1);
        if (hi <= -1) return tail(-hi) - tail(-lo + 1);
        return 1.0 - tail(hi + 1) - tail(-lo + 1);
    }

private:
    std::int64_t steps_;
    std::vector<double> tail_by_k_;
};

// P_z(stay positive, reach 2z) written so that every term is a tail beyond
// displacement z; the stay-positive mass below 2z cancels against the k = 0
// term of the strip series analytically, avoiding a near-1 subtraction.
double hit_prob_float(const FloatTails& tails, std::int64_t z, std::int64_t steps) {
    if (z > steps) return 0.0;
    const std::int64_t upper = 2 * z;
    const std::int64_t period = 2 * upper;
    double value = tails.tail(z) - tails.tail(3 * z);
    const std::int64_t kmax = (steps + z + upper) / period + 1;
    for (std::int64_t k = -kmax; k <= kmax; ++k) {
        if (k == 0) continue;
        const std::int64_t shift = k * period - z;
        value -= tails.between(1 + shift, upper - 1 + shift);
        value += tails.between(-upper + 1 + shift, -1 + shift);
    }
    return value;
}

}  // namespace

std::vector<double> influence_profile_float(std::int64_t n) {
    check_index(n, 1);
    std::vector<double> log_fact(static_cast<std::size_t>(n) + 2);
    for (std::size_t i = 0; i < log_fact.size(); ++i) log_fact[i] = std::lgamma(static_cast<double>(i) + 1.0);
    const double ln2 = std::log(2.0);

    std::vector<double> out(static_cast<std::size_t>(n));
    {
        const std::int64_t j = n - 1;
        out[0] = 2.0 * std::exp(log_fact[static_cast<std::size_t>(j)] -
                                log_fact[static_cast<std::size_t>(j / 2)] -
                                log_fact[static_cast<std::size_t>(j - j / 2)] -
                                static_cast<double>(n) * ln2);
    }
    for (std::int64_t m = 2; m <= n; ++m) {
        const std::int64_t j = m - 1;
        const std::int64_t steps = n - m + 1;
        const FloatTails tails(steps, log_fact);
        double total = 0.0;
        for (std::int64_t z = (j % 2 == 0) ? 2 : 1; z <= std::min(j, steps); z += 2) {
            const std::int64_t k = (j + z) / 2;
            const double log_pmf = log_fact[static_cast<std::size_t>(j)] - log_fact[static_cast<std::size_t>(k)] -
                                   log_fact[static_cast<std::size_t>(j - k)] - static_cast<double>(j) * ln2;
            const double weight = static_cast<double>(z) / static_cast<double>(j) * std::exp(log_pmf);
            total += weight * hit_prob_float(tails, z, steps);
        }
        out[static_cast<std::size_t>(m - 1)] = 2.0 * total;
    }
    return out;
}

std::vector<DyadicProb> influence_oracle_profile(std::int64_t n) {
    if (n > oracle_max_n) {
        throw BudgetError("influence oracle enumerates 2^n strings; n=" + std::to_string(n) +
                          " exceeds the budget n <= " + std::to_string(oracle_max_n));
    }
    check_index(n, 1);
    const std::uint64_t strings = std::uint64_t{1} << n;
    std::vector<std::uint8_t> positive(strings);
    for (std::uint64_t mask = 0; mask < strings; ++mask) {
        int sign = 1;
        std::int64_t z = 0;
        bool ok = true;
        for (std::int64_t i = 0; i < n && ok; ++i) {
            if ((mask >> i) & 1U) sign = -sign;
            z += sign;
            ok = z > 0;
        }
        positive[mask] = ok ? 1 : 0;
    }
    std::vector<std::uint64_t> pivotal(static_cast<std::size_t>(n), 0);
    for (std::uint64_t mask = 0; mask < strings; ++mask) {
        for (std::int64_t m = 0; m < n; ++m) {
            if (positive[mask] != positive[mask ^ (std::uint64_t{1} << m)]) ++pivotal[static_cast<std::size_t>(m)];
        }
    }
    std::vector<DyadicProb> out;
    out.reserve(pivotal.size());
    for (std::uint64_t count : pivotal) out.emplace_back(mpz_class(static_cast<unsigned long>(count)), n);
    return out;
}

DyadicProb influence_oracle(std::int64_t n, std::int64_t m) {
    if (n > oracle_max_n) {
        throw BudgetError("influence oracle enumerates 2^n strings; n=" + std::to_string(n) +
                          " exceeds the budget n <= " + std::to_string(oracle_max_n));
    }
    check_index(n, m);
    return influence_oracle_profile(n)[static_cast<std::size_t>(m - 1)];
}

}  // namespace switchwalk::exact
