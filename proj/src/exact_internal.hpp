#pragma once

// Path-count helpers shared by the exact engine's translation units.

#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

namespace switchwalk::exact::detail {

using AllowedFn = std::function<bool(std::int64_t step, std::int64_t position)>;

/// Path counts after `steps` unit steps from `start`, keeping only paths whose
/// position after step i satisfies allowed(i, p). Positions live in [lo, hi];
/// entry k of the result is the count at position lo + k.
std::vector<mpz_class> count_paths(std::int64_t start, std::int64_t steps, std::int64_t lo,
                                   std::int64_t hi, const AllowedFn& allowed);

mpz_class sum_counts(const std::vector<mpz_class>& counts);

/// Number of `steps`-step paths from x staying inside (0, upper).
mpz_class strip_count_series(std::int64_t x, std::int64_t upper, std::int64_t steps);

/// Number of j-step paths from 0 staying positive and ending at z.
mpz_class ballot_count(std::int64_t j, std::int64_t z);

}  // namespace switchwalk::exact::detail
