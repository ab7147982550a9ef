#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace switchwalk {

/// Exact non-negative dyadic rational numerator / 2^exponent.
///
/// Kept in canonical form (numerator odd, or numerator zero with exponent 0),
/// so equal values have equal representations and operator== is structural.
/// Subtraction that would go negative throws std::domain_error.
class DyadicProb {
public:
    DyadicProb() = default;

    /// count / 2^exponent; count must be non-negative.
    DyadicProb(mpz_class count, std::uint64_t exponent);

    static DyadicProb zero() { return {}; }
    static DyadicProb one() { return DyadicProb(mpz_class(1), 0); }

    const mpz_class& numerator() const noexcept { return num_; }
    std::uint64_t exponent() const noexcept { return exp_; }
    bool is_zero() const noexcept { return num_ == 0; }

    double to_double() const;
    long double to_long_double() const;
    /// log2 of the value; -infinity for zero.
    double log2() const;

    /// "numerator/2^e", e.g. "3/2^4"; zero prints as "0/2^0".
    std::string to_string() const;
    /// Parses the to_string() form.
    static DyadicProb parse(const std::string& text);

    DyadicProb& operator+=(const DyadicProb& rhs);
    DyadicProb& operator-=(const DyadicProb& rhs);
    DyadicProb& operator*=(const DyadicProb& rhs);

    friend DyadicProb operator+(DyadicProb a, const DyadicProb& b) { return a += b; }
    friend DyadicProb operator-(DyadicProb a, const DyadicProb& b) { return a -= b; }
    friend DyadicProb operator*(DyadicProb a, const DyadicProb& b) { return a *= b; }

    /// Multiply by 2^k (k may be negative).
    DyadicProb scaled_pow2(std::int64_t k) const;
    DyadicProb times(const mpz_class& factor) const;

    friend bool operator==(const DyadicProb& a, const DyadicProb& b) {
        return a.exp_ == b.exp_ && a.num_ == b.num_;
    }
    friend std::strong_ordering operator<=>(const DyadicProb& a, const DyadicProb& b);

private:
    void canonicalize();

    mpz_class num_{0};
    std::uint64_t exp_ = 0;
};

}  // namespace switchwalk
