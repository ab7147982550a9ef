#include "switchwalk/dyadic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace switchwalk {

namespace {

// Bring a and b to the common exponent max(ea, eb).
void align(mpz_class& a, std::uint64_t ea, mpz_class& b, std::uint64_t eb) {
    if (ea < eb) {
        a <<= static_cast<mp_bitcnt_t>(eb - ea);
    } else if (eb < ea) {
        b <<= static_cast<mp_bitcnt_t>(ea - eb);
    }
}

}  // namespace

DyadicProb::DyadicProb(mpz_class count, std::uint64_t exponent)
    : num_(std::move(count)), exp_(exponent) {
    if (sgn(num_) < 0) throw std::domain_error("dyadic probability numerator is negative");
    canonicalize();
}

void DyadicProb::canonicalize() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    const mp_bitcnt_t tz = mpz_scan1(num_.get_mpz_t(), 0);
    const std::uint64_t shift = std::min<std::uint64_t>(tz, exp_);
    if (shift > 0) {
        num_ >>= static_cast<mp_bitcnt_t>(shift);
        exp_ -= shift;
    }
}

double DyadicProb::to_double() const {
    if (num_ == 0) return 0.0;
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, num_.get_mpz_t());
    return std::ldexp(mant, static_cast<int>(e - static_cast<long>(exp_)));
}

long double DyadicProb::to_long_double() const {
    if (num_ == 0) return 0.0L;
    // Take the top 64 bits of the numerator so no precision is lost to double.
    const std::size_t bits = mpz_sizeinbase(num_.get_mpz_t(), 2);
    const std::size_t drop = bits > 64 ? bits - 64 : 0;
    mpz_class top = num_ >> static_cast<mp_bitcnt_t>(drop);
    const long double mant = static_cast<long double>(mpz_get_ui(top.get_mpz_t()));
    return std::ldexp(mant, static_cast<int>(static_cast<long>(drop) - static_cast<long>(exp_)));
}

double DyadicProb::log2() const {
    if (num_ == 0) return -std::numeric_limits<double>::infinity();
    long e = 0;
    const double mant = mpz_get_d_2exp(&e, num_.get_mpz_t());
    return std::log2(mant) + static_cast<double>(e) - static_cast<double>(exp_);
}

std::string DyadicProb::to_string() const {
    return num_.get_str() + "/2^" + std::to_string(exp_);
}

DyadicProb DyadicProb::parse(const std::string& text) {
    const auto slash = text.find("/2^");
    if (slash == std::string::npos) throw std::invalid_argument("not a dyadic literal: " + text);
    mpz_class num;
    if (num.set_str(text.substr(0, slash), 10) != 0) {
        throw std::invalid_argument("bad numerator in dyadic literal: " + text);
    }
    const std::uint64_t e = std::stoull(text.substr(slash + 3));
    return DyadicProb(std::move(num), e);
}

DyadicProb& DyadicProb::operator+=(const DyadicProb& rhs) {
    mpz_class other = rhs.num_;
    align(num_, exp_, other, rhs.exp_);
    exp_ = std::max(exp_, rhs.exp_);
    num_ += other;
    canonicalize();
    return *this;
}

DyadicProb& DyadicProb::operator-=(const DyadicProb& rhs) {
    mpz_class other = rhs.num_;
    align(num_, exp_, other, rhs.exp_);
    exp_ = std::max(exp_, rhs.exp_);
    num_ -= other;
    if (sgn(num_) < 0) throw std::domain_error("dyadic subtraction went negative");
    canonicalize();
    return *this;
}

DyadicProb& DyadicProb::operator*=(const DyadicProb& rhs) {
    num_ *= rhs.num_;
    exp_ += rhs.exp_;
    canonicalize();
    return *this;
}

DyadicProb DyadicProb::scaled_pow2(std::int64_t k) const {
    if (num_ == 0) return {};
    DyadicProb out = *this;
    if (k >= 0) {
        const auto up = static_cast<std::uint64_t>(k);
        if (up <= out.exp_) {
            out.exp_ -= up;
        } else {
            out.num_ <<= static_cast<mp_bitcnt_t>(up - out.exp_);
            out.exp_ = 0;
        }
    } else {
        out.exp_ += static_cast<std::uint64_t>(-k);
    }
    out.canonicalize();
    return out;
}

DyadicProb DyadicProb::times(const mpz_class& factor) const {
    return DyadicProb(num_ * factor, exp_);
}

std::strong_ordering operator<=>(const DyadicProb& a, const DyadicProb& b) {
    mpz_class x = a.num_;
    mpz_class y = b.num_;
    align(x, a.exp_, y, b.exp_);
    const int c = cmp(x, y);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace switchwalk
