#include "switchwalk/core_walks.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace switchwalk {

namespace {

void check_sign(int value) {
    if (value != 1 && value != -1) {
        throw std::invalid_argument("bit value must be -1 or +1, got " + std::to_string(value));
    }
}

}  // namespace

BitSequence::BitSequence(std::vector<int8_t> bits) : bits_(std::move(bits)) {
    for (int8_t b : bits_) check_sign(b);
}

BitSequence::BitSequence(std::initializer_list<int> bits) {
    bits_.reserve(bits.size());
    for (int b : bits) {
        check_sign(b);
        bits_.push_back(static_cast<int8_t>(b));
    }
}

BitSequence BitSequence::filled(std::size_t n, int value) {
    check_sign(value);
    return BitSequence(std::vector<int8_t>(n, static_cast<int8_t>(value)));
}

BitSequence BitSequence::from_mask(std::uint64_t mask, std::size_t n) {
    std::vector<int8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) bits[i] = ((mask >> i) & 1U) ? -1 : 1;
    return BitSequence(std::move(bits));
}

void BitSequence::set(std::size_t i, int value) {
    check_sign(value);
    bits_.at(i) = static_cast<int8_t>(value);
}

const char* to_string(WalkKind kind) noexcept {
    return kind == WalkKind::compass ? "compass" : "switch";
}

WalkPath switch_walk(const BitSequence& bits, std::int64_t origin) {
    WalkPath path{WalkKind::switch_walk, {}};
    path.positions.resize(bits.size() + 1);
    path.positions[0] = origin;
    int sign = 1;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        sign *= bits[i];
        path.positions[i + 1] = path.positions[i] + sign;
    }
    return path;
}

WalkPath compass_walk(const BitSequence& bits, std::int64_t origin) {
    WalkPath path{WalkKind::compass, {}};
    path.positions.resize(bits.size() + 1);
    path.positions[0] = origin;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        path.positions[i + 1] = path.positions[i] + bits[i];
    }
    return path;
}

WalkPath walk(WalkKind kind, const BitSequence& bits, std::int64_t origin) {
    return kind == WalkKind::compass ? compass_walk(bits, origin) : switch_walk(bits, origin);
}

WalkPath flip_suffix_image(const WalkPath& path, std::size_t m) {
    const std::size_t n = path.steps();
    if (m < 1 || m > n) {
        throw std::out_of_range("flip index " + std::to_string(m) + " outside [1, " +
                                std::to_string(n) + "]");
    }
    WalkPath out = path;
    const std::int64_t pivot = 2 * path.positions[m - 1];
    for (std::size_t i = m; i <= n; ++i) out.positions[i] = pivot - path.positions[i];
    return out;
}

std::int64_t barrier_floor(std::size_t i, double alpha) {
    if (i == 0) return 0;
    if (alpha == 0.0 || i == 1) return 1;
    const double p = std::pow(static_cast<double>(i), alpha);
    const double nearest = std::round(p);
    if (std::abs(p - nearest) > 1e-9) return static_cast<std::int64_t>(std::ceil(p));
    // p sits on an integer up to rounding: decide between nearest and nearest+1
    // with an extended-precision evaluation.
    const long double q = std::pow(static_cast<long double>(i), static_cast<long double>(alpha));
    const long double r = static_cast<long double>(nearest);
    if (q <= r * (1.0L + 64.0L * std::numeric_limits<long double>::epsilon())) {
        return static_cast<std::int64_t>(nearest);
    }
    return static_cast<std::int64_t>(nearest) + 1;
}

std::vector<std::int64_t> barrier_sequence(std::size_t n, double alpha) {
    std::vector<std::int64_t> b(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) b[i] = barrier_floor(i, alpha);
    return b;
}

bool barrier_positive(const WalkPath& path, double alpha) {
    const std::size_t n = path.steps();
    for (std::size_t i = 1; i <= n; ++i) {
        if (path.positions[i] < barrier_floor(i, alpha)) return false;
    }
    return true;
}

}  // namespace switchwalk
