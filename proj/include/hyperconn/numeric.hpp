#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "hyperconn/error.hpp"

namespace hyperconn {

using big_int = boost::multiprecision::cpp_int;
using rational = boost::multiprecision::cpp_rational;

// Binomials with n at or below this limit are evaluated exactly in 64-bit
// integers (C(64, 32) < 2^64); larger n go through log-gamma.
inline constexpr std::uint32_t exact_binomial_limit = 64;

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

inline std::uint64_t binomial_u64(std::uint64_t n, std::uint64_t k) {
    if (n > exact_binomial_limit) {
        throw parameter_error("binomial_u64: n exceeds exact limit");
    }
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
    }
    return static_cast<std::uint64_t>(c);
}

// C(n, k) clamped to UINT64_MAX; exact whenever the true value fits.
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    constexpr auto cap = static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max());
    unsigned __int128 c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
        if (c > cap) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(c);
}

inline big_int binomial_big(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    big_int c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        c = c * (n - i) / (i + 1);
    }
    return c;
}

inline rational binomial_rational(std::uint64_t n, std::uint64_t k) {
    return rational(binomial_big(n, k));
}

// log C(n, k); -inf when k > n.
inline double log_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return neg_inf;
    if (n <= exact_binomial_limit) {
        return std::log(static_cast<double>(binomial_u64(n, k)));
    }
    const auto nd = static_cast<double>(n);
    const auto kd = static_cast<double>(k);
    return std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(nd - kd + 1.0);
}

// Neumaier-compensated running sum. Infinities propagate as in plain addition.
class compensated_sum {
public:
    void add(double v) {
        if (!std::isfinite(v) || !std::isfinite(sum_)) {
            sum_ += v;
            return;
        }
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }

    double value() const {
        return std::isfinite(sum_) ? sum_ + comp_ : sum_;
    }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// log(1 - t) for t in [0, 1]; returns -inf at t = 1.
inline double log1m(double t) {
    if (t >= 1.0) return neg_inf;
    return std::log1p(-t);
}

// log( C(n - r, x) / C(n, x) ), the probability that a uniform x-subset of
// [n] misses a fixed r-set. Evaluated as a product of (1 - r/(n - c)) over the
// shorter of the two equivalent index ranges. -inf when x + r > n.
inline double log_avoid_probability(std::uint64_t n, std::uint64_t r, std::uint64_t x) {
    if (x + r > n) return neg_inf;
    const std::uint64_t len = std::min(x, r);
    const std::uint64_t other = std::max(x, r);
    compensated_sum acc;
    for (std::uint64_t c = 0; c < len; ++c) {
        acc.add(std::log1p(-static_cast<double>(other) / static_cast<double>(n - c)));
    }
    return acc.value();
}

inline rational pow_rational(const rational& base, std::uint64_t exponent) {
    rational result = 1;
    rational b = base;
    while (exponent > 0) {
        if (exponent & 1U) result *= b;
        exponent >>= 1U;
        if (exponent > 0) b *= b;
    }
    return result;
}

inline double to_double(const rational& q) {
    return q.convert_to<double>();
}

}  // namespace hyperconn
