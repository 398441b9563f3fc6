#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

#include "sidon/error.hpp"

namespace sidon {

using BigCount = boost::multiprecision::cpp_int;
using ExactRational = boost::multiprecision::cpp_rational;

/// C(n, k) exactly; zero outside 0 <= k <= n.
inline BigCount binomial(std::int64_t n, std::int64_t k) {
    if (n < 0 || k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    BigCount r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline BigCount pow(BigCount base, unsigned e) {
    return boost::multiprecision::pow(base, e);
}

inline ExactRational pow(const ExactRational& q, unsigned e) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    return ExactRational(pow(BigCount(numerator(q)), e), pow(BigCount(denominator(q)), e));
}

namespace detail {

inline BigCount round_half_even_div(const BigCount& num, const BigCount& den) {
    // den > 0, num >= 0
    BigCount q, r;
    boost::multiprecision::divide_qr(num, den, q, r);
    const BigCount twice = 2 * r;
    if (twice > den || (twice == den && (q & 1) != 0)) ++q;
    return q;
}

}  // namespace detail

/// Decimal rendering with `digits` significant digits, round-half-to-even.
/// Fixed-point for moderate magnitudes, otherwise d.ddde[+-]x. Trailing
/// zeros are trimmed.
inline std::string to_decimal(const ExactRational& x, unsigned digits = 12) {
    using boost::multiprecision::numerator;
    using boost::multiprecision::denominator;
    if (digits == 0) throw parameter_error("to_decimal: need at least one digit");
    if (x == 0) return "0";
    const bool negative = x < 0;
    const ExactRational ax = negative ? ExactRational(-x) : x;
    BigCount num = numerator(ax);
    BigCount den = denominator(ax);

    // exponent e with 10^e <= ax < 10^(e+1)
    long e = static_cast<long>(num.str().size()) - static_cast<long>(den.str().size());
    auto ge_pow10 = [&](long p) {
        return p >= 0 ? num >= den * pow(BigCount(10), static_cast<unsigned>(p))
                      : num * pow(BigCount(10), static_cast<unsigned>(-p)) >= den;
    };
    while (!ge_pow10(e)) --e;
    while (ge_pow10(e + 1)) ++e;

    // scaled = round(ax * 10^(digits-1-e))
    const long shift = static_cast<long>(digits) - 1 - e;
    BigCount sn = num, sd = den;
    if (shift >= 0) sn *= pow(BigCount(10), static_cast<unsigned>(shift));
    else sd *= pow(BigCount(10), static_cast<unsigned>(-shift));
    BigCount scaled = detail::round_half_even_div(sn, sd);
    std::string mant = scaled.str();
    if (mant.size() > digits) {  // rounded up to the next power of ten
        mant.pop_back();
        ++e;
    }

    std::string out;
    if (e >= -7 && e < 21) {
        if (e < 0) {
            out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + mant;
        } else if (static_cast<std::size_t>(e) + 1 >= mant.size()) {
            out = mant + std::string(static_cast<std::size_t>(e) + 1 - mant.size(), '0');
        } else {
            out = mant.substr(0, static_cast<std::size_t>(e) + 1) + "." + mant.substr(static_cast<std::size_t>(e) + 1);
        }
        if (out.find('.') != std::string::npos) {
            while (out.back() == '0') out.pop_back();
            if (out.back() == '.') out.pop_back();
        }
    } else {
        std::string frac = mant.substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        out = mant.substr(0, 1) + (frac.empty() ? "" : "." + frac) + "e" + (e < 0 ? "-" : "+") + std::to_string(e < 0 ? -e : e);
    }
    return negative ? "-" + out : out;
}

/// Doubles are dyadic rationals, so this rendering is exact before rounding.
inline std::string to_decimal(double x, unsigned digits = 12) {
    return to_decimal(ExactRational(x), digits);
}

inline std::string numerator_str(const ExactRational& q) { return boost::multiprecision::numerator(q).str(); }
inline std::string denominator_str(const ExactRational& q) { return boost::multiprecision::denominator(q).str(); }

}  // namespace sidon
