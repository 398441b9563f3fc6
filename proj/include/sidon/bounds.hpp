#pragma once

#include <cstdint>
#include <optional>

#include "sidon/error.hpp"
#include "sidon/exact.hpp"

namespace sidon {

/// C(n-j, k-j) / C(n, k) against (k/n)^j.
struct BinomRatioCheck {
    ExactRational ratio;
    ExactRational bound;
    bool holds = false;
};

inline BinomRatioCheck binom_ratio_and_bound(std::int64_t n, std::int64_t k, std::int64_t j) {
    if (!(n >= 1 && 0 <= j && j <= k && k <= n)) throw parameter_error("binom_ratio_and_bound: need 0 <= j <= k <= n, n >= 1");
    BinomRatioCheck out;
    out.ratio = ExactRational(binomial(n - j, k - j), binomial(n, k));
    out.bound = pow(ExactRational(k, n), static_cast<unsigned>(j));
    out.holds = out.ratio <= out.bound;
    return out;
}

/// Lower bound on the number of B_2[g]-sets of size k in {1..n}:
/// C(n,k) * max(0, 1 - 4 k^(2g+2) / n^g).
struct BoundReport {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::int64_t g = 0;
    ExactRational raw_term;     // unclamped
    ExactRational bound_value;  // C(n,k) * max(0, raw_term)
    BigCount binom;

    bool informative() const { return raw_term > 0; }
    /// Lower bound on B/C(n,k), clamped at zero.
    ExactRational ratio_bound() const { return raw_term > 0 ? raw_term : ExactRational(0); }
};

inline ExactRational b2g_raw_term(std::int64_t n, std::int64_t k, std::int64_t g) {
    const auto e = static_cast<unsigned>(2 * g + 2);
    return ExactRational(1) - ExactRational(4 * pow(BigCount(k), e), pow(BigCount(n), static_cast<unsigned>(g)));
}

inline BoundReport b2g_lower_bound(std::int64_t n, std::int64_t k, std::int64_t g) {
    if (!(n >= 1 && k >= 1 && g >= 1 && k <= n)) throw parameter_error("b2g_lower_bound: need n, k, g >= 1 and k <= n");
    BoundReport r;
    r.n = n;
    r.k = k;
    r.g = g;
    r.raw_term = b2g_raw_term(n, k, g);
    r.binom = binomial(n, k);
    r.bound_value = r.raw_term > 0 ? ExactRational(r.binom) * r.raw_term : ExactRational(0);
    return r;
}

/// Smallest integer cap with cap^h >= h! * g * h * n. Every B_h[g]-set in
/// {1..n} (h >= 2) has fewer than cap elements.
inline std::uint64_t bhg_cardinality_cap(std::int64_t n, std::int64_t h, std::int64_t g) {
    if (!(n >= 1 && h >= 1 && g >= 1)) throw parameter_error("bhg_cardinality_cap: need n, h, g >= 1");
    BigCount target = BigCount(g) * h * n;
    for (std::int64_t i = 2; i <= h; ++i) target *= i;
    const auto e = static_cast<unsigned>(h);
    BigCount lo = 0, hi = 1;
    while (pow(hi, e) < target) hi *= 2;
    // invariant: lo^h < target <= hi^h
    while (hi - lo > 1) {
        BigCount mid = (lo + hi) / 2;
        if (pow(mid, e) >= target) hi = mid; else lo = mid;
    }
    return hi.convert_to<std::uint64_t>();
}

/// k^(2h) / n, the size of the B_{h-1} to B_h defect relative to C(n,k),
/// up to a constant depending only on h.
inline ExactRational bh_defect_scaling(std::int64_t n, std::int64_t k, std::int64_t h) {
    if (!(n >= 1 && k >= 1 && h >= 1)) throw parameter_error("bh_defect_scaling: need n, k, h >= 1");
    return ExactRational(pow(BigCount(k), static_cast<unsigned>(2 * h)), BigCount(n));
}

}  // namespace sidon
