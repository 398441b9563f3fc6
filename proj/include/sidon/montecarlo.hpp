#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sidon/bounds.hpp"
#include "sidon/census.hpp"
#include "sidon/error.hpp"
#include "sidon/exact.hpp"
#include "sidon/integer_set.hpp"
#include "sidon/random.hpp"
#include "sidon/representation.hpp"

namespace sidon {

/// Uniform random k-subset of {1..n} by partial Fisher-Yates shuffle of the
/// virtual array [1..n]: for i < k, swap slot i with a uniform slot in
/// [i, n). Only displaced slots are stored when k is small relative to n.
/// Consumes exactly k bounded draws (plus Lemire rejections).
inline IntegerSet sample_k_subset(std::int64_t n, std::int64_t k, Xoshiro256& rng) {
    if (!(1 <= k && k <= n)) throw parameter_error("sample_k_subset: need 1 <= k <= n");
    std::vector<value_type> picked(static_cast<std::size_t>(k));
    if (4 * k >= n) {
        std::vector<value_type> slots(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = i + 1;
        for (std::int64_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - i)));
            std::swap(slots[static_cast<std::size_t>(i)], slots[static_cast<std::size_t>(j)]);
            picked[static_cast<std::size_t>(i)] = slots[static_cast<std::size_t>(i)];
        }
    } else {
        std::unordered_map<std::int64_t, value_type> moved;
        moved.reserve(static_cast<std::size_t>(2 * k));
        auto at = [&](std::int64_t i) {
            auto it = moved.find(i);
            return it == moved.end() ? i + 1 : it->second;
        };
        for (std::int64_t i = 0; i < k; ++i) {
            const auto j = i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(n - i)));
            const value_type vi = at(i), vj = at(j);
            moved[j] = vi;
            picked[static_cast<std::size_t>(i)] = vj;
        }
    }
    std::sort(picked.begin(), picked.end());
    return IntegerSet(std::move(picked), n);
}

struct Interval {
    double low = 0;
    double high = 1;
};

/// 95% Wilson score interval for `successes` out of `trials`. Always
/// contains the point estimate and lies in [0, 1].
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054) {
    if (trials == 0) throw parameter_error("wilson_interval: trials must be positive");
    const double nn = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = z * z;
    const double denom = 1 + z2 / nn;
    const double centre = (p + z2 / (2 * nn)) / denom;
    const double half = z / denom * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    Interval ci{std::clamp(centre - half, 0.0, 1.0), std::clamp(centre + half, 0.0, 1.0)};
    if (successes == 0) ci.low = 0;
    if (successes == trials) ci.high = 1;
    ci.low = std::min(ci.low, p);
    ci.high = std::max(ci.high, p);
    return ci;
}

/// Monte Carlo estimate of the probability that a uniform k-subset of
/// {1..n} is a B_h[g]-set.
struct Estimate {
    std::int64_t n = 0;
    std::int64_t k = 0;
    std::size_t h = 0;
    std::uint64_t g = 0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t seed = 0;
    Interval ci;

    ExactRational p_exact() const { return ExactRational(successes, trials); }
    double p_hat() const { return static_cast<double>(successes) / static_cast<double>(trials); }
    double half_width() const { return (ci.high - ci.low) / 2; }
    bool covers(const ExactRational& p) const { return ExactRational(ci.low) <= p && p <= ExactRational(ci.high); }
};

/// Trial t draws its subset from Xoshiro256(substream_seed(seed, t)), so the
/// success count is independent of how trials are split across workers.
inline Estimate estimate_probability(std::int64_t n, std::int64_t k, std::size_t h, std::uint64_t g,
                                     std::uint64_t trials, std::uint64_t seed, unsigned jobs = 1) {
    if (trials < 1) throw parameter_error("estimate_probability: trials must be positive");
    if (h < 1 || g < 1) throw parameter_error("estimate_probability: h and g must be positive");
    if (!(1 <= k && k <= n)) throw parameter_error("estimate_probability: need 1 <= k <= n");
    jobs = std::max(1u, jobs);
    const std::uint64_t chunks = std::min<std::uint64_t>(jobs, trials);
    std::vector<std::uint64_t> hits(chunks, 0);
    detail::run_tasks(chunks, jobs, [&](std::size_t c) {
        const std::uint64_t lo = trials * c / chunks, hi = trials * (c + 1) / chunks;
        std::uint64_t local = 0;
        for (std::uint64_t t = lo; t < hi; ++t) {
            Xoshiro256 rng(substream_seed(seed, t));
            if (is_bhg(sample_k_subset(n, k, rng), h, g)) ++local;
        }
        hits[c] = local;
    });
    Estimate e{n, k, h, g, trials, 0, seed, {}};
    for (auto x : hits) e.successes += x;
    e.ci = wilson_interval(e.successes, trials);
    return e;
}

/// round-half-to-even of c * n^alpha, clamped to [lo, n].
inline std::int64_t growth_size(std::int64_t n, double c, double alpha, std::int64_t lo = 1) {
    const double raw = c * std::pow(static_cast<double>(n), alpha);
    double r = std::nearbyint(raw);  // default rounding mode: ties to even
    if (!std::isfinite(r)) r = static_cast<double>(n);
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(r), lo, n);
}

struct ScanConfig {
    std::size_t h = 2;
    std::uint64_t g = 1;
    double alpha = 0.2;
    double c = 1.0;
    std::vector<std::int64_t> n_grid;
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 0;
};

struct ScanPoint {
    Estimate estimate;
    /// max(0, 1 - 4k^(2g+2)/n^g), the exact lower bound on the ratio; h = 2 only.
    std::optional<ExactRational> ratio_bound;
    std::string error;

    bool ok() const { return error.empty(); }
};

/// One estimate per grid point with k_n = growth_size(n, c, alpha). Point i
/// uses seed substream_seed(cfg.seed, i).
inline std::vector<ScanPoint> density_scan(const ScanConfig& cfg, unsigned jobs = 1) {
    if (cfg.h < 1 || cfg.g < 1 || cfg.trials < 1) throw parameter_error("density_scan: h, g, trials must be positive");
    std::vector<ScanPoint> out;
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
        const auto n = cfg.n_grid[i];
        ScanPoint pt;
        pt.estimate.n = n;
        pt.estimate.h = cfg.h;
        pt.estimate.g = cfg.g;
        pt.estimate.trials = cfg.trials;
        pt.estimate.seed = substream_seed(cfg.seed, i);
        try {
            if (n < 1) throw parameter_error("density_scan: grid values must be positive");
            const auto k = growth_size(n, cfg.c, cfg.alpha);
            pt.estimate = estimate_probability(n, k, cfg.h, cfg.g, cfg.trials, pt.estimate.seed, jobs);
            if (cfg.h == 2) pt.ratio_bound = b2g_lower_bound(n, k, static_cast<std::int64_t>(cfg.g)).ratio_bound();
        } catch (const std::exception& e) {
            pt.error = e.what();
        }
        out.push_back(std::move(pt));
    }
    return out;
}

struct ThresholdRecord {
    std::size_t h = 2;
    std::uint64_t g = 1;
    /// "B_h" for g = 1. For g > 1 each point is measured twice: "B_h[g]"
    /// and the literal "B_h" reading of the conjectured limit.
    std::string quantity = "B_h";
    double scale = 0;  // the Lambda in k_n ~ Lambda n^(1/2h)
    Estimate estimate;

    /// -ln(p_hat); +inf when no trial succeeded.
    double lambda_hat() const {
        if (estimate.successes == 0) return std::numeric_limits<double>::infinity();
        return -std::log(estimate.p_hat());
    }
};

struct ThresholdFit {
    double scale = 0;
    std::int64_t n = 0;
    double lambda_hat = 0;
    double kappa_hat = 0;  // lambda_hat / Lambda^(exponent); NaN when excluded
    bool excluded = false;
};

struct ThresholdResult {
    std::vector<ThresholdRecord> records;
    std::vector<ThresholdFit> fits;
    std::vector<std::string> warnings;
    bool conjecture_probe = false;
    /// Lambda exponent in lambda = kappa * Lambda^e; 2h for g = 1.
    double lambda_exponent = 0;

    std::optional<double> kappa_min() const { return pick(true); }
    std::optional<double> kappa_max() const { return pick(false); }
    /// kappa_max / kappa_min over the fitted Lambdas.
    std::optional<double> kappa_spread() const {
        auto lo = kappa_min(), hi = kappa_max();
        if (!lo || !hi || *lo <= 0) return std::nullopt;
        return *hi / *lo;
    }

private:
    std::optional<double> pick(bool min) const {
        std::optional<double> best;
        for (const auto& f : fits) {
            if (f.excluded) continue;
            if (!best || (min ? f.kappa_hat < *best : f.kappa_hat > *best)) best = f.kappa_hat;
        }
        return best;
    }
};

/// For each Lambda and n: k_n = round(Lambda * n^(g/(gh+h))) clamped to
/// [2, n], then a B_h[g] probability estimate. The fit at the largest n gives
/// kappa_hat = -ln(p_hat) / Lambda^(h(g+1)/g). Runs with g > 1 probe the
/// conjectured B_h[g] threshold.
inline ThresholdResult threshold_experiment(std::size_t h, std::uint64_t g, const std::vector<double>& scales,
                                            std::vector<std::int64_t> n_grid, std::uint64_t trials,
                                            std::uint64_t seed, unsigned jobs = 1) {
    if (h < 2) throw parameter_error("threshold_experiment: h must be at least 2");
    if (g < 1 || trials < 1) throw parameter_error("threshold_experiment: g and trials must be positive");
    if (n_grid.empty() || scales.empty()) throw parameter_error("threshold_experiment: empty grid");
    for (auto s : scales)
        if (!(s > 0)) throw parameter_error("threshold_experiment: Lambda values must be positive");
    std::sort(n_grid.begin(), n_grid.end());
    if (n_grid.front() < 2) throw parameter_error("threshold_experiment: n must be at least 2");

    const double gd = static_cast<double>(g), hd = static_cast<double>(h);
    const double alpha = gd / (gd * hd + hd);
    ThresholdResult res;
    res.conjecture_probe = g > 1;
    res.lambda_exponent = 1 / alpha;

    std::uint64_t point = 0;
    for (double scale : scales) {
        for (auto n : n_grid) {
            const auto k = growth_size(n, scale, alpha, 2);
            const auto s = substream_seed(seed, point++);
            ThresholdRecord rec{h, g, g == 1 ? "B_h" : "B_h[g]", scale, estimate_probability(n, k, h, g, trials, s, jobs)};
            res.records.push_back(rec);
            if (g > 1) {
                // same samples, literal B_h reading
                res.records.push_back({h, g, "B_h", scale, estimate_probability(n, k, h, 1, trials, s, jobs)});
            }
        }
        // fit on the primary quantity at the largest n
        const auto it = std::find_if(res.records.rbegin(), res.records.rend(), [&](const ThresholdRecord& r) {
            return r.scale == scale && r.estimate.n == n_grid.back() && r.quantity == (g == 1 ? "B_h" : "B_h[g]");
        });
        ThresholdFit fit{scale, n_grid.back(), it->lambda_hat(), 0, false};
        if (!std::isfinite(fit.lambda_hat)) {
            fit.excluded = true;
            fit.kappa_hat = std::numeric_limits<double>::quiet_NaN();
            res.warnings.push_back("Lambda=" + to_decimal(scale) + ": p_hat = 0 at n=" + std::to_string(n_grid.back()) +
                                   "; excluded from the kappa fit");
        } else {
            fit.kappa_hat = fit.lambda_hat / std::pow(scale, res.lambda_exponent);
        }
        res.fits.push_back(fit);
    }
    return res;
}

}  // namespace sidon
