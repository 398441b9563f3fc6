#include <gtest/gtest.h>

#include <cmath>

#include "sidon/montecarlo.hpp"

using sidon::ExactRational;

TEST(Random, SubstreamsAreStable) {
    // Pinned so that any change to the generator or mixing is noticed.
    sidon::Xoshiro256 a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
    EXPECT_NE(sidon::substream_seed(1, 0), sidon::substream_seed(1, 1));
    EXPECT_NE(sidon::substream_seed(1, 0), sidon::substream_seed(2, 0));
    EXPECT_EQ(sidon::mix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(Random, BelowIsInRange) {
    sidon::Xoshiro256 rng(7);
    for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 1000ULL, (1ULL << 63) + 5}) {
        for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(bound), bound);
    }
}

TEST(Sampler, FullAndDeterministic) {
    sidon::Xoshiro256 rng(1);
    EXPECT_EQ(sidon::sample_k_subset(9, 9, rng), sidon::IntegerSet::interval(9));
    sidon::Xoshiro256 r1(42), r2(42);
    EXPECT_EQ(sidon::sample_k_subset(10, 3, r1), sidon::sample_k_subset(10, 3, r2));
    EXPECT_THROW(sidon::sample_k_subset(5, 6, rng), sidon::parameter_error);
    EXPECT_THROW(sidon::sample_k_subset(5, 0, rng), sidon::parameter_error);
}

TEST(Sampler, SingletonsUniform) {
    // frequency 1/n within 3 sigma, and a chi-square check at 99.9%
    const int n = 20, draws = 100000;
    std::vector<int> freq(n + 1, 0);
    sidon::Xoshiro256 rng(99);
    for (int i = 0; i < draws; ++i) ++freq[static_cast<std::size_t>(sidon::sample_k_subset(n, 1, rng).min())];
    const double expect = double(draws) / n;
    const double sigma = std::sqrt(draws * (1.0 / n) * (1 - 1.0 / n));
    double chi2 = 0;
    for (int x = 1; x <= n; ++x) {
        EXPECT_LT(std::abs(freq[x] - expect), 3 * sigma) << x;
        chi2 += (freq[x] - expect) * (freq[x] - expect) / expect;
    }
    EXPECT_LT(chi2, 43.82);  // chi-square, 19 dof, p = 0.001
}

TEST(Sampler, InclusionFrequency) {
    // each element with probability k/n, within 4 sigma, 10^6 draws
    const int n = 30, k = 5, draws = 1000000;
    std::vector<int> freq(n + 1, 0);
    sidon::Xoshiro256 rng(12345);
    for (int i = 0; i < draws; ++i)
        for (auto x : sidon::sample_k_subset(n, k, rng)) ++freq[static_cast<std::size_t>(x)];
    const double p = double(k) / n;
    const double sigma = std::sqrt(draws * p * (1 - p));
    for (int x = 1; x <= n; ++x) EXPECT_LT(std::abs(freq[x] - draws * p), 4 * sigma) << x;
}

TEST(Sampler, SparseAndDenseAgree) {
    // The same draws through the map-backed and array-backed shuffles.
    for (std::uint64_t s = 0; s < 50; ++s) {
        sidon::Xoshiro256 a(s), b(s);
        const auto x = sidon::sample_k_subset(1000, 10, a);  // sparse
        std::vector<sidon::value_type> slots(1000);
        for (int i = 0; i < 1000; ++i) slots[static_cast<std::size_t>(i)] = i + 1;
        std::vector<sidon::value_type> picked;
        for (int i = 0; i < 10; ++i) {
            const auto j = static_cast<std::size_t>(i) + b.below(static_cast<std::uint64_t>(1000 - i));
            std::swap(slots[static_cast<std::size_t>(i)], slots[j]);
            picked.push_back(slots[static_cast<std::size_t>(i)]);
        }
        std::sort(picked.begin(), picked.end());
        EXPECT_EQ(x, sidon::IntegerSet(picked, 1000));
    }
}

TEST(Wilson, Properties) {
    const auto a = sidon::wilson_interval(0, 100);
    EXPECT_EQ(a.low, 0.0);
    EXPECT_GT(a.high, 0.0);
    const auto b = sidon::wilson_interval(100, 100);
    EXPECT_EQ(b.high, 1.0);
    EXPECT_LT(b.low, 1.0);
    // textbook value: 50/100 -> [0.4038, 0.5962]
    const auto c = sidon::wilson_interval(50, 100);
    EXPECT_NEAR(c.low, 0.40383, 1e-4);
    EXPECT_NEAR(c.high, 0.59617, 1e-4);
    for (std::uint64_t s = 0; s <= 37; ++s) {
        const auto ci = sidon::wilson_interval(s, 37);
        EXPECT_LE(ci.low, double(s) / 37);
        EXPECT_GE(ci.high, double(s) / 37);
    }
    EXPECT_THROW(sidon::wilson_interval(0, 0), sidon::parameter_error);
}

TEST(Estimate, TrivialCases) {
    const auto e = sidon::estimate_probability(50, 1, 3, 1, 500, 9);
    EXPECT_EQ(e.successes, 500u);
    EXPECT_EQ(e.p_exact(), 1);
    const auto z = sidon::estimate_probability(3, 3, 2, 1, 1000, 9);
    EXPECT_EQ(z.successes, 0u);
    EXPECT_EQ(z.p_hat(), 0.0);
    EXPECT_THROW(sidon::estimate_probability(3, 3, 2, 1, 0, 9), sidon::parameter_error);
}

TEST(Estimate, DeterministicAcrossWorkers) {
    const auto base = sidon::estimate_probability(60, 6, 2, 1, 5000, 77, 1);
    for (unsigned jobs : {2u, 3u, 8u}) {
        const auto e = sidon::estimate_probability(60, 6, 2, 1, 5000, 77, jobs);
        EXPECT_EQ(e.successes, base.successes);
        EXPECT_EQ(e.ci.low, base.ci.low);
    }
    EXPECT_NE(sidon::estimate_probability(60, 6, 2, 1, 5000, 78).successes, base.successes);
}

TEST(Estimate, CoversExactRatio) {
    // 193960 / 230300 from the exhaustive census
    const ExactRational exact(193960, 230300);
    int covered = 0;
    for (std::uint64_t s = 0; s < 20; ++s)
        covered += sidon::estimate_probability(50, 4, 2, 1, 20000, s).covers(exact);
    EXPECT_GE(covered, 17);
}

TEST(GrowthSize, RoundsHalfToEven) {
    EXPECT_EQ(sidon::growth_size(1000, 1, 0.2), 4);
    EXPECT_EQ(sidon::growth_size(1'000'000, 1, 0.2), 16);
    EXPECT_EQ(sidon::growth_size(100, 2.5, 0), 2);
    EXPECT_EQ(sidon::growth_size(100, 3.5, 0), 4);
    EXPECT_EQ(sidon::growth_size(100, 0.1, 0), 1);
    EXPECT_EQ(sidon::growth_size(100, 0.1, 0, 2), 2);
    EXPECT_EQ(sidon::growth_size(5, 1, 1.5), 5);
}

TEST(DensityScan, PointsAndBounds) {
    sidon::ScanConfig cfg{2, 1, 0.0, 2.0, {10, 100, 1000}, 300, 5};
    const auto pts = sidon::density_scan(cfg);
    ASSERT_EQ(pts.size(), 3u);
    for (const auto& p : pts) {
        EXPECT_TRUE(p.ok());
        EXPECT_EQ(p.estimate.k, 2);
        EXPECT_EQ(p.estimate.successes, 300u);
        ASSERT_TRUE(p.ratio_bound);
    }
    EXPECT_EQ(*pts[2].ratio_bound, ExactRational(1) - ExactRational(4 * 16, 1000));
    // a bad grid point is recorded and the scan goes on
    sidon::ScanConfig bad{2, 1, 0.5, 1.0, {0, 100}, 50, 1};
    const auto b = sidon::density_scan(bad);
    EXPECT_FALSE(b[0].ok());
    EXPECT_TRUE(b[1].ok());
}

TEST(Threshold, SmallLambdaGivesCertainty) {
    const auto r = sidon::threshold_experiment(2, 1, {0.1}, {100, 1000}, 200, 3);
    ASSERT_EQ(r.records.size(), 2u);
    for (const auto& rec : r.records) {
        EXPECT_EQ(rec.estimate.k, 2);
        EXPECT_EQ(rec.lambda_hat(), 0.0);
    }
    ASSERT_EQ(r.fits.size(), 1u);
    EXPECT_EQ(r.fits[0].kappa_hat, 0.0);
    EXPECT_FALSE(r.conjecture_probe);
    EXPECT_DOUBLE_EQ(r.lambda_exponent, 4.0);
}

TEST(Threshold, ZeroEstimateIsExcluded) {
    const auto r = sidon::threshold_experiment(2, 1, {1.0, 20.0}, {10000}, 200, 3);
    ASSERT_EQ(r.fits.size(), 2u);
    EXPECT_FALSE(r.fits[0].excluded);
    EXPECT_TRUE(r.fits[1].excluded);
    EXPECT_TRUE(std::isinf(r.records[1].lambda_hat()));
    EXPECT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.kappa_min(), r.kappa_max());
}

TEST(Threshold, ConjectureProbeLabelsBothReadings) {
    const auto r = sidon::threshold_experiment(2, 2, {1.0}, {1000}, 200, 3);
    ASSERT_EQ(r.records.size(), 2u);
    EXPECT_EQ(r.records[0].quantity, "B_h[g]");
    EXPECT_EQ(r.records[1].quantity, "B_h");
    EXPECT_TRUE(r.conjecture_probe);
    EXPECT_DOUBLE_EQ(r.lambda_exponent, 3.0);  // (gh + h) / g
    EXPECT_GE(r.records[0].estimate.successes, r.records[1].estimate.successes);
}

TEST(Threshold, LambdaMonotoneInScale) {
    const auto r = sidon::threshold_experiment(2, 1, {0.5, 1.0, 1.5}, {100000}, 4000, 11);
    ASSERT_EQ(r.fits.size(), 3u);
    EXPECT_LT(r.fits[0].lambda_hat, r.fits[1].lambda_hat);
    EXPECT_LT(r.fits[1].lambda_hat, r.fits[2].lambda_hat);
}
