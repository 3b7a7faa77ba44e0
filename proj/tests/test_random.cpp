#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "fearsim/random.hpp"

using namespace fearsim;

TEST(Random, ReproducibleByteIdentical) {
    auto a = make_stream(42, Stream::infection_count, 7);
    auto b = make_stream(42, Stream::infection_count, 7);
    for (int i = 0; i < 10000; ++i) ASSERT_EQ(a(), b());
}

TEST(Random, DistinctStreamsDiffer) {
    auto a = make_stream(42, Stream::infection_count, 7);
    auto b = make_stream(42, Stream::infection_count, 8);
    auto c = make_stream(42, Stream::infection_assign, 7);
    auto d = make_stream(43, Stream::infection_count, 7);
    EXPECT_NE(a(), b());
    EXPECT_NE(a(), c());
    EXPECT_NE(a(), d());
}

// Pairwise correlation between purpose-distinct streams stays below 1%.
TEST(Random, StreamIndependenceCorrelation) {
    const int n = 100000;
    auto a = make_stream(2024, Stream::infection_count, 3);
    auto b = make_stream(2024, Stream::test_selection, 3);
    double sum_x = 0, sum_y = 0, sum_xy = 0, sum_x2 = 0, sum_y2 = 0;
    for (int i = 0; i < n; ++i) {
        const double x = uniform01(a);
        const double y = uniform01(b);
        sum_x += x;
        sum_y += y;
        sum_xy += x * y;
        sum_x2 += x * x;
        sum_y2 += y * y;
    }
    const double cov = sum_xy / n - (sum_x / n) * (sum_y / n);
    const double vx = sum_x2 / n - (sum_x / n) * (sum_x / n);
    const double vy = sum_y2 / n - (sum_y / n) * (sum_y / n);
    const double r = cov / std::sqrt(vx * vy);
    EXPECT_LT(std::abs(r), 0.01);
}

TEST(Bernoulli, Degenerate) {
    auto rng = make_stream(1, Stream::test_outcome, 0);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_FALSE(bernoulli(rng, 0.0));
        EXPECT_TRUE(bernoulli(rng, 1.0));
    }
    EXPECT_THROW(bernoulli(rng, -0.1), std::invalid_argument);
    EXPECT_THROW(bernoulli(rng, 1.1), std::invalid_argument);
}

// 3-sigma binomial bound: sqrt(p(1-p)/n) with p = 0.3, n = 1e6.
TEST(Bernoulli, MeanWithinCltBound) {
    auto rng = make_stream(7, Stream::test_outcome, 1);
    const int n = 1000000;
    std::int64_t hits = 0;
    for (int i = 0; i < n; ++i) hits += bernoulli(rng, 0.3);
    const double mean = static_cast<double>(hits) / n;
    EXPECT_NEAR(mean, 0.3, 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST(Binomial, Degenerate) {
    auto rng = make_stream(1, Stream::infection_count, 0);
    EXPECT_EQ(binomial(rng, 0, 0.5), 0);
    EXPECT_EQ(binomial(rng, 10, 0.0), 0);
    EXPECT_EQ(binomial(rng, 10, 1.0), 10);
    EXPECT_THROW(binomial(rng, -1, 0.5), std::invalid_argument);
    EXPECT_THROW(binomial(rng, 10, 1.5), std::invalid_argument);
}

// CLT bound 3*sqrt(np(1-p)/draws) with n = 5e4, p = 5.5e-4: mean 27.5 +- 0.16.
TEST(Binomial, SampleMeanMatchesExpectation) {
    auto rng = make_stream(11, Stream::infection_count, 2);
    const int draws = 10000;
    const std::int64_t n = 50000;
    const double p = 5.5e-4;
    double sum = 0;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(binomial(rng, n, p));
    const double mean = sum / draws;
    const double bound = 3.0 * std::sqrt(static_cast<double>(n) * p * (1 - p) / draws);
    EXPECT_NEAR(mean, 27.5, bound);
}

// The chunked path (large n * |log(1-p)|) must agree with moments too.
TEST(Binomial, LargeCountMoments) {
    auto rng = make_stream(13, Stream::infection_count, 3);
    const int draws = 4000;
    const std::int64_t n = 1000000;
    const double p = 0.018;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
        const double x = static_cast<double>(binomial(rng, n, p));
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / draws;
    const double expected = static_cast<double>(n) * p;
    const double var_expected = expected * (1 - p);
    EXPECT_NEAR(mean, expected, 4.0 * std::sqrt(var_expected / draws));
    const double var = sum2 / draws - mean * mean;
    EXPECT_NEAR(var / var_expected, 1.0, 0.15);
}

TEST(Binomial, SymmetryBranch) {
    auto rng = make_stream(17, Stream::infection_count, 4);
    const int draws = 20000;
    double sum = 0;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(binomial(rng, 100, 0.85));
    EXPECT_NEAR(sum / draws, 85.0, 4.0 * std::sqrt(100 * 0.85 * 0.15 / draws));
}

// Bin-wise agreement with the exact pmf (4-sigma binomial bound per bin).
TEST(Binomial, ExactPmfSmallN) {
    auto rng = make_stream(53, Stream::infection_count, 5);
    const int draws = 200000;
    const std::int64_t n = 10;
    const double p = 0.3;
    std::vector<std::int64_t> hist(n + 1, 0);
    for (int i = 0; i < draws; ++i) hist[static_cast<std::size_t>(binomial(rng, n, p))]++;
    double pmf = std::pow(1.0 - p, static_cast<double>(n));
    for (std::int64_t k = 0; k <= n; ++k) {
        const double freq = static_cast<double>(hist[static_cast<std::size_t>(k)]) / draws;
        const double tol = 4.0 * std::sqrt(pmf * (1.0 - pmf) / draws) + 1e-9;
        EXPECT_NEAR(freq, pmf, tol) << "k=" << k;
        pmf *= (p / (1.0 - p)) * static_cast<double>(n - k) / static_cast<double>(k + 1);
    }
}

TEST(Poisson, DegenerateAndErrors) {
    auto rng = make_stream(1, Stream::disease_schedule, 0);
    EXPECT_EQ(poisson(rng, 0.0), 0);
    EXPECT_EQ(shifted_poisson(rng, 0.0), 1); // Poisson(0) + 1
    EXPECT_THROW(poisson(rng, -1.0), std::invalid_argument);
}

// Poisson dispersion: variance/mean within [0.97, 1.03] on 1e5 draws.
TEST(Poisson, DispersionNearOne) {
    auto rng = make_stream(19, Stream::disease_schedule, 1);
    const int draws = 100000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
        const double x = static_cast<double>(poisson(rng, 5.0));
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / draws;
    const double var = sum2 / draws - mean * mean;
    EXPECT_GT(var / mean, 0.97);
    EXPECT_LT(var / mean, 1.03);
}

// Shifted Poisson mean: E = (p-1) + 1 = 3 when called with p-1 = 2.
TEST(Poisson, ShiftedMean) {
    auto rng = make_stream(23, Stream::disease_schedule, 2);
    const int draws = 100000;
    double sum = 0;
    std::int64_t min_seen = 1 << 30;
    for (int i = 0; i < draws; ++i) {
        const std::int64_t x = shifted_poisson(rng, 2.0);
        sum += static_cast<double>(x);
        min_seen = std::min(min_seen, x);
    }
    EXPECT_GE(min_seen, 1);
    EXPECT_NEAR(sum / draws, 3.0, 0.02);
}

// Large-mean chunked path.
TEST(Poisson, LargeMeanMoments) {
    auto rng = make_stream(29, Stream::disease_schedule, 3);
    const int draws = 50000;
    double sum = 0, sum2 = 0;
    for (int i = 0; i < draws; ++i) {
        const double x = static_cast<double>(poisson(rng, 250.0));
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / draws;
    EXPECT_NEAR(mean, 250.0, 3.0 * std::sqrt(250.0 / draws));
    EXPECT_NEAR((sum2 / draws - mean * mean) / 250.0, 1.0, 0.05);
}

// Bin-wise agreement with the exact Poisson pmf at a disease-lag mean.
TEST(Poisson, ExactPmfAtLagMean) {
    auto rng = make_stream(59, Stream::disease_schedule, 6);
    const int draws = 200000;
    const double lambda = 3.0;
    std::vector<std::int64_t> hist(20, 0);
    for (int i = 0; i < draws; ++i) {
        const auto k = poisson(rng, lambda);
        if (k < 20) hist[static_cast<std::size_t>(k)]++;
    }
    double pmf = std::exp(-lambda);
    for (std::size_t k = 0; k < 12; ++k) {
        const double freq = static_cast<double>(hist[k]) / draws;
        EXPECT_NEAR(freq, pmf, 4.0 * std::sqrt(pmf * (1.0 - pmf) / draws) + 1e-9) << "k=" << k;
        pmf *= lambda / static_cast<double>(k + 1);
    }
}

// First geometric bins match (1-p)^(k-1) * p.
TEST(Geometric, ExactPmfHead) {
    auto rng = make_stream(61, Stream::disease_schedule, 7);
    const int draws = 200000;
    const double p = 1.0 / 14.0;
    std::vector<std::int64_t> hist(40, 0);
    for (int i = 0; i < draws; ++i) {
        const auto k = geometric(rng, p);
        if (k < 40) hist[static_cast<std::size_t>(k)]++;
    }
    for (std::size_t k = 1; k <= 20; ++k) {
        const double pmf = std::pow(1.0 - p, static_cast<double>(k - 1)) * p;
        const double freq = static_cast<double>(hist[k]) / draws;
        EXPECT_NEAR(freq, pmf, 4.0 * std::sqrt(pmf * (1.0 - pmf) / draws)) << "k=" << k;
    }
}

TEST(Geometric, MeanAndSupport) {
    auto rng = make_stream(31, Stream::disease_schedule, 4);
    EXPECT_EQ(geometric(rng, 1.0), 1);
    const double p = 1.0 / 14.0;
    const int draws = 100000;
    double sum = 0;
    std::int64_t min_seen = 1 << 30;
    for (int i = 0; i < draws; ++i) {
        const std::int64_t x = geometric(rng, p);
        sum += static_cast<double>(x);
        min_seen = std::min(min_seen, x);
    }
    EXPECT_GE(min_seen, 1);
    // E = 1/p = 14, sd = sqrt(1-p)/p ~ 13.5
    EXPECT_NEAR(sum / draws, 14.0, 3.0 * 13.5 / std::sqrt(static_cast<double>(draws)));
}

TEST(RoundedNormal, RoundsAndClamps) {
    auto rng = make_stream(1, Stream::confounding_count, 0);
    EXPECT_EQ(rounded_normal(rng, 28.6, 0.0), 29);
    for (int i = 0; i < 100000; ++i) EXPECT_GE(rounded_normal(rng, 0.0, 1.0), 0);
}

// CLT on the confounding draw: mean 28.571 = 0.20 * 5e4 / 350, sd = 2.857.
// The clamp at zero is a ~10 sigma event and does not move the mean.
TEST(RoundedNormal, ConfoundingCalibrationMean) {
    auto rng = make_stream(37, Stream::confounding_count, 1);
    const double mean = 0.20 * 50000.0 / 350.0;
    const double sd = 0.10 * mean;
    const int draws = 100000;
    double sum = 0;
    for (int i = 0; i < draws; ++i) sum += static_cast<double>(rounded_normal(rng, mean, sd));
    EXPECT_NEAR(sum / draws, mean, 0.03);
}

TEST(SampleWithoutReplacement, Degenerate) {
    auto rng = make_stream(1, Stream::test_selection, 0);
    EXPECT_TRUE(sample_without_replacement(rng, 5, 0).empty());
    auto all = sample_without_replacement(rng, 5, 5);
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, (std::vector<std::int64_t>{0, 1, 2, 3, 4}));
    EXPECT_THROW(sample_without_replacement(rng, 3, 4), std::invalid_argument);
}

// Hypergeometric marginal: each of 5 elements picked with frequency 2/5.
TEST(SampleWithoutReplacement, UniformMarginal) {
    auto rng = make_stream(41, Stream::test_selection, 1);
    const int draws = 100000;
    std::map<std::int64_t, int> freq;
    for (int i = 0; i < draws; ++i) {
        for (const auto id : sample_without_replacement(rng, 5, 2)) freq[id]++;
        ASSERT_EQ(sample_without_replacement(rng, 5, 2).size(), 2u);
    }
    for (const auto& [id, count] : freq)
        EXPECT_NEAR(static_cast<double>(count) / draws, 0.4, 0.005) << "element " << id;
}
