#include "tsbandit/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tsbandit/numerics.hpp"
#include "test_util.hpp"

namespace {

using tsb::RandomStream;
using tsb::StreamKey;
using tsb::derive_stream;

TEST(Rng, SameKeySameSequence) {
    RandomStream a = derive_stream({42, 7, "env"});
    RandomStream b = derive_stream({42, 7, "env"});
    for (int i = 0; i < 256; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, KeyComponentsSeparateStreams) {
    RandomStream base = derive_stream({42, 7, "env"});
    RandomStream other_seed = derive_stream({43, 7, "env"});
    RandomStream other_run = derive_stream({42, 8, "env"});
    RandomStream other_tag = derive_stream({42, 7, "policy"});
    int same_seed = 0, same_run = 0, same_tag = 0;
    for (int i = 0; i < 64; ++i) {
        const std::uint64_t v = base.next_u64();
        same_seed += v == other_seed.next_u64();
        same_run += v == other_run.next_u64();
        same_tag += v == other_tag.next_u64();
    }
    EXPECT_LT(same_seed, 2);
    EXPECT_LT(same_run, 2);
    EXPECT_LT(same_tag, 2);
}

TEST(Rng, UniformRangeAndMoments) {
    RandomStream s = derive_stream({1, 0, "uniform-test"});
    const int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        sum += u;
    }
    // SE of the mean is about 0.00029; 0.002 is a 7-sigma allowance
    EXPECT_NEAR(sum / n, 0.5, 0.002);
}

TEST(Rng, UniformKolmogorovSmirnov) {
    RandomStream s = derive_stream({2, 0, "uniform-ks"});
    const int n = 200'000;
    std::vector<double> samples(n);
    for (auto& v : samples) v = s.uniform();
    const double d = tsbtest::ks_statistic(std::move(samples),
                                           [](double x) { return x; });
    EXPECT_LT(d, tsbtest::kKsCritical1e3 / std::sqrt(double(n)));
}

TEST(Rng, BernoulliDegenerateAndFrequency) {
    RandomStream s = derive_stream({3, 0, "bern"});
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(s.bernoulli(0.0), 0);
        EXPECT_EQ(s.bernoulli(1.0), 1);
    }
    const int n = 1'000'000;
    long hits = 0;
    for (int i = 0; i < n; ++i) hits += s.bernoulli(0.3);
    // Hoeffding at confidence 1e-3: deviation below sqrt(ln(2000)/2n) < 0.002
    EXPECT_NEAR(double(hits) / n, 0.3, 0.002);
    EXPECT_THROW(s.bernoulli(-0.1), std::domain_error);
    EXPECT_THROW(s.bernoulli(1.1), std::domain_error);
}

TEST(Rng, BetaUniformSpecialCase) {
    RandomStream s = derive_stream({4, 0, "beta11"});
    const int n = 200'000;
    std::vector<double> samples(n);
    for (auto& v : samples) v = s.beta(1, 1);
    const double d = tsbtest::ks_statistic(std::move(samples),
                                           [](double x) { return x; });
    EXPECT_LT(d, tsbtest::kKsCritical1e3 / std::sqrt(double(n)));
}

TEST(Rng, BetaAgainstClosedFormCdf) {
    // Beta(2,1) has CDF y^2
    RandomStream s = derive_stream({5, 0, "beta21"});
    const int n = 200'000;
    std::vector<double> samples(n);
    for (auto& v : samples) v = s.beta(2, 1);
    const double d = tsbtest::ks_statistic(std::move(samples),
                                           [](double x) { return x * x; });
    EXPECT_LT(d, tsbtest::kKsCritical1e3 / std::sqrt(double(n)));
}

TEST(Rng, BetaMeanLargeShapes) {
    RandomStream s = derive_stream({6, 0, "beta3070"});
    const int n = 200'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += s.beta(30, 70);
    // sd of Beta(30,70) is 0.0456; SE of the mean is ~0.0001
    EXPECT_NEAR(sum / n, 0.3, 0.003);
}

TEST(Rng, BetaBothGammaPaths) {
    // Shapes straddling the small-shape cutoff: KS against the library CDF.
    RandomStream s = derive_stream({7, 0, "beta-paths"});
    for (const auto [a, b] :
         {std::pair<std::int64_t, std::int64_t>{3, 40},
          std::pair<std::int64_t, std::int64_t>{40, 3},
          std::pair<std::int64_t, std::int64_t>{40, 40}}) {
        const int n = 50'000;
        std::vector<double> samples(n);
        for (auto& v : samples) v = s.beta(a, b);
        const double d = tsbtest::ks_statistic(
            std::move(samples),
            [a = a, b = b](double x) { return tsb::beta_cdf(a, b, x); });
        EXPECT_LT(d, tsbtest::kKsCritical1e3 / std::sqrt(double(n)))
            << "a=" << a << " b=" << b;
    }
}

TEST(Rng, BetaRejectsBadShapes) {
    RandomStream s = derive_stream({8, 0, "beta-bad"});
    EXPECT_THROW(s.beta(0, 1), std::domain_error);
    EXPECT_THROW(s.beta(1, -2), std::domain_error);
}

TEST(Rng, GammaMomentsBothPaths) {
    RandomStream s = derive_stream({9, 0, "gamma"});
    for (const std::int64_t shape : {4, 64}) {
        const int n = 200'000;
        double sum = 0.0, sq = 0.0;
        for (int i = 0; i < n; ++i) {
            const double g = s.gamma_int(shape);
            sum += g;
            sq += g * g;
        }
        const double mean = sum / n;
        const double var = sq / n - mean * mean;
        const double k = static_cast<double>(shape);
        EXPECT_NEAR(mean, k, 6.0 * std::sqrt(k / n)) << "shape=" << shape;
        EXPECT_NEAR(var, k, 0.05 * k) << "shape=" << shape;
    }
}

TEST(Rng, NormalMoments) {
    RandomStream s = derive_stream({10, 0, "normal"});
    const int n = 400'000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sq / n, 1.0, 0.02);
}

}  // namespace
