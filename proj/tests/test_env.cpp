#include "tsbandit/env.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "tsbandit/numerics.hpp"

namespace {

using tsb::ArmSpec;
using tsb::BanditInstance;
using tsb::make_instance;

TEST(ArmSpec, BernoulliBasics) {
    const ArmSpec a = ArmSpec::bernoulli(0.45);
    EXPECT_EQ(a.mean(), 0.45);
    EXPECT_THROW(ArmSpec::bernoulli(-0.01), std::domain_error);
    EXPECT_THROW(ArmSpec::bernoulli(1.01), std::domain_error);
}

TEST(ArmSpec, DiscreteMeanAndValidation) {
    const ArmSpec a = ArmSpec::discrete({0.0, 0.5, 1.0}, {0.25, 0.5, 0.25});
    EXPECT_NEAR(a.mean(), 0.5, 1e-15);
    EXPECT_THROW(ArmSpec::discrete({}, {}), std::domain_error);
    EXPECT_THROW(ArmSpec::discrete({0.5}, {0.5, 0.5}), std::domain_error);
    EXPECT_THROW(ArmSpec::discrete({1.5}, {1.0}), std::domain_error);
    EXPECT_THROW(ArmSpec::discrete({0.5, 0.6}, {0.7, 0.2}),
                 std::domain_error);
    EXPECT_THROW(ArmSpec::discrete({0.5, 0.6}, {1.2, -0.2}),
                 std::domain_error);
}

TEST(MakeInstance, MeansGapsOptimal) {
    const BanditInstance inst = make_instance(
        {ArmSpec::bernoulli(0.5), ArmSpec::bernoulli(0.45),
         ArmSpec::bernoulli(0.2)});
    EXPECT_EQ(inst.num_arms(), 3u);
    EXPECT_EQ(inst.optimal_index, 0u);
    EXPECT_TRUE(inst.unique_optimal);
    EXPECT_EQ(inst.gaps[0], 0.0);
    EXPECT_NEAR(inst.gaps[1], 0.05, 1e-15);
    EXPECT_NEAR(inst.gaps[2], 0.3, 1e-15);
}

TEST(MakeInstance, TieBreaksLowestAndFlagsNonUnique) {
    const BanditInstance inst =
        make_instance({ArmSpec::bernoulli(0.4), ArmSpec::bernoulli(0.4)});
    EXPECT_EQ(inst.optimal_index, 0u);
    EXPECT_FALSE(inst.unique_optimal);
}

TEST(MakeInstance, SingleArmAllowed) {
    const BanditInstance inst = make_instance({ArmSpec::bernoulli(0.7)});
    EXPECT_EQ(inst.num_arms(), 1u);
    EXPECT_TRUE(inst.unique_optimal);
    EXPECT_EQ(inst.gaps[0], 0.0);
    EXPECT_THROW(make_instance({}), std::domain_error);
}

TEST(Pull, DegenerateArms) {
    const BanditInstance inst = make_instance(
        {ArmSpec::bernoulli(1.0), ArmSpec::bernoulli(0.0),
         ArmSpec::discrete({0.2}, {1.0})});
    tsb::RandomStream s = tsb::derive_stream({11, 0, "pull"});
    for (int i = 0; i < 200; ++i) {
        EXPECT_EQ(tsb::pull(inst, 0, s), 1.0);
        EXPECT_EQ(tsb::pull(inst, 1, s), 0.0);
        EXPECT_EQ(tsb::pull(inst, 2, s), 0.2);
    }
    EXPECT_THROW(tsb::pull(inst, 3, s), std::out_of_range);
}

TEST(Pull, BernoulliFrequency) {
    const BanditInstance inst = make_instance(
        {ArmSpec::bernoulli(0.45), ArmSpec::bernoulli(0.5)});
    tsb::RandomStream s = tsb::derive_stream({12, 0, "pull-freq"});
    const int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += tsb::pull(inst, 0, s);
    EXPECT_NEAR(sum / n, 0.45, 0.002);
}

TEST(Pull, DiscreteSupportAndFrequency) {
    const BanditInstance inst = make_instance(
        {ArmSpec::discrete({0.2, 0.8}, {0.5, 0.5}), ArmSpec::bernoulli(0.5)});
    tsb::RandomStream s = tsb::derive_stream({13, 0, "pull-disc"});
    const int n = 400'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = tsb::pull(inst, 0, s);
        ASSERT_TRUE(r == 0.2 || r == 0.8);
        sum += r;
    }
    EXPECT_NEAR(sum / n, 0.5, 0.003);
}

TEST(Pull, SuccessivePullsUncorrelated) {
    const BanditInstance inst = make_instance(
        {ArmSpec::bernoulli(0.5), ArmSpec::bernoulli(0.5)});
    tsb::RandomStream s = tsb::derive_stream({14, 0, "pull-corr"});
    const int n = 100'000;
    double sa = 0.0, sb = 0.0, sab = 0.0;
    for (int i = 0; i < n; ++i) {
        const double a = tsb::pull(inst, 0, s);
        const double b = tsb::pull(inst, 1, s);
        sa += a;
        sb += b;
        sab += a * b;
    }
    const double ma = sa / n, mb = sb / n;
    const double cov = sab / n - ma * mb;
    const double corr = cov / std::sqrt(ma * (1 - ma) * mb * (1 - mb));
    EXPECT_LT(std::abs(corr), 0.01);
}

TEST(Pull, EmpiricalTailUnderChernoff) {
    // Fact check on live pulls: Pr(sample mean >= mu + lambda) is below the
    // KL Chernoff bound (within Monte Carlo noise)
    const double mu = 0.5, lambda = 0.15;
    const BanditInstance inst = make_instance(
        {ArmSpec::bernoulli(mu), ArmSpec::bernoulli(0.1)});
    tsb::RandomStream s = tsb::derive_stream({15, 0, "pull-tail"});
    for (const int n : {10, 100}) {
        const int reps = 20'000;
        int exceed = 0;
        for (int r = 0; r < reps; ++r) {
            double sum = 0.0;
            for (int i = 0; i < n; ++i) sum += tsb::pull(inst, 0, s);
            if (sum / n >= mu + lambda) ++exceed;
        }
        const double freq = double(exceed) / reps;
        const double bound = tsb::chernoff_kl_bound(
            n, mu, lambda, tsb::TailDirection::upper);
        const double se = std::sqrt(bound * (1 - bound) / reps);
        EXPECT_LE(freq, bound + 4 * se) << "n=" << n;
    }
}

}  // namespace
