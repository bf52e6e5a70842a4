#include "tsbandit/bounds.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <string>
#include <vector>

#include "tsbandit/env.hpp"

namespace {

using tsb::BanditInstance;
using tsb::BoundReport;

BanditInstance bernoulli_instance(const std::vector<double>& means) {
    std::vector<tsb::ArmSpec> specs;
    specs.reserve(means.size());
    for (double m : means) specs.push_back(tsb::ArmSpec::bernoulli(m));
    return tsb::make_instance(std::move(specs));
}

BanditInstance two_arm() { return bernoulli_instance({0.5, 0.45}); }

bool any_caveat_contains(const BoundReport& r, const std::string& needle) {
    for (const auto& c : r.caveats)
        if (c.find(needle) != std::string::npos) return true;
    return false;
}

TEST(Thm1, LeadingTermFrozen) {
    const auto r = tsb::thm1_bound(two_arm(), 0.2, 100000);
    ASSERT_EQ(r.per_arm.size(), 1u);
    EXPECT_EQ(r.per_arm[0].arm, 1u);
    EXPECT_NEAR(r.per_arm[0].leading, 165.50916873847475, 2e-10);
}

TEST(Thm1, AdditiveTermFrozenAtUnitConstant) {
    const auto r = tsb::thm1_bound(two_arm(), 0.2, 100000, 1.0);
    ASSERT_EQ(r.per_arm.size(), 1u);
    EXPECT_NEAR(r.per_arm[0].additive, 134231.38488165276,
                134231.0 * 1e-9);
    EXPECT_NEAR(r.total, r.per_arm[0].leading + r.per_arm[0].additive, 1e-9);
}

TEST(Thm1, ThreeArmFrozenAtUnitConstant) {
    const auto inst = bernoulli_instance({0.8, 0.6, 0.3});
    const auto r = tsb::thm1_bound(inst, 0.1, 10000, 1.0);
    ASSERT_EQ(r.per_arm.size(), 2u);
    EXPECT_EQ(r.per_arm[0].arm, 1u);
    EXPECT_EQ(r.per_arm[1].arm, 2u);
    EXPECT_NEAR(r.per_arm[0].leading, 21.298712633572206, 1e-10);
    EXPECT_NEAR(r.per_arm[1].leading, 9.5630624378304403, 1e-10);
    EXPECT_NEAR(r.per_arm[0].additive, 122238.41903260742, 122238.0 * 1e-9);
    EXPECT_NEAR(r.per_arm[1].additive, 64420.441185711372, 64420.0 * 1e-9);
    double sum = 0.0;
    for (const auto& t : r.per_arm) sum += t.leading + t.additive;
    EXPECT_NEAR(r.total, sum, 1e-9);
}

TEST(Thm1, LeadingIsScaledLowerBound) {
    for (const double eps : {0.05, 0.2, 0.7, 1.0}) {
        const auto upper = tsb::thm1_bound(two_arm(), eps, 100000, 1.0);
        const auto lower = tsb::lai_robbins_lower(two_arm(), 100000);
        const double scale = (1.0 + eps) * (1.0 + eps);
        EXPECT_NEAR(upper.per_arm[0].leading, scale * lower.total,
                    1e-10 * lower.total)
            << eps;
    }
}

TEST(Thm1, LeadingDoublesWhenHorizonSquares) {
    const auto a = tsb::thm1_bound(two_arm(), 0.2, 1000, 1.0);
    const auto b = tsb::thm1_bound(two_arm(), 0.2, 1000000, 1.0);
    EXPECT_NEAR(b.per_arm[0].leading, 2.0 * a.per_arm[0].leading, 1e-10);
}

TEST(Thm1, AdditiveMonotoneInThetaConstant) {
    const auto lo = tsb::thm1_bound(two_arm(), 0.2, 100000, 1.0);
    const auto hi = tsb::thm1_bound(two_arm(), 0.2, 100000, 2.0);
    EXPECT_GT(hi.per_arm[0].additive, lo.per_arm[0].additive);
    EXPECT_EQ(hi.per_arm[0].leading, lo.per_arm[0].leading);
}

TEST(Thm1, CaveatsRecorded) {
    const auto r = tsb::thm1_bound(two_arm(), 0.2, 100000);
    EXPECT_EQ(r.caveats.size(), 3u);
    EXPECT_TRUE(any_caveat_contains(r, "measured"));
    EXPECT_TRUE(any_caveat_contains(r, "eps' = 3 eps"));
    EXPECT_TRUE(any_caveat_contains(r, "24/delta'^2"));
}

TEST(Thm1, DomainErrors) {
    EXPECT_THROW(tsb::thm1_bound(two_arm(), 0.0, 100), std::domain_error);
    EXPECT_THROW(tsb::thm1_bound(two_arm(), 1.5, 100), std::domain_error);
    EXPECT_THROW(tsb::thm1_bound(two_arm(), 0.2, 1), std::domain_error);
    EXPECT_THROW(tsb::thm1_bound(two_arm(), 0.2, 100, 0.0),
                 std::domain_error);
    const auto tied = bernoulli_instance({0.5, 0.5});
    EXPECT_THROW(tsb::thm1_bound(tied, 0.2, 100), std::domain_error);
}

TEST(Thm2, FrozenValueAndScaling) {
    EXPECT_NEAR(tsb::thm2_bound(10, 10000, 1.0), 959.7051824376162, 1e-9);
    EXPECT_NEAR(tsb::thm2_bound(10, 10000, 2.5),
                2.5 * tsb::thm2_bound(10, 10000, 1.0), 1e-9);
    EXPECT_THROW(tsb::thm2_bound(1, 10000, 1.0), std::domain_error);
    EXPECT_THROW(tsb::thm2_bound(10, 1, 1.0), std::domain_error);
    EXPECT_THROW(tsb::thm2_bound(10, 10000, 0.0), std::domain_error);
}

TEST(LaiRobbins, FrozenValueAndCaveat) {
    const auto r = tsb::lai_robbins_lower(two_arm(), 100000);
    EXPECT_NEAR(r.total, 114.93692273505191, 2e-10);
    ASSERT_EQ(r.per_arm.size(), 1u);
    EXPECT_EQ(r.per_arm[0].additive, 0.0);
    EXPECT_TRUE(any_caveat_contains(r, "o(1)"));
    const auto r2 = tsb::lai_robbins_lower(two_arm(), 1000000);
    EXPECT_GT(r2.total, r.total);
}

TEST(LaiRobbins, DegenerateKlGivesZeroCoefficient) {
    const auto inst = bernoulli_instance({1.0, 0.0});
    const auto r = tsb::lai_robbins_lower(inst, 1000);
    EXPECT_EQ(r.total, 0.0);
}

TEST(Ucb1, FrozenValue) {
    const auto r = tsb::ucb1_upper(two_arm(), 100000);
    ASSERT_EQ(r.per_arm.size(), 1u);
    const double log_t = std::log(100000.0);
    EXPECT_NEAR(r.per_arm[0].leading, 8.0 * log_t / 0.05, 1e-9);
    EXPECT_NEAR(r.total, 1842.2825678019214, 2e-9);
}

TEST(BoundOrdering, LowerBelowUpperBelowUcb) {
    const auto lower = tsb::lai_robbins_lower(two_arm(), 100000);
    const auto thm1 = tsb::thm1_bound(two_arm(), 0.2, 100000, 1.0);
    const auto ucb = tsb::ucb1_upper(two_arm(), 100000);
    EXPECT_LE(lower.total, thm1.per_arm[0].leading);
    EXPECT_LE(thm1.per_arm[0].leading, ucb.total);
}

TEST(Thm2Thresholds, FrozenKlValues) {
    const auto t = tsb::thm2_thresholds(0.3, 0.6);
    EXPECT_NEAR(t.x, 0.4, 1e-15);
    EXPECT_NEAR(t.y, 0.5, 1e-15);
    EXPECT_NEAR(t.delta_prime, 0.1, 1e-15);
    EXPECT_NEAR(t.big_d, 0.020410997260127565, 1e-15);
    EXPECT_NEAR(t.d_xy, 0.020135513550688873, 1e-15);
    EXPECT_NEAR(t.d_x_mu, 0.022582421084357388, 1e-15);
}

TEST(Thm2Thresholds, PinskerFloorOnGrid) {
    for (double mu_i = 0.05; mu_i < 0.9; mu_i += 0.1) {
        for (double mu_1 = mu_i + 0.05; mu_1 <= 0.95; mu_1 += 0.1) {
            const auto t = tsb::thm2_thresholds(mu_i, mu_1);
            const double gap = mu_1 - mu_i;
            const double floor = gap * gap / 18.0;
            EXPECT_LT(mu_i, t.x);
            EXPECT_LT(t.x, t.y);
            EXPECT_LT(t.y, mu_1);
            EXPECT_GE(t.d_xy, floor);
            EXPECT_GE(t.d_x_mu, floor);
            EXPECT_GE(t.big_d, floor);
        }
    }
    EXPECT_THROW(tsb::thm2_thresholds(0.6, 0.3), std::domain_error);
    EXPECT_THROW(tsb::thm2_thresholds(0.5, 0.5), std::domain_error);
}

TEST(WorstCaseGap, FrozenValueAndMonotone) {
    EXPECT_NEAR(tsb::worst_case_gap(10, 100000), 0.03393070212207556, 1e-15);
    EXPECT_LT(tsb::worst_case_gap(10, 100000), tsb::worst_case_gap(10, 10000));
    EXPECT_LT(tsb::worst_case_gap(5, 100000), tsb::worst_case_gap(10, 100000));
    EXPECT_THROW(tsb::worst_case_gap(0, 100), std::domain_error);
    EXPECT_THROW(tsb::worst_case_gap(10, 1), std::domain_error);
}

TEST(WorstCaseGap, MatchesBoundCrossoverScale) {
    // at gap = sqrt(N ln T / T) the problem-dependent leading term
    // gap * ln T / d(mu-gap, mu) ~ T gap / N matches sqrt(N T ln T) / N
    const std::int64_t n = 10, t = 100000;
    const double gap = tsb::worst_case_gap(n, t);
    const double dependent =
        double(n) * gap * std::log(double(t)) /
        tsb::kl_bernoulli(0.5 - gap, 0.5);
    const double independent = tsb::thm2_bound(n, t, 1.0);
    EXPECT_GT(dependent / independent, 0.3);
    EXPECT_LT(dependent / independent, 3.0);
}

}  // namespace
