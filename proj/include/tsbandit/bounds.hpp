#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "tsbandit/env.hpp"
#include "tsbandit/numerics.hpp"

namespace tsb {

// Constant multiplying the three-term decay expression
// exp(-dp^2 j/2) + exp(-D j)/((j+1) dp^2) + 1/(exp(dp^2 j/4)-1)
// in the large-j tail of the posterior-inverse expectation. Measured by the
// verification suite's envelope study over mu_1 in {0.3..0.9 step 0.1},
// delta' in {0.05, 0.1, 0.2}, log-spaced j up to 10^4: max ratio
// 0.047965834607256 at (mu_1=0.5, delta'=0.05, j=160), identical with the
// grid extended to 10^5, then rounded up. The suite re-measures on every run
// and fails if this value stops covering the grid.
inline constexpr double kThetaEnvelopeConstant = 0.05;

struct ArmBoundTerms {
    std::size_t arm = 0;
    double leading = 0.0;   // coefficient of ln T, already multiplied by it
    double additive = 0.0;  // horizon-independent remainder
};

struct BoundReport {
    std::string bound_name;
    std::int64_t horizon = 0;
    std::vector<ArmBoundTerms> per_arm;  // suboptimal arms only
    double total = 0.0;
    std::vector<std::string> caveats;
};

namespace detail {

inline void require_bound_instance(const BanditInstance& inst,
                                   std::int64_t horizon, const char* who) {
    if (!inst.unique_optimal)
        throw std::domain_error(std::string(who) +
                                ": instance must have a unique optimal arm");
    if (horizon < 2)
        throw std::domain_error(std::string(who) + ": horizon must be >= 2");
}

inline double theta_three_term(double dp, double big_d, double j) {
    const double e1 = std::exp(-0.5 * dp * dp * j);
    const double e2 = std::exp(-big_d * j) / ((j + 1.0) * dp * dp);
    const double e3 = 1.0 / std::expm1(0.25 * dp * dp * j);
    return e1 + e2 + e3;
}

}  // namespace detail

// Problem-dependent upper bound. Leading term is
// (1+eps)^2 ln T sum_i gap_i / d(mu_i, mu_1); the additive term assembles the
// per-arm constants from the play-count decomposition: the small-j block
// (3/delta' for each j < ceil(8/delta')), the measured-constant envelope over
// the three-term decay for larger j, one play for the empirical-mean event,
// 1/d(x, mu_i) for its expected recurrence, and one play for the sample event.
inline BoundReport thm1_bound(const BanditInstance& inst, double eps,
                              std::int64_t horizon,
                              double theta_constant = kThetaEnvelopeConstant) {
    detail::require_bound_instance(inst, horizon, "thm1_bound");
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::domain_error("thm1_bound: eps must lie in (0,1]");
    if (!(theta_constant > 0.0))
        throw std::domain_error("thm1_bound: theta_constant must be positive");
    BoundReport report;
    report.bound_name = "thm1";
    report.horizon = horizon;
    const double log_t = std::log(static_cast<double>(horizon));
    const double mu_1 = inst.means[inst.optimal_index];
    const double lead_coeff = (1.0 + eps) * (1.0 + eps);
    for (std::size_t i = 0; i < inst.num_arms(); ++i) {
        if (i == inst.optimal_index) continue;
        const double gap = inst.gaps[i];
        const ThresholdPair th = kl_thresholds(inst.means[i], mu_1, eps);
        const double dp = th.delta_prime;
        const double d1 = kl_bernoulli(inst.means[i], mu_1);
        const std::int64_t j_cut = static_cast<std::int64_t>(
            std::min(std::ceil(8.0 / dp), static_cast<double>(horizon)));
        double plays = static_cast<double>(j_cut) * (3.0 / dp);
        double tail = 0.0;
        for (std::int64_t j = j_cut; j < horizon; ++j) {
            const double term = detail::theta_three_term(
                dp, th.big_d, static_cast<double>(j));
            tail += term;
            if (term < 1e-16) break;
        }
        plays += theta_constant * tail + 2.0 + 1.0 / th.d_x_mu;
        ArmBoundTerms terms;
        terms.arm = i;
        terms.leading = gap * lead_coeff * log_t / d1;
        terms.additive = gap * plays;
        report.per_arm.push_back(terms);
        report.total += terms.leading + terms.additive;
    }
    report.caveats.push_back(
        "theta-envelope constant " + std::to_string(theta_constant) +
        " is measured, not derived; the verification suite re-measures it");
    report.caveats.push_back(
        "leading coefficient (1+eps)^2 comes from the play-count "
        "decomposition; the stated (1+eps') form follows with eps' = 3 eps "
        "since (1+eps)^2 <= 1+3 eps on (0,1]");
    report.caveats.push_back(
        "small-j block is the literal sum of 3/delta' over j < ceil(8/delta'), "
        "whose closed-form aggregate is 24/delta'^2");
    return report;
}

// Problem-independent bound c sqrt(N T ln T); c is a measured constant, not a
// derived one.
inline double thm2_bound(std::int64_t num_arms, std::int64_t horizon,
                         double c) {
    if (num_arms < 2)
        throw std::domain_error("thm2_bound: need at least two arms");
    if (horizon < 2) throw std::domain_error("thm2_bound: horizon must be >= 2");
    if (!(c > 0.0)) throw std::domain_error("thm2_bound: c must be positive");
    const double n = static_cast<double>(num_arms);
    const double t = static_cast<double>(horizon);
    return c * std::sqrt(n * t * std::log(t));
}

// Asymptotic lower bound ln T sum_i gap_i / d(mu_i, mu_1); the o(1)
// correction is dropped.
inline BoundReport lai_robbins_lower(const BanditInstance& inst,
                                     std::int64_t horizon) {
    detail::require_bound_instance(inst, horizon, "lai_robbins_lower");
    BoundReport report;
    report.bound_name = "lai_robbins";
    report.horizon = horizon;
    const double log_t = std::log(static_cast<double>(horizon));
    const double mu_1 = inst.means[inst.optimal_index];
    for (std::size_t i = 0; i < inst.num_arms(); ++i) {
        if (i == inst.optimal_index) continue;
        const double d1 = kl_bernoulli(inst.means[i], mu_1);
        ArmBoundTerms terms;
        terms.arm = i;
        terms.leading = std::isinf(d1) ? 0.0 : inst.gaps[i] * log_t / d1;
        terms.additive = 0.0;
        report.per_arm.push_back(terms);
        report.total += terms.leading;
    }
    report.caveats.push_back(
        "asymptotic consistency lower bound; the o(1) term is dropped");
    return report;
}

// Classical UCB1 upper bound: 8 ln T sum_i 1/gap_i + (1+pi^2/3) sum_i gap_i.
inline BoundReport ucb1_upper(const BanditInstance& inst,
                              std::int64_t horizon) {
    detail::require_bound_instance(inst, horizon, "ucb1_upper");
    BoundReport report;
    report.bound_name = "ucb1";
    report.horizon = horizon;
    const double log_t = std::log(static_cast<double>(horizon));
    constexpr double kPi = 3.14159265358979323846;
    for (std::size_t i = 0; i < inst.num_arms(); ++i) {
        if (i == inst.optimal_index) continue;
        ArmBoundTerms terms;
        terms.arm = i;
        terms.leading = 8.0 * log_t / inst.gaps[i];
        terms.additive = (1.0 + kPi * kPi / 3.0) * inst.gaps[i];
        report.per_arm.push_back(terms);
        report.total += terms.leading + terms.additive;
    }
    return report;
}

// Gap-independent thresholds x = mu_i + gap/3, y = mu_1 - gap/3. Pinsker
// gives d(x,y), d(x,mu_i), d(y,mu_1) >= gap^2/18 (factor 1/2, deviation
// gap/3).
inline ThresholdPair thm2_thresholds(double mu_i, double mu_1) {
    if (!(mu_i >= 0.0 && mu_1 <= 1.0 && mu_i < mu_1))
        throw std::domain_error("thm2_thresholds: need 0 <= mu_i < mu_1 <= 1");
    const double gap = mu_1 - mu_i;
    ThresholdPair t;
    t.x = mu_i + gap / 3.0;
    t.y = mu_1 - gap / 3.0;
    t.delta_prime = mu_1 - t.y;
    t.big_d = kl_bernoulli(t.y, mu_1);
    t.d_xy = kl_bernoulli(t.x, t.y);
    t.d_x_mu = kl_bernoulli(t.x, mu_i);
    return t;
}

// Gap at which the problem-dependent bound crosses over to the
// problem-independent one: sqrt(N ln T / T).
inline double worst_case_gap(std::int64_t num_arms, std::int64_t horizon) {
    if (num_arms < 1)
        throw std::domain_error("worst_case_gap: need at least one arm");
    if (horizon < 2)
        throw std::domain_error("worst_case_gap: horizon must be >= 2");
    const double n = static_cast<double>(num_arms);
    const double t = static_cast<double>(horizon);
    return std::sqrt(n * std::log(t) / t);
}

}  // namespace tsb
