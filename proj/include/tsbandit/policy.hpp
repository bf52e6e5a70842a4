#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tsbandit/numerics.hpp"
#include "tsbandit/rng.hpp"

namespace tsb {

// Beta(successes+1, failures+1) posterior for one arm.
struct ArmPosterior {
    std::int64_t successes = 0;
    std::int64_t failures = 0;

    std::int64_t plays() const { return successes + failures; }

    // Convention: an unplayed arm reports empirical mean 1, matching the
    // optimistic initialization the analysis assumes.
    double empirical_mean() const {
        const std::int64_t k = plays();
        if (k == 0) return 1.0;
        return static_cast<double>(successes) / static_cast<double>(k);
    }
};

struct TSState {
    std::vector<ArmPosterior> posteriors;
    std::int64_t step = 1;  // index of the next decision
};

inline TSState ts_init(std::size_t num_arms) {
    if (num_arms == 0)
        throw std::domain_error("ts_init: need at least one arm");
    TSState s;
    s.posteriors.resize(num_arms);
    return s;
}

struct TSSelection {
    std::size_t arm = 0;
    std::vector<double> theta;  // posterior draws, arm order
};

// Draws theta_i ~ Beta(S_i+1, F_i+1) for every arm and plays the argmax.
// Exact ties are broken uniformly at random (one extra stream draw).
inline TSSelection ts_select(const TSState& state, RandomStream& stream) {
    if (state.posteriors.empty())
        throw std::domain_error("ts_select: uninitialized state");
    TSSelection sel;
    sel.theta.reserve(state.posteriors.size());
    for (const auto& post : state.posteriors)
        sel.theta.push_back(stream.beta(post.successes + 1, post.failures + 1));
    std::size_t best = 0;
    for (std::size_t i = 1; i < sel.theta.size(); ++i)
        if (sel.theta[i] > sel.theta[best]) best = i;
    std::size_t tie_count = 0;
    for (double t : sel.theta)
        if (t == sel.theta[best]) ++tie_count;
    if (tie_count > 1) {
        std::size_t pick =
            static_cast<std::size_t>(stream.uniform() *
                                     static_cast<double>(tie_count));
        if (pick >= tie_count) pick = tie_count - 1;
        for (std::size_t i = 0; i < sel.theta.size(); ++i) {
            if (sel.theta[i] == sel.theta[best] && pick-- == 0) {
                best = i;
                break;
            }
        }
    }
    sel.arm = best;
    return sel;
}

inline void ts_update(TSState& state, std::size_t arm, int reward) {
    if (arm >= state.posteriors.size())
        throw std::out_of_range("ts_update: arm index out of range");
    if (reward != 0 && reward != 1)
        throw std::domain_error("ts_update: reward must be 0 or 1");
    if (reward == 1)
        ++state.posteriors[arm].successes;
    else
        ++state.posteriors[arm].failures;
    ++state.step;
}

// General [0,1] rewards: performs a Bernoulli trial with the observed reward
// as success probability and feeds the outcome to the Bernoulli update.
// Rewards of exactly 0 or 1 are degenerate trials and consume no draw.
inline void ts_update_general(TSState& state, std::size_t arm, double reward,
                              RandomStream& stream) {
    if (!(reward >= 0.0 && reward <= 1.0))
        throw std::domain_error("ts_update_general: reward must lie in [0,1]");
    int trial;
    if (reward == 0.0)
        trial = 0;
    else if (reward == 1.0)
        trial = 1;
    else
        trial = stream.bernoulli(reward);
    ts_update(state, arm, trial);
}

struct UCBState {
    std::vector<std::int64_t> pulls;
    std::vector<double> reward_sums;
    std::int64_t step = 1;
};

inline UCBState ucb1_init(std::size_t num_arms) {
    if (num_arms == 0)
        throw std::domain_error("ucb1_init: need at least one arm");
    UCBState s;
    s.pulls.resize(num_arms, 0);
    s.reward_sums.resize(num_arms, 0.0);
    return s;
}

// Plays each arm once in index order, then the maximizer of
// mean + sqrt(2 ln t / k_i). Ties break toward the lowest index.
inline std::size_t ucb1_select(const UCBState& state) {
    if (state.pulls.empty())
        throw std::domain_error("ucb1_select: uninitialized state");
    for (std::size_t i = 0; i < state.pulls.size(); ++i)
        if (state.pulls[i] == 0) return i;
    const double log_t = std::log(static_cast<double>(state.step));
    std::size_t best = 0;
    double best_score = -kInfinity;
    for (std::size_t i = 0; i < state.pulls.size(); ++i) {
        const double k = static_cast<double>(state.pulls[i]);
        const double score =
            state.reward_sums[i] / k + std::sqrt(2.0 * log_t / k);
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

inline void ucb1_update(UCBState& state, std::size_t arm, double reward) {
    if (arm >= state.pulls.size())
        throw std::out_of_range("ucb1_update: arm index out of range");
    if (!(reward >= 0.0 && reward <= 1.0))
        throw std::domain_error("ucb1_update: reward must lie in [0,1]");
    ++state.pulls[arm];
    state.reward_sums[arm] += reward;
    ++state.step;
}

// p_{i,t} = Pr(theta_1 > y | S successes in k plays of the optimal arm),
// computed exactly through the Beta-Binomial identity:
// Pr(Beta(S+1, k-S+1) > y) = F_B(k+1, y, S).
inline double exact_p(const ArmPosterior& optimal_arm, double y) {
    if (!(y > 0.0 && y < 1.0))
        throw std::domain_error("exact_p: y must lie in (0,1)");
    return binomial_cdf(optimal_arm.plays() + 1, y, optimal_arm.successes);
}

}  // namespace tsb
