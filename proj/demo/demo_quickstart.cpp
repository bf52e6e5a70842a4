// Minimal tour: build a bandit, step Thompson sampling by hand, then run a
// full multi-run experiment and print the regret trajectory.
#include <cstdio>

#include "tsbandit/env.hpp"
#include "tsbandit/policy.hpp"
#include "tsbandit/rng.hpp"
#include "tsbandit/sim.hpp"

int main() {
    const tsb::BanditInstance instance = tsb::make_instance({
        tsb::ArmSpec::bernoulli(0.75),
        tsb::ArmSpec::bernoulli(0.60),
        tsb::ArmSpec::discrete({0.0, 0.5, 1.0}, {0.25, 0.5, 0.25}),
    });
    std::printf("arms=%zu optimal=%zu gaps:", instance.num_arms(),
                instance.optimal_index);
    for (double g : instance.gaps) std::printf(" %.2f", g);
    std::printf("\n\n");

    // manual stepping: one posterior per arm, sample, act, update
    tsb::RandomStream env = tsb::derive_stream({2024, 0, "env"});
    tsb::RandomStream policy = tsb::derive_stream({2024, 0, "policy"});
    tsb::TSState state = tsb::ts_init(instance.num_arms());
    for (int t = 1; t <= 5; ++t) {
        const tsb::TSSelection sel = tsb::ts_select(state, policy);
        const double reward = tsb::pull(instance, sel.arm, env);
        tsb::ts_update_general(state, sel.arm, reward, policy);
        std::printf("t=%d arm=%zu theta=%.3f reward=%.1f\n", t, sel.arm,
                    sel.theta[sel.arm], reward);
    }

    // the same loop, batched: 200 independent runs on 2 worker threads
    tsb::ExperimentConfig config;
    config.instance = instance;
    config.horizon = 5000;
    config.num_runs = 200;
    config.master_seed = 2024;
    const tsb::AggregateResult agg = tsb::run_experiment(config, 2);
    std::printf("\n%8s  %12s  %10s\n", "T", "mean regret", "SE");
    for (std::size_t c = 0; c < agg.checkpoints.size(); ++c)
        std::printf("%8lld  %12.3f  %10.3f\n",
                    static_cast<long long>(agg.checkpoints[c]),
                    agg.mean_regret[c], agg.se_regret[c]);
    return 0;
}
