#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tsbandit/bounds.hpp"
#include "tsbandit/env.hpp"
#include "tsbandit/numerics.hpp"
#include "tsbandit/policy.hpp"
#include "tsbandit/rng.hpp"

namespace tsb {

enum class PolicyKind { thompson, ucb1 };

// Which analysis thresholds to instrument: the KL-balanced pair (thm1, uses
// eps) or the gap-thirds pair (thm2).
enum class EventTracking { off, thm1, thm2 };

struct ExperimentConfig {
    BanditInstance instance;
    PolicyKind policy = PolicyKind::thompson;
    std::int64_t horizon = 0;
    std::int64_t num_runs = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::int64_t> checkpoints;  // strictly increasing, last <= horizon
    EventTracking event_tracking = EventTracking::off;
    double eps = 0.2;
    bool record_p_series = false;
};

// Geometric checkpoint ladder ceil(T/2^m), deduplicated, plus T itself.
inline std::vector<std::int64_t> default_checkpoints(std::int64_t horizon) {
    if (horizon < 1)
        throw std::domain_error("default_checkpoints: horizon must be >= 1");
    std::vector<std::int64_t> points;
    std::int64_t v = horizon;
    while (v > 1) {
        v = (v + 1) / 2;
        points.push_back(v);
    }
    std::reverse(points.begin(), points.end());
    points.push_back(horizon);
    points.erase(std::unique(points.begin(), points.end()), points.end());
    return points;
}

// Per-arm failure tallies: plays of arm i with the empirical-mean event
// violated, and with it held but the sample event violated.
struct ArmEventTally {
    std::int64_t emu_fail = 0;
    std::int64_t etheta_fail = 0;
};

// Exact posterior tail probabilities p_{i,t} recorded at an optimal-arm play
// boundary: after the j-th play, with s1 successes so far.
struct PBoundarySample {
    std::int64_t j = 0;
    std::int64_t s1 = 0;
    std::vector<double> p;  // indexed by arm; optimal slot holds 1
};

struct RegretTrajectory {
    std::vector<double> checkpoint_regret;
    std::vector<std::int64_t> checkpoint_pulls;  // checkpoint-major, num_arms wide
    std::vector<std::int64_t> final_pulls;
    std::vector<ArmEventTally> event_tallies;  // empty when tracking is off
    std::vector<PBoundarySample> p_series;     // empty unless recorded
};

struct AggregateResult {
    std::vector<std::int64_t> checkpoints;
    std::vector<double> mean_regret;
    std::vector<double> se_regret;
    std::vector<double> mean_pulls;          // checkpoint-major, num_arms wide
    std::vector<double> mean_emu_fail;       // per arm; empty when off
    std::vector<double> se_emu_fail;
    std::vector<double> mean_etheta_fail;
    std::vector<double> se_etheta_fail;
    std::int64_t num_runs = 0;
};

namespace detail {

inline void validate_config(const ExperimentConfig& config) {
    if (config.instance.arms.empty())
        throw std::domain_error("ExperimentConfig: instance has no arms");
    if (config.horizon < 1)
        throw std::domain_error("ExperimentConfig: horizon must be >= 1");
    if (config.num_runs < 1)
        throw std::domain_error("ExperimentConfig: num_runs must be >= 1");
    std::int64_t prev = 0;
    for (std::int64_t c : config.checkpoints) {
        if (c <= prev)
            throw std::domain_error(
                "ExperimentConfig: checkpoints must be strictly increasing");
        prev = c;
    }
    if (!config.checkpoints.empty() &&
        config.checkpoints.back() > config.horizon)
        throw std::domain_error(
            "ExperimentConfig: checkpoints must not exceed the horizon");
    if (config.event_tracking != EventTracking::off) {
        if (!config.instance.unique_optimal)
            throw std::domain_error(
                "ExperimentConfig: event tracking needs a unique optimal arm");
        if (config.policy != PolicyKind::thompson)
            throw std::domain_error(
                "ExperimentConfig: event tracking instruments the Thompson "
                "policy only");
    }
    if (config.event_tracking == EventTracking::thm1 &&
        !(config.eps > 0.0 && config.eps <= 1.0))
        throw std::domain_error("ExperimentConfig: eps must lie in (0,1]");
    if (config.record_p_series && config.event_tracking == EventTracking::off)
        throw std::domain_error(
            "ExperimentConfig: p-series recording needs event tracking for "
            "its thresholds");
}

inline std::vector<ThresholdPair> tracking_thresholds(
    const BanditInstance& inst, EventTracking mode, double eps) {
    std::vector<ThresholdPair> out(inst.num_arms());
    if (mode == EventTracking::off) return out;
    const double mu_1 = inst.means[inst.optimal_index];
    for (std::size_t i = 0; i < inst.num_arms(); ++i) {
        if (i == inst.optimal_index) continue;
        out[i] = mode == EventTracking::thm1
                     ? kl_thresholds(inst.means[i], mu_1, eps)
                     : thm2_thresholds(inst.means[i], mu_1);
    }
    return out;
}

}  // namespace detail

// One independent episode. Streams derive from (master_seed, run_index) with
// separate "env" and "policy" purposes, so reward noise and policy noise are
// decoupled and every run is reproducible in isolation.
inline RegretTrajectory run_episode(const ExperimentConfig& config,
                                    std::int64_t run_index) {
    detail::validate_config(config);
    const BanditInstance& inst = config.instance;
    const std::size_t num_arms = inst.num_arms();
    const std::vector<std::int64_t>& checkpoints =
        config.checkpoints.empty() ? default_checkpoints(config.horizon)
                                   : config.checkpoints;

    RandomStream env_stream = derive_stream(
        {config.master_seed, static_cast<std::uint64_t>(run_index), "env"});
    RandomStream policy_stream = derive_stream(
        {config.master_seed, static_cast<std::uint64_t>(run_index), "policy"});

    const bool tracking = config.event_tracking != EventTracking::off;
    const std::vector<ThresholdPair> thresholds = detail::tracking_thresholds(
        inst, config.event_tracking, config.eps);

    RegretTrajectory out;
    out.checkpoint_regret.reserve(checkpoints.size());
    std::vector<std::int64_t> pulls(num_arms, 0);
    if (tracking) out.event_tallies.resize(num_arms);

    TSState ts;
    UCBState ucb;
    const bool is_ts = config.policy == PolicyKind::thompson;
    if (is_ts)
        ts = ts_init(num_arms);
    else
        ucb = ucb1_init(num_arms);

    const auto record_p_boundary = [&] {
        const auto& opt = ts.posteriors[inst.optimal_index];
        PBoundarySample sample;
        sample.j = opt.plays();
        sample.s1 = opt.successes;
        sample.p.assign(num_arms, 1.0);
        for (std::size_t i = 0; i < num_arms; ++i) {
            if (i == inst.optimal_index) continue;
            sample.p[i] = exact_p(opt, thresholds[i].y);
        }
        out.p_series.push_back(std::move(sample));
    };
    if (config.record_p_series) record_p_boundary();

    std::size_t next_checkpoint = 0;
    for (std::int64_t t = 1; t <= config.horizon; ++t) {
        std::size_t arm;
        if (is_ts) {
            const TSSelection sel = ts_select(ts, policy_stream);
            arm = sel.arm;
            // events are evaluated on the state the decision saw: empirical
            // mean before the update, and this step's posterior draw
            if (tracking && arm != inst.optimal_index) {
                if (ts.posteriors[arm].empirical_mean() > thresholds[arm].x)
                    ++out.event_tallies[arm].emu_fail;
                else if (sel.theta[arm] > thresholds[arm].y)
                    ++out.event_tallies[arm].etheta_fail;
            }
        } else {
            arm = ucb1_select(ucb);
        }
        const double reward = pull(inst, arm, env_stream);
        if (is_ts) {
            ts_update_general(ts, arm, reward, policy_stream);
            if (config.record_p_series && arm == inst.optimal_index)
                record_p_boundary();
        } else {
            ucb1_update(ucb, arm, reward);
        }
        ++pulls[arm];
        if (next_checkpoint < checkpoints.size() &&
            t == checkpoints[next_checkpoint]) {
            double regret = 0.0;
            for (std::size_t i = 0; i < num_arms; ++i)
                regret += inst.gaps[i] * static_cast<double>(pulls[i]);
            out.checkpoint_regret.push_back(regret);
            out.checkpoint_pulls.insert(out.checkpoint_pulls.end(),
                                        pulls.begin(), pulls.end());
            ++next_checkpoint;
        }
    }
    out.final_pulls = std::move(pulls);
    return out;
}

namespace detail {

// Two-pass mean and standard error over run-indexed values, accumulated in
// index order so results do not depend on scheduling.
inline void mean_se(const std::vector<double>& values, double& mean,
                    double& se) {
    const double n = static_cast<double>(values.size());
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    mean = sum / n;
    if (values.size() < 2) {
        se = 0.0;
        return;
    }
    double sq = 0.0;
    for (double v : values) sq += (v - mean) * (v - mean);
    se = std::sqrt(sq / (n - 1.0) / n);
}

}  // namespace detail

struct ExperimentOutput {
    AggregateResult aggregate;
    std::vector<RegretTrajectory> trajectories;  // run-indexed
};

// Runs num_runs independent episodes and aggregates them. Episodes are
// distributed over worker threads by run index; the reduction always walks
// runs in index order, so every worker count yields identical output.
inline ExperimentOutput run_experiment_full(const ExperimentConfig& config,
                                            int workers = 1) {
    detail::validate_config(config);
    if (workers < 1)
        throw std::domain_error("run_experiment: workers must be >= 1");
    const std::vector<std::int64_t> checkpoints =
        config.checkpoints.empty() ? default_checkpoints(config.horizon)
                                   : config.checkpoints;
    const std::int64_t runs = config.num_runs;
    std::vector<RegretTrajectory> trajectories(
        static_cast<std::size_t>(runs));

    const int active = static_cast<int>(
        std::min<std::int64_t>(workers, runs));
    if (active <= 1) {
        for (std::int64_t r = 0; r < runs; ++r)
            trajectories[static_cast<std::size_t>(r)] =
                run_episode(config, r);
    } else {
        std::atomic<std::int64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(active));
        for (int w = 0; w < active; ++w) {
            pool.emplace_back([&] {
                try {
                    for (;;) {
                        const std::int64_t r =
                            next.fetch_add(1, std::memory_order_relaxed);
                        if (r >= runs) return;
                        trajectories[static_cast<std::size_t>(r)] =
                            run_episode(config, r);
                    }
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    AggregateResult agg;
    agg.checkpoints = checkpoints;
    agg.num_runs = runs;
    const std::size_t num_arms = config.instance.num_arms();
    std::vector<double> column(static_cast<std::size_t>(runs));
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        for (std::int64_t r = 0; r < runs; ++r)
            column[static_cast<std::size_t>(r)] =
                trajectories[static_cast<std::size_t>(r)]
                    .checkpoint_regret[c];
        double mean = 0.0, se = 0.0;
        detail::mean_se(column, mean, se);
        agg.mean_regret.push_back(mean);
        agg.se_regret.push_back(se);
        for (std::size_t i = 0; i < num_arms; ++i) {
            for (std::int64_t r = 0; r < runs; ++r)
                column[static_cast<std::size_t>(r)] = static_cast<double>(
                    trajectories[static_cast<std::size_t>(r)]
                        .checkpoint_pulls[c * num_arms + i]);
            detail::mean_se(column, mean, se);
            agg.mean_pulls.push_back(mean);
        }
    }
    if (config.event_tracking != EventTracking::off) {
        for (std::size_t i = 0; i < num_arms; ++i) {
            for (std::int64_t r = 0; r < runs; ++r)
                column[static_cast<std::size_t>(r)] = static_cast<double>(
                    trajectories[static_cast<std::size_t>(r)]
                        .event_tallies[i]
                        .emu_fail);
            double mean = 0.0, se = 0.0;
            detail::mean_se(column, mean, se);
            agg.mean_emu_fail.push_back(mean);
            agg.se_emu_fail.push_back(se);
            for (std::int64_t r = 0; r < runs; ++r)
                column[static_cast<std::size_t>(r)] = static_cast<double>(
                    trajectories[static_cast<std::size_t>(r)]
                        .event_tallies[i]
                        .etheta_fail);
            detail::mean_se(column, mean, se);
            agg.mean_etheta_fail.push_back(mean);
            agg.se_etheta_fail.push_back(se);
        }
    }
    ExperimentOutput out;
    out.aggregate = std::move(agg);
    out.trajectories = std::move(trajectories);
    return out;
}

inline AggregateResult run_experiment(const ExperimentConfig& config,
                                      int workers = 1) {
    return run_experiment_full(config, workers).aggregate;
}

struct ComparisonRow {
    std::string name;
    AggregateResult result;
};

struct ComparisonTable {
    std::vector<std::int64_t> checkpoints;
    std::vector<ComparisonRow> rows;
    std::vector<BoundReport> bound_rows;  // evaluated at the shared horizon
};

inline std::string policy_name(PolicyKind kind) {
    return kind == PolicyKind::thompson ? "thompson" : "ucb1";
}

// Runs each config and tabulates mean regret side by side with the bound
// values at the shared horizon. All configs must share the instance, horizon,
// checkpoints, and seed so columns are comparable.
inline ComparisonTable compare_policies(
    const std::vector<ExperimentConfig>& configs, int workers = 1,
    double thm1_eps = 0.2) {
    if (configs.empty())
        throw std::domain_error("compare_policies: need at least one config");
    const ExperimentConfig& ref = configs.front();
    for (const auto& c : configs) {
        if (c.instance.means != ref.instance.means ||
            c.horizon != ref.horizon ||
            c.master_seed != ref.master_seed ||
            c.checkpoints != ref.checkpoints)
            throw std::domain_error(
                "compare_policies: configs must share instance, horizon, "
                "checkpoints, and seed");
    }
    ComparisonTable table;
    table.checkpoints = ref.checkpoints.empty()
                            ? default_checkpoints(ref.horizon)
                            : ref.checkpoints;
    for (const auto& c : configs)
        table.rows.push_back({policy_name(c.policy), run_experiment(c, workers)});
    if (ref.instance.unique_optimal && ref.horizon >= 2 &&
        ref.instance.num_arms() >= 2) {
        bool degenerate = false;
        const double mu_1 = ref.instance.means[ref.instance.optimal_index];
        for (std::size_t i = 0; i < ref.instance.num_arms(); ++i) {
            if (i == ref.instance.optimal_index) continue;
            if (ref.instance.means[i] <= 0.0 || mu_1 >= 1.0) degenerate = true;
        }
        if (!degenerate) {
            table.bound_rows.push_back(
                thm1_bound(ref.instance, thm1_eps, ref.horizon));
            table.bound_rows.push_back(
                lai_robbins_lower(ref.instance, ref.horizon));
        }
        table.bound_rows.push_back(ucb1_upper(ref.instance, ref.horizon));
    }
    return table;
}

}  // namespace tsb
