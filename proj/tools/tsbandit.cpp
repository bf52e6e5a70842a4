// Command-line front end: simulate | compare | bounds | verify | sweep.
// Exit codes: 0 success, 1 verification check failure, 2 usage or I/O error.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tsbandit/config.hpp"
#include "tsbandit/sim.hpp"
#include "tsbandit/verify.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir = ".";
    int workers = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::int64_t> runs;
    std::optional<std::int64_t> horizon;
    std::optional<std::string> policy;
};

tsb::ExperimentConfig load_config(const CommonOptions& opt) {
    std::ifstream in(opt.config_path);
    if (!in)
        throw tsb::ConfigError("config: cannot open " + opt.config_path);
    std::ostringstream text;
    text << in.rdbuf();
    tsb::ExperimentConfig config = tsb::parse_config_text(text.str());
    if (opt.seed) config.master_seed = *opt.seed;
    if (opt.runs) config.num_runs = *opt.runs;
    if (opt.horizon) {
        config.horizon = *opt.horizon;
        if (!config.checkpoints.empty() &&
            config.checkpoints.back() > config.horizon)
            throw tsb::ConfigError(
                "checkpoints: config checkpoints exceed the overridden T");
    }
    if (opt.policy) {
        if (*opt.policy == "thompson" || *opt.policy == "ts")
            config.policy = tsb::PolicyKind::thompson;
        else if (*opt.policy == "ucb1")
            config.policy = tsb::PolicyKind::ucb1;
        else
            throw tsb::ConfigError("policy: expected thompson|ts|ucb1, got " +
                                   *opt.policy);
    }
    return config;
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
    const std::string path = dir + "/" + name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw tsb::ConfigError("out: cannot write " + path);
    std::cout << "wrote " << path << "\n";
    return os;
}

void add_common(CLI::App* cmd, CommonOptions& opt, bool config_required) {
    auto* config_opt =
        cmd->add_option("--config", opt.config_path, "JSON experiment config");
    if (config_required) config_opt->required();
    cmd->add_option("--out", opt.out_dir, "output directory for CSV files");
    cmd->add_option("--workers", opt.workers, "worker threads")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.seed, "override master seed");
    cmd->add_option("--runs", opt.runs, "override run count")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--horizon", opt.horizon, "override horizon T")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--policy", opt.policy, "override policy: thompson|ucb1");
}

int run_simulate(const CommonOptions& opt) {
    const tsb::ExperimentConfig config = load_config(opt);
    const tsb::ExperimentOutput out =
        tsb::run_experiment_full(config, opt.workers);
    const tsb::AggregateResult& agg = out.aggregate;
    {
        auto os = open_out(opt.out_dir, "trajectory.csv");
        tsb::write_trajectory_csv(os, agg, config.instance.num_arms());
    }
    if (config.event_tracking != tsb::EventTracking::off) {
        auto os = open_out(opt.out_dir, "events.csv");
        tsb::write_events_csv(os, agg);
    }
    if (config.record_p_series) {
        auto os = open_out(opt.out_dir, "p_series.csv");
        tsb::write_pseries_csv(os, out.trajectories,
                               config.instance.optimal_index);
    }
    std::cout << "policy=" << tsb::policy_name(config.policy)
              << " arms=" << config.instance.num_arms()
              << " T=" << config.horizon << " runs=" << config.num_runs
              << "\nfinal mean regret " << agg.mean_regret.back() << " +/- "
              << agg.se_regret.back() << " (SE)\n";
    return 0;
}

int run_compare(const CommonOptions& opt, double eps) {
    tsb::ExperimentConfig ts = load_config(opt);
    ts.policy = tsb::PolicyKind::thompson;
    ts.event_tracking = tsb::EventTracking::off;  // instrumentation is
    ts.record_p_series = false;                   // Thompson-only
    tsb::ExperimentConfig ucb = ts;
    ucb.policy = tsb::PolicyKind::ucb1;
    const tsb::ComparisonTable table =
        tsb::compare_policies({ts, ucb}, opt.workers, eps);
    {
        auto os = open_out(opt.out_dir, "compare.csv");
        tsb::write_compare_csv(os, table, ts.instance, eps);
    }
    for (const auto& row : table.rows)
        std::cout << row.name << " final mean regret "
                  << row.result.mean_regret.back() << " +/- "
                  << row.result.se_regret.back() << " (SE)\n";
    for (const auto& bound : table.bound_rows)
        std::cout << bound.bound_name << " total at T=" << bound.horizon
                  << ": " << bound.total << "\n";
    return 0;
}

int run_bounds(const CommonOptions& opt, double eps, double thm2_c) {
    const tsb::ExperimentConfig config = load_config(opt);
    const tsb::BanditInstance& inst = config.instance;
    std::vector<tsb::BoundReport> reports;
    const auto try_add = [&](auto&& fn) {
        try {
            reports.push_back(fn());
        } catch (const std::exception& e) {
            std::cout << "skipped: " << e.what() << "\n";
        }
    };
    try_add([&] { return tsb::thm1_bound(inst, eps, config.horizon); });
    try_add([&] {
        tsb::BoundReport r;
        r.bound_name = "thm2";
        r.horizon = config.horizon;
        r.total = tsb::thm2_bound(
            static_cast<std::int64_t>(inst.num_arms()), config.horizon,
            thm2_c);
        r.caveats.push_back(
            "constant c = " + tsb::format_double(thm2_c) +
            " is measured, not derived");
        return r;
    });
    try_add([&] { return tsb::lai_robbins_lower(inst, config.horizon); });
    try_add([&] { return tsb::ucb1_upper(inst, config.horizon); });
    {
        auto os = open_out(opt.out_dir, "bounds.csv");
        tsb::write_bounds_csv(os, reports);
    }
    for (const auto& r : reports) {
        std::cout << r.bound_name << " T=" << r.horizon
                  << " total=" << r.total << "\n";
        for (const auto& c : r.caveats) std::cout << "  caveat: " << c << "\n";
    }
    return 0;
}

int run_sweep(const CommonOptions& opt) {
    tsb::ExperimentConfig config = load_config(opt);
    if (config.checkpoints.empty())
        config.checkpoints = tsb::default_checkpoints(config.horizon);
    const tsb::AggregateResult agg = tsb::run_experiment(config, opt.workers);
    const double n = static_cast<double>(config.instance.num_arms());
    auto os = open_out(opt.out_dir, "sweep.csv");
    os << "checkpoint,mean_regret,se_regret,normalized_c\n";
    double worst = 0.0;
    for (std::size_t c = 0; c < agg.checkpoints.size(); ++c) {
        const double t = static_cast<double>(agg.checkpoints[c]);
        os << agg.checkpoints[c] << ','
           << tsb::format_double(agg.mean_regret[c]) << ','
           << tsb::format_double(agg.se_regret[c]) << ',';
        if (t >= 2.0) {
            const double norm =
                agg.mean_regret[c] / std::sqrt(n * t * std::log(t));
            os << tsb::format_double(norm);
            worst = std::max(worst, norm);
        }
        os << "\n";
    }
    std::cout << "worst normalized regret / sqrt(N T ln T) = " << worst
              << "\n";
    return 0;
}

int run_verify(const CommonOptions& opt, const std::string& which,
               double theta_constant, bool fast) {
    std::vector<tsb::CheckSummary> summaries;
    const auto want = [&](const char* name) {
        return which == "all" || which == name;
    };
    if (want("solvers"))
        summaries.push_back(tsb::check_threshold_solvers(fast ? 200 : 1000));
    if (want("fact3"))
        summaries.push_back(tsb::check_fact3_identity(fast ? 25 : 100));
    if (want("lemma1"))
        summaries.push_back(tsb::check_lemma1_profiles(fast ? 12 : 50));
    if (want("lemma4-small")) summaries.push_back(tsb::check_lemma4_small_j());
    if (want("envelope"))
        summaries.push_back(
            tsb::check_lemma4_envelope(fast ? 2000 : 10000, theta_constant));
    if (want("partial-sums"))
        summaries.push_back(tsb::check_partial_sums(fast ? 2000 : 10000));
    if (want("jerabek"))
        summaries.push_back(tsb::check_jerabek_ratios(10, fast ? 200 : 1000));
    if (want("lemma23")) {
        if (!opt.config_path.empty()) {
            tsb::ExperimentConfig config = load_config(opt);
            if (config.event_tracking == tsb::EventTracking::off)
                config.event_tracking = tsb::EventTracking::thm1;
            summaries.push_back(
                tsb::check_lemma23_simulation(config, opt.workers));
        } else if (which == "lemma23") {
            throw tsb::ConfigError(
                "verify: --check lemma23 needs --config with a tracked "
                "experiment");
        }
    }
    if (summaries.empty())
        throw tsb::ConfigError("verify: unknown check " + which);

    tsb::CheckSummary merged;
    merged.name = "verify";
    bool all_passed = true;
    for (const auto& s : summaries) {
        all_passed = all_passed && s.passed;
        std::cout << (s.passed ? "[PASS] " : "[FAIL] ") << s.name;
        for (const auto& [key, value] : s.measured)
            std::cout << "  " << key << "=" << value;
        std::cout << "\n";
        for (const auto& r : s.reports) {
            merged.add(r);
            if (!r.pass)
                std::cout << "  failed: " << r.check << " (" << r.inputs
                          << ") lhs=" << r.lhs << " rhs=" << r.rhs << "\n";
        }
    }
    {
        auto os = open_out(opt.out_dir, "verify.csv");
        tsb::write_verify_csv(os, merged);
    }
    {
        auto os = open_out(opt.out_dir, "verify_summary.json");
        os << tsb::verify_summary_json(summaries).dump(2) << "\n";
    }
    return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Thompson-sampling bandit simulator, regret bounds, and numerical "
        "verification suite"};
    app.require_subcommand(1);

    CommonOptions opt;
    double eps = 0.2;
    double thm2_c = 1.0;
    double theta_constant = tsb::kThetaEnvelopeConstant;
    std::string which_check = "all";
    bool fast = false;

    auto* simulate =
        app.add_subcommand("simulate", "run one experiment, write CSVs");
    add_common(simulate, opt, true);

    auto* compare = app.add_subcommand(
        "compare", "run Thompson and UCB1 side by side with bounds");
    add_common(compare, opt, true);
    compare->add_option("--eps", eps, "epsilon for the KL-based upper bound")
        ->check(CLI::Range(1e-9, 1.0));

    auto* bounds =
        app.add_subcommand("bounds", "evaluate regret bounds for a config");
    add_common(bounds, opt, true);
    bounds->add_option("--eps", eps, "epsilon for the KL-based upper bound")
        ->check(CLI::Range(1e-9, 1.0));
    bounds->add_option("--thm2-c", thm2_c,
                       "constant for the sqrt(N T ln T) bound");

    auto* sweep = app.add_subcommand(
        "sweep", "normalized regret across checkpoints of one experiment");
    add_common(sweep, opt, true);

    auto* verify =
        app.add_subcommand("verify", "run the numerical verification checks");
    add_common(verify, opt, false);
    verify->add_option(
        "--check", which_check,
        "all|solvers|fact3|lemma1|lemma4-small|envelope|partial-sums|"
        "jerabek|lemma23");
    verify->add_option("--theta-constant", theta_constant,
                       "override the envelope constant under test");
    verify->add_flag("--fast", fast, "smaller grids for a quick pass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (simulate->parsed()) return run_simulate(opt);
        if (compare->parsed()) return run_compare(opt, eps);
        if (bounds->parsed()) return run_bounds(opt, eps, thm2_c);
        if (sweep->parsed()) return run_sweep(opt);
        return run_verify(opt, which_check, theta_constant, fast);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
