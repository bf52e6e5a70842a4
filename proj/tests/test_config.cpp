#include "tsbandit/config.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>

#include "tsbandit/sim.hpp"

namespace {

using tsb::ConfigError;
using tsb::ExperimentConfig;

void expect_error_naming(const std::string& text, const std::string& field) {
    try {
        tsb::parse_config_text(text);
        FAIL() << "expected ConfigError for " << field;
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find(field), std::string::npos)
            << e.what();
    }
}

TEST(ParseConfig, FullDocument) {
    const ExperimentConfig c = tsb::parse_config_text(R"({
        "arms": [0.5, 0.45, {"support": [0.0, 0.5, 1.0],
                             "probs": [0.2, 0.3, 0.5]}],
        "T": 1000,
        "runs": 16,
        "seed": 42,
        "policy": "ucb1",
        "checkpoints": [10, 100, 1000],
        "event_tracking": "off",
        "eps": 0.3,
        "record_p_series": false
    })");
    ASSERT_EQ(c.instance.num_arms(), 3u);
    EXPECT_EQ(c.instance.means[0], 0.5);
    EXPECT_EQ(c.instance.means[1], 0.45);
    EXPECT_NEAR(c.instance.means[2], 0.65, 1e-15);
    EXPECT_EQ(c.instance.optimal_index, 2u);
    EXPECT_EQ(c.horizon, 1000);
    EXPECT_EQ(c.num_runs, 16);
    EXPECT_EQ(c.master_seed, 42u);
    EXPECT_EQ(c.policy, tsb::PolicyKind::ucb1);
    EXPECT_EQ(c.checkpoints, (std::vector<std::int64_t>{10, 100, 1000}));
    EXPECT_EQ(c.event_tracking, tsb::EventTracking::off);
    EXPECT_EQ(c.eps, 0.3);
    EXPECT_FALSE(c.record_p_series);
}

TEST(ParseConfig, MinimalDocumentUsesDefaults) {
    const ExperimentConfig c =
        tsb::parse_config_text(R"({"arms": [0.9, 0.1], "T": 50})");
    EXPECT_EQ(c.num_runs, 1);
    EXPECT_EQ(c.master_seed, 0u);
    EXPECT_EQ(c.policy, tsb::PolicyKind::thompson);
    EXPECT_TRUE(c.checkpoints.empty());
    EXPECT_EQ(c.event_tracking, tsb::EventTracking::off);
    EXPECT_EQ(c.eps, 0.2);
}

TEST(ParseConfig, PolicyAliases) {
    EXPECT_EQ(tsb::parse_config_text(R"({"arms":[0.5,0.4],"T":10,"policy":"ts"})")
                  .policy,
              tsb::PolicyKind::thompson);
    const auto c = tsb::parse_config_text(
        R"({"arms":[0.5,0.4],"T":10,"event_tracking":"thm1"})");
    EXPECT_EQ(c.event_tracking, tsb::EventTracking::thm1);
    const auto c2 = tsb::parse_config_text(
        R"({"arms":[0.5,0.4],"T":10,"event_tracking":"thm2",
            "record_p_series":true})");
    EXPECT_EQ(c2.event_tracking, tsb::EventTracking::thm2);
    EXPECT_TRUE(c2.record_p_series);
}

TEST(ParseConfig, ErrorsNameTheField) {
    expect_error_naming(R"({"arms": [0.5, 1.5], "T": 10})", "arms[1]");
    expect_error_naming(R"({"arms": [{"support": [0.5]}], "T": 10})",
                        "arms[0]");
    expect_error_naming(R"({"arms": [0.5, 0.4]})", "T");
    expect_error_naming(R"({"arms": [0.5, 0.4], "T": 0})", "T");
    expect_error_naming(R"({"arms": [], "T": 10})", "arms");
    expect_error_naming(R"({"arms": [0.5, 0.4], "T": 10, "runs": 0})",
                        "runs");
    expect_error_naming(R"({"arms": [0.5, 0.4], "T": 10, "seed": -4})",
                        "seed");
    expect_error_naming(R"({"arms": [0.5, 0.4], "T": 10, "policy": "etc"})",
                        "policy");
    expect_error_naming(
        R"({"arms": [0.5, 0.4], "T": 10, "checkpoints": [5, 5]})",
        "checkpoints");
    expect_error_naming(
        R"({"arms": [0.5, 0.4], "T": 10, "checkpoints": [5, 20]})",
        "checkpoints");
    expect_error_naming(
        R"({"arms": [0.5, 0.4], "T": 10, "event_tracking": "thm3"})",
        "event_tracking");
    expect_error_naming(R"({"arms": [0.5, 0.4], "T": 10, "eps": 1.5})",
                        "eps");
    expect_error_naming(R"({"arms": [0.5, 0.4], "T": 10, "eps": 0.0})",
                        "eps");
    expect_error_naming(
        R"({"arms": [0.5, 0.4], "T": 10, "record_p_series": 1})",
        "record_p_series");
    expect_error_naming("[1, 2]", "config");
    expect_error_naming("{not json", "malformed");
}

TEST(FormatDouble, RoundTripsSeventeenDigits) {
    for (const double v :
         {0.1, 1.0 / 3.0, 1e-17, 12345.678901234567, 0.05, -2.5e300,
          0.005008366846356837}) {
        EXPECT_EQ(std::stod(tsb::format_double(v)), v) << v;
    }
    EXPECT_EQ(tsb::format_double(2.0), "2");
    EXPECT_EQ(tsb::format_double(0.5), "0.5");
    EXPECT_EQ(tsb::format_double(0.0), "0");
}

TEST(CsvEscape, QuotesOnlyWhenNeeded) {
    EXPECT_EQ(tsb::csv_escape("plain"), "plain");
    EXPECT_EQ(tsb::csv_escape("a, b"), "\"a, b\"");
    EXPECT_EQ(tsb::csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(tsb::csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(CsvWriters, TrajectoryGolden) {
    tsb::AggregateResult agg;
    agg.checkpoints = {10, 20};
    agg.mean_regret = {0.5, 1.5};
    agg.se_regret = {0.0, 0.25};
    agg.mean_pulls = {7.0, 3.0, 12.5, 7.5};
    agg.num_runs = 4;
    std::ostringstream os;
    tsb::write_trajectory_csv(os, agg, 2);
    EXPECT_EQ(os.str(),
              "checkpoint,mean_regret,se_regret,mean_pulls_0,mean_pulls_1\n"
              "10,0.5,0,7,3\n"
              "20,1.5,0.25,12.5,7.5\n");
}

TEST(CsvWriters, EventsGolden) {
    tsb::AggregateResult agg;
    agg.mean_emu_fail = {0.0, 2.5};
    agg.se_emu_fail = {0.0, 0.5};
    agg.mean_etheta_fail = {0.0, 1.25};
    agg.se_etheta_fail = {0.0, 0.25};
    std::ostringstream os;
    tsb::write_events_csv(os, agg);
    EXPECT_EQ(os.str(),
              "arm,mean_emu_fail,se_emu_fail,mean_etheta_fail,se_etheta_fail\n"
              "0,0,0,0,0\n"
              "1,2.5,0.5,1.25,0.25\n");
}

TEST(CsvWriters, BoundsGoldenWithQuotedCaveats) {
    tsb::BoundReport report;
    report.bound_name = "demo";
    report.horizon = 100;
    report.per_arm = {{1, 2.5, 0.5}};
    report.total = 3.0;
    report.caveats = {"a, b", "c"};
    std::ostringstream os;
    tsb::write_bounds_csv(os, {report});
    EXPECT_EQ(os.str(),
              "bound_name,T,arm,leading_term,additive_term,total,caveats\n"
              "demo,100,1,2.5,0.5,,\n"
              "demo,100,,,,3,\"a, b; c\"\n");
}

TEST(CsvWriters, PSeriesGolden) {
    tsb::RegretTrajectory run;
    run.p_series.push_back({0, 0, {1.0, 0.5}});
    run.p_series.push_back({1, 1, {1.0, 0.25}});
    std::ostringstream os;
    tsb::write_pseries_csv(os, {run}, 0);
    EXPECT_EQ(os.str(),
              "run,j,s1,arm,p\n"
              "0,0,0,1,0.5\n"
              "0,1,1,1,0.25\n");
}

TEST(CsvWriters, CompareLeavesUndefinedBoundsEmpty) {
    ExperimentConfig ts;
    ts.instance = tsb::make_instance(
        {tsb::ArmSpec::bernoulli(0.8), tsb::ArmSpec::bernoulli(0.4)});
    ts.horizon = 50;
    ts.num_runs = 2;
    ts.checkpoints = {1, 50};
    const auto table = tsb::compare_policies({ts});
    std::ostringstream os;
    tsb::write_compare_csv(os, table, ts.instance, 0.2);
    std::istringstream is(os.str());
    std::string header, row1, row50;
    std::getline(is, header);
    std::getline(is, row1);
    std::getline(is, row50);
    EXPECT_EQ(header,
              "checkpoint,mean_regret_thompson,se_regret_thompson,"
              "thm1_total,thm2_total,lai_robbins_total,ucb1_total");
    // every bound is undefined at T=1, so the last four cells are empty
    EXPECT_EQ(row1.substr(row1.size() - 4), ",,,,");
    EXPECT_EQ(std::count(row50.begin(), row50.end(), ','), 6);
    EXPECT_NE(row50.find("50,"), std::string::npos);
    EXPECT_EQ(row50.back() == ',', false);
}

TEST(VerifySummaryJson, AggregatesChecksAndMeasured) {
    tsb::CheckSummary alpha;
    alpha.name = "alpha";
    alpha.add(tsb::VerificationReport::make("a", "", 0.0, 1.0, 0.0, ""));
    alpha.measured["k"] = 1.5;
    tsb::CheckSummary beta;
    beta.name = "beta";
    beta.add(tsb::VerificationReport::make("b", "", 2.0, 1.0, 0.0, ""));
    const auto doc = tsb::verify_summary_json({alpha, beta});
    EXPECT_EQ(doc.at("checks").get<int>(), 2);
    EXPECT_EQ(doc.at("failures").get<int>(), 1);
    EXPECT_EQ(doc.at("measured").at("alpha.k").get<double>(), 1.5);
    EXPECT_TRUE(doc.at("per_check").at("alpha").at("passed").get<bool>());
    EXPECT_FALSE(doc.at("per_check").at("beta").at("passed").get<bool>());
    EXPECT_EQ(doc.at("per_check").at("beta").at("failures").get<int>(), 1);
}

}  // namespace
