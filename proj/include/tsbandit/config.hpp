#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsbandit/bounds.hpp"
#include "tsbandit/sim.hpp"
#include "tsbandit/verify.hpp"

namespace tsb {

// Configuration errors name the offending field so CLI users can fix the
// file without reading source.
class ConfigError : public std::runtime_error {
  public:
    explicit ConfigError(const std::string& message)
        : std::runtime_error(message) {}
};

namespace detail {

inline ArmSpec parse_arm(const nlohmann::json& node, std::size_t index) {
    const std::string where = "arms[" + std::to_string(index) + "]";
    try {
        if (node.is_number()) {
            const double mean = node.get<double>();
            if (!(mean >= 0.0 && mean <= 1.0))
                throw ConfigError(where + ": Bernoulli mean must lie in [0,1]");
            return ArmSpec::bernoulli(mean);
        }
        if (node.is_object()) {
            if (!node.contains("support") || !node.contains("probs"))
                throw ConfigError(where +
                                  ": discrete arm needs support and probs");
            return ArmSpec::discrete(
                node.at("support").get<std::vector<double>>(),
                node.at("probs").get<std::vector<double>>());
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    throw ConfigError(where + ": expected a number or {support, probs}");
}

}  // namespace detail

// Schema: {"arms": [...], "T": int, "runs": int, "seed": u64,
//          "policy": "thompson"|"ts"|"ucb1", "checkpoints": [int...],
//          "event_tracking": "off"|"thm1"|"thm2", "eps": float,
//          "record_p_series": bool}. arms and T are required.
inline ExperimentConfig parse_config(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    ExperimentConfig config;

    if (!doc.contains("arms") || !doc.at("arms").is_array() ||
        doc.at("arms").empty())
        throw ConfigError("arms: required non-empty array");
    std::vector<ArmSpec> specs;
    for (std::size_t i = 0; i < doc.at("arms").size(); ++i)
        specs.push_back(detail::parse_arm(doc.at("arms")[i], i));
    try {
        config.instance = make_instance(std::move(specs));
    } catch (const std::exception& e) {
        throw ConfigError(std::string("arms: ") + e.what());
    }

    if (!doc.contains("T"))
        throw ConfigError("T: required horizon is missing");
    if (!doc.at("T").is_number_integer() || doc.at("T").get<std::int64_t>() < 1)
        throw ConfigError("T: must be an integer >= 1");
    config.horizon = doc.at("T").get<std::int64_t>();

    if (doc.contains("runs")) {
        if (!doc.at("runs").is_number_integer() ||
            doc.at("runs").get<std::int64_t>() < 1)
            throw ConfigError("runs: must be an integer >= 1");
        config.num_runs = doc.at("runs").get<std::int64_t>();
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned() &&
            !doc.at("seed").is_number_integer())
            throw ConfigError("seed: must be a non-negative integer");
        if (doc.at("seed").is_number_integer() &&
            doc.at("seed").get<std::int64_t>() < 0)
            throw ConfigError("seed: must be a non-negative integer");
        config.master_seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("policy")) {
        const std::string p = doc.at("policy").get<std::string>();
        if (p == "thompson" || p == "ts")
            config.policy = PolicyKind::thompson;
        else if (p == "ucb1")
            config.policy = PolicyKind::ucb1;
        else
            throw ConfigError("policy: expected thompson|ts|ucb1, got " + p);
    }
    if (doc.contains("checkpoints")) {
        if (!doc.at("checkpoints").is_array())
            throw ConfigError("checkpoints: must be an array of integers");
        std::int64_t prev = 0;
        for (const auto& node : doc.at("checkpoints")) {
            if (!node.is_number_integer())
                throw ConfigError("checkpoints: must be an array of integers");
            const std::int64_t c = node.get<std::int64_t>();
            if (c <= prev)
                throw ConfigError(
                    "checkpoints: must be strictly increasing and >= 1");
            if (c > config.horizon)
                throw ConfigError("checkpoints: entries must not exceed T");
            config.checkpoints.push_back(c);
            prev = c;
        }
    }
    if (doc.contains("event_tracking")) {
        const std::string mode = doc.at("event_tracking").get<std::string>();
        if (mode == "off")
            config.event_tracking = EventTracking::off;
        else if (mode == "thm1")
            config.event_tracking = EventTracking::thm1;
        else if (mode == "thm2")
            config.event_tracking = EventTracking::thm2;
        else
            throw ConfigError("event_tracking: expected off|thm1|thm2, got " +
                              mode);
    }
    if (doc.contains("eps")) {
        if (!doc.at("eps").is_number())
            throw ConfigError("eps: must be a number in (0,1]");
        config.eps = doc.at("eps").get<double>();
        if (!(config.eps > 0.0 && config.eps <= 1.0))
            throw ConfigError("eps: must be a number in (0,1]");
    }
    if (doc.contains("record_p_series")) {
        if (!doc.at("record_p_series").is_boolean())
            throw ConfigError("record_p_series: must be a boolean");
        config.record_p_series = doc.at("record_p_series").get<bool>();
    }
    return config;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: malformed JSON: ") + e.what());
    }
    return parse_config(doc);
}

// --- deterministic CSV emission -------------------------------------------

// Shortest round-trip representation with 17 significant digits.
inline std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

inline std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// checkpoint, mean_regret, se_regret, mean_pulls_0..mean_pulls_{N-1}
inline void write_trajectory_csv(std::ostream& os, const AggregateResult& agg,
                                 std::size_t num_arms) {
    os << "checkpoint,mean_regret,se_regret";
    for (std::size_t i = 0; i < num_arms; ++i) os << ",mean_pulls_" << i;
    os << "\n";
    for (std::size_t c = 0; c < agg.checkpoints.size(); ++c) {
        os << agg.checkpoints[c] << ',' << format_double(agg.mean_regret[c])
           << ',' << format_double(agg.se_regret[c]);
        for (std::size_t i = 0; i < num_arms; ++i)
            os << ',' << format_double(agg.mean_pulls[c * num_arms + i]);
        os << "\n";
    }
}

// arm, mean_emu_fail, se_emu_fail, mean_etheta_fail, se_etheta_fail
inline void write_events_csv(std::ostream& os, const AggregateResult& agg) {
    os << "arm,mean_emu_fail,se_emu_fail,mean_etheta_fail,se_etheta_fail\n";
    for (std::size_t i = 0; i < agg.mean_emu_fail.size(); ++i) {
        os << i << ',' << format_double(agg.mean_emu_fail[i]) << ','
           << format_double(agg.se_emu_fail[i]) << ','
           << format_double(agg.mean_etheta_fail[i]) << ','
           << format_double(agg.se_etheta_fail[i]) << "\n";
    }
}

// run, j, s1, arm, p -- one row per suboptimal arm per boundary
inline void write_pseries_csv(std::ostream& os,
                              const std::vector<RegretTrajectory>& runs,
                              std::size_t optimal_index) {
    os << "run,j,s1,arm,p\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
        for (const auto& sample : runs[r].p_series) {
            for (std::size_t i = 0; i < sample.p.size(); ++i) {
                if (i == optimal_index) continue;
                os << r << ',' << sample.j << ',' << sample.s1 << ',' << i
                   << ',' << format_double(sample.p[i]) << "\n";
            }
        }
    }
}

// bound_name, T, arm, leading_term, additive_term, total, caveats; per-arm
// rows carry empty total, the closing total row carries empty arm columns.
inline void write_bounds_csv(std::ostream& os,
                             const std::vector<BoundReport>& reports) {
    os << "bound_name,T,arm,leading_term,additive_term,total,caveats\n";
    for (const auto& report : reports) {
        std::string caveats;
        for (const auto& c : report.caveats) {
            if (!caveats.empty()) caveats += "; ";
            caveats += c;
        }
        for (const auto& arm : report.per_arm)
            os << report.bound_name << ',' << report.horizon << ',' << arm.arm
               << ',' << format_double(arm.leading) << ','
               << format_double(arm.additive) << ",,\n";
        os << report.bound_name << ',' << report.horizon << ",,,,"
           << format_double(report.total) << ',' << csv_escape(caveats)
           << "\n";
    }
}

// checkpoint, then mean/se per policy, then bound totals evaluated at the
// checkpoint (empty when undefined there).
inline void write_compare_csv(std::ostream& os, const ComparisonTable& table,
                              const BanditInstance& instance,
                              double thm1_eps) {
    os << "checkpoint";
    for (const auto& row : table.rows)
        os << ",mean_regret_" << row.name << ",se_regret_" << row.name;
    os << ",thm1_total,thm2_total,lai_robbins_total,ucb1_total\n";
    for (std::size_t c = 0; c < table.checkpoints.size(); ++c) {
        os << table.checkpoints[c];
        for (const auto& row : table.rows)
            os << ',' << format_double(row.result.mean_regret[c]) << ','
               << format_double(row.result.se_regret[c]);
        const std::int64_t t = table.checkpoints[c];
        const auto emit = [&os](auto&& fn) {
            try {
                os << ',' << format_double(fn());
            } catch (const std::exception&) {
                os << ',';
            }
        };
        emit([&] { return thm1_bound(instance, thm1_eps, t).total; });
        emit([&] {
            return thm2_bound(static_cast<std::int64_t>(instance.num_arms()),
                              t, 1.0);
        });
        emit([&] { return lai_robbins_lower(instance, t).total; });
        emit([&] { return ucb1_upper(instance, t).total; });
        os << "\n";
    }
}

// check, inputs, lhs, rhs, margin, tolerance, pass, method
inline void write_verify_csv(std::ostream& os, const CheckSummary& summary) {
    os << "check,inputs,lhs,rhs,margin,tolerance,pass,method\n";
    for (const auto& r : summary.reports) {
        os << csv_escape(r.check) << ',' << csv_escape(r.inputs) << ','
           << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
           << format_double(r.margin) << ',' << format_double(r.tolerance)
           << ',' << (r.pass ? "true" : "false") << ',' << csv_escape(r.method)
           << "\n";
    }
}

inline nlohmann::json verify_summary_json(
    const std::vector<CheckSummary>& summaries) {
    nlohmann::json doc;
    std::int64_t checks = 0, failures = 0;
    nlohmann::json measured = nlohmann::json::object();
    nlohmann::json per_check = nlohmann::json::object();
    for (const auto& s : summaries) {
        std::int64_t local_failures = 0;
        for (const auto& r : s.reports) {
            ++checks;
            if (!r.pass) {
                ++failures;
                ++local_failures;
            }
        }
        per_check[s.name] = {{"reports", s.reports.size()},
                             {"failures", local_failures},
                             {"passed", s.passed}};
        for (const auto& [key, value] : s.measured)
            measured[s.name + "." + key] = value;
    }
    doc["checks"] = checks;
    doc["failures"] = failures;
    doc["measured"] = measured;
    doc["per_check"] = per_check;
    return doc;
}

}  // namespace tsb
