#pragma once

#include <json.hpp>
#include <optional>
#include <string>

#include "cstarmod/report.hpp"

namespace cstarmod::harness {

using nlohmann::json;

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    std::optional<double> tol;
    bool no_timestamp = false;
    std::string csv_path;
};

struct RunOutcome {
    json report;
    bool passed = false;
};

/// Dispatch on config["kind"]: axioms, cstar_class, contraction, fixed_point,
/// integral, positivity. Flag overrides take precedence over config fields.
RunOutcome run_config(const json& config, const RunOptions& options);

json check_to_json(const CheckResult& check);
json value_item(const std::string& id, bool passed, const json& value, const std::string& note = "");

/// Wrap assembled result items into the report envelope (schema version,
/// version string, scenario echo, optional timing).
json assemble_report(const json& scenario_echo, json results, bool passed,
                     const RunOptions& options, double wall_ms);

} // namespace cstarmod::harness
