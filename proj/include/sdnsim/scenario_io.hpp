#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sdnsim/engine.hpp"

namespace sdnsim {

// Scenario/ruleset files that cannot be read at all.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Built-in rules shipped with the stock scenarios (same content as
// rules/default.rules).
std::string_view default_ruleset_text();

// Parses a ruleset-variable value: "any", a dotted quad, or a CIDR block.
AddressSpec parse_address_value(const std::string& name, const std::string& value);

// Parses a scenario document. Unknown keys, wrong types, and missing required
// fields throw ValidationError; rules-file reads go through `base_dir`.
Scenario scenario_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

struct ScenarioLoad {
    Scenario scenario;
    std::vector<std::string> violations;  // validate_scenario output
};

// Reads, parses, and validates a scenario file. I/O and JSON syntax problems
// throw IoError; document-shape problems throw ValidationError; semantic
// violations are returned for the caller to report.
ScenarioLoad load_scenario_file(const std::filesystem::path& path);

// Built-in demos: "icmp-flood", "syn-flood", "benign". Unknown names throw
// ValidationError.
Scenario make_demo_scenario(std::string_view name);
std::vector<std::string> demo_names();

// Stable serialization: fixed key order, times as decimal seconds at
// microsecond precision. Byte-identical for identical reports.
nlohmann::ordered_json report_to_json(const SimulationReport& report);
std::string report_to_string(const SimulationReport& report);

}  // namespace sdnsim
