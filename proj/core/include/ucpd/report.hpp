#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "ucpd/detect.hpp"
#include "ucpd/simulate.hpp"

namespace ucpd {

// JSON forms. Config readers throw ConfigError naming the offending field,
// e.g. "generator.phi: must satisfy |phi| < 1".

nlohmann::json to_json(const TestConfig& config);
nlohmann::json to_json(const GeneratorSpec& spec);
nlohmann::json to_json(const McConfig& config);
nlohmann::json to_json(const TestOutcome& outcome);
nlohmann::json to_json(const McReport& report);

TestConfig test_config_from_json(const nlohmann::json& j, const std::string& path = "test");
GeneratorSpec generator_from_json(const nlohmann::json& j, const std::string& path = "generator");
McConfig mc_config_from_json(const nlohmann::json& j);
TestOutcome outcome_from_json(const nlohmann::json& j);
McReport report_from_json(const nlohmann::json& j);

inline constexpr const char* kCsvHeader =
    "experiment,statistic,quantity,n,runs,alpha,tau,prob,estimate,std_error,reference";

/// One row per cell; absent fields are empty. Deterministic formatting.
void write_csv(std::ostream& os, const McReport& report, bool header = true);

/// Human-readable summary of a test outcome.
std::string to_text(const TestOutcome& outcome);

}  // namespace ucpd
