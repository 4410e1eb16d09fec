#pragma once

#include "trx/battery.hpp"
#include "trx/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace trx {

struct ScenarioOutcome {
  nlohmann::json report;
  bool passed = false;
};

/// Executes the configured steps against one family. Library errors raised by
/// a step are recorded in that step's entry; CSV tables go to `csv_dir` when set.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::optional<std::string>& csv_dir = std::nullopt);

SuiteSettings suite_settings(const ScenarioConfig& cfg);

/// The verification battery under the configured seed and tolerances.
ScenarioOutcome verify_suite(const ScenarioConfig& cfg);

}  // namespace trx
