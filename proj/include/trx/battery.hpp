#pragma once

#include "trx/models.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace trx {

struct SuiteSettings {
  std::uint64_t seed = 1;
  TransversalityOptions transversality;
  double sup_tol = 0.25;
  int max_trials = 10;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  /// Informational: a verdict that depends on the chosen tolerances.
  bool flagged = false;
  nlohmann::json metrics = nlohmann::json::object();
  std::string error_code;
  std::string error_message;
  double seconds = 0.0;
};

/// Extension of data induced by random global polynomials (n <= 4, k <= n):
/// returns {exactness against the polynomial, telescoping against face data}.
std::pair<CheckResult, CheckResult> check_corner_extension(const SuiteSettings& s);

/// Twenty non-transverse inputs pushed through perturb_to_transverse.
CheckResult check_perturbation_contract(const SuiteSettings& s);

/// Fifty random transverse cubic 3-simplices in the plane against the origin.
CheckResult check_cocycle_zero(const SuiteSettings& s);

/// Longitude, meridian and tangent longitude cycles against the meridian.
CheckResult check_torus_duality(const SuiteSettings& s);

/// p o i = id, endpoints of H, naturality, constancy of tracks.
CheckResult check_retraction_identities(const SuiteSettings& s);

/// Complementary-dimension scenarios have no boundary intersections.
CheckResult check_stratum_vacuity(const SuiteSettings& s);

/// Near-tangent and tangent crossings judged at the configured rank
/// tolerance and at the default one; flags a verdict change.
CheckResult check_rank_sensitivity(const SuiteSettings& s);

std::vector<CheckResult> run_battery(const SuiteSettings& s);

/// Report with one entry per check; wall-clock data lives under "timings" only.
nlohmann::json battery_report(const SuiteSettings& s, const std::vector<CheckResult>& results);

/// Copy of a report without its "timings" member.
nlohmann::json strip_timings(const nlohmann::json& report);

}  // namespace trx
