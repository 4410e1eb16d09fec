#pragma once

#include "trx/models.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace trx {

inline constexpr int kSchemaVersion = 1;

struct Tolerances {
  double tol_rank = 1e-6;
  double tau_root = 1e-10;
  double sup_tol = 0.25;
};

struct NamedSimplex {
  std::string id;
  SmoothSimplexMap map;
};

struct NamedChain {
  std::string name;
  int dim = 0;
  std::vector<std::pair<long, std::string>> terms;  // coefficients on simplex ids
};

/// Batch of random transverse cubic 3-simplices in the plane.
struct CubicGenerator {
  std::string name;
  std::string member;
  int count = 0;
  std::uint64_t seed = 0;
};

struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 1;
  ManifoldPtr manifold;
  TCollection members;
  std::vector<NamedSimplex> simplices;
  std::vector<NamedChain> chains;
  std::vector<CubicGenerator> generators;
  Tolerances tolerances;
  int max_trials = 10;
  nlohmann::json steps = nlohmann::json::array();

  TransversalityOptions transversality() const;
  RetractionOptions retraction() const;
  const CornerManifold& member(const std::string& name) const;
};

/// Validates and builds a scenario. Throws SchemaError with a path-like
/// location on malformed input.
ScenarioConfig parse_config(const nlohmann::json& doc);

ScenarioConfig load_config(const std::string& path);

/// Dense polynomial: {"nvars": n, "degree": D, "coeffs": [...]} with
/// coefficients in graded order of graded_monomials(n, D).
Polynomial parse_polynomial(const nlohmann::json& j, int expected_nvars, const std::string& where);
nlohmann::json polynomial_to_json(const Polynomial& p);

}  // namespace trx
