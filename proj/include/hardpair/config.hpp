#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hardpair/dynamics.hpp"

namespace hardpair {

/// Parsed experiment file. Field names follow the JSON schema in README.md.
struct RunConfig {
  nlohmann::json raw;
  std::string hash;  ///< FNV-1a of the canonical dump, 16 hex digits
  Body body = make_disk(1.0);
  ScatteringFamily family;
  std::vector<ScatteringFamily> families;
  std::optional<State> initial;
  double T = 1.0;
  SimOptions sim;
  std::uint64_t seed = 0;
  int samples = 10000;
  std::optional<Beta> beta;
  Vector2d bulk_velocity = Vector2d::Zero();
  double temperature = 1.0;
};

/// Field-level validation; throws ValidationError naming the offending path.
Body parse_body(const nlohmann::json& j, const std::string& path = "body");
LineField parse_line_field(const nlohmann::json& j, const std::string& path = "line_field");
ScatteringFamily parse_family(const nlohmann::json& j, const std::string& path = "family");
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& file);

std::string config_hash(const nlohmann::json& j);

nlohmann::json to_json(const Vector6d& v);
nlohmann::json to_json(const Ledger& l);

}  // namespace hardpair
