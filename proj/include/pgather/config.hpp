#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgather/adversary.hpp"
#include "pgather/engine.hpp"

namespace pgather {

/// Malformed run or grid document.
class ConfigError : public GatheringError {
 public:
  using GatheringError::GatheringError;
};

struct PlacementSpec {
  enum class Kind : std::uint8_t { Explicit, Equidistant, Clustered, Random };
  Kind kind = Kind::Equidistant;
  std::vector<NodeIndex> nodes;  // Explicit only
  std::uint64_t seed = 0;        // Random only
  bool operator==(const PlacementSpec&) const = default;
};

std::string describe(const PlacementSpec& spec);

/// Start nodes for agents 0..k-1.
std::vector<NodeIndex> resolve_placement(const PlacementSpec& spec, int n, int k);

struct RunConfig {
  int n = 0;
  int k = 0;
  int g = 0;
  PlacementSpec placement;
  std::optional<std::vector<AgentId>> ids;  // ascending 0..k-1 when absent
  AdversarySpec adversary = NoneMissing{};
  std::uint64_t seed = 0;
  std::optional<int> round_limit;
  OrderPolicy order;
  bool trace = false;
};

/// Parses a run document. `seed_override` replaces the document's seed before
/// seed-derived fields are resolved. Throws ConfigError.
RunConfig parse_run_config(const nlohmann::json& doc, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Adversary object of a run or grid document for ring size n.
AdversarySpec parse_adversary(const nlohmann::json& doc, int n, std::uint64_t default_seed);

/// Fully resolved document; parse_run_config(to_json(c)) == c.
nlohmann::json to_json(const RunConfig& config);

/// FNV-1a 64 over the canonical JSON text, as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Initial configuration described by `config`. Throws ConfigError for
/// placement/id lists that do not fit.
Configuration build_initial(const RunConfig& config, Pc start);

}  // namespace pgather
