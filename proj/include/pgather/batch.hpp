#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pgather/config.hpp"
#include "pgather/verify.hpp"

namespace pgather {

inline constexpr int kMetricsSchemaVersion = 1;

struct RunReport {
  RunConfig config;
  ProtocolVariant variant;
  ExecutionResult result;
  BoundReport bounds;
  bool gathered = false;
  std::string error;  // engine or protocol failure, empty if none

  bool pass() const {
    return error.empty() && result.outcome == Outcome::AllTerminated && gathered && bounds.pass;
  }
};

/// Dispatches and runs one configuration. Throws Unsolvable or ConfigError;
/// failures inside the run are captured in RunReport::error.
RunReport execute(const RunConfig& config);

std::string metrics_header();
std::string metrics_row(const RunReport& report);

/// Exit status of the `run` subcommand: 0 pass, 1 failed check, 2 unsolvable,
/// 3 malformed config. Writes metrics.csv and, if tracing, trace.ndjson.
int run_once(const nlohmann::json& doc, const std::filesystem::path& out_dir,
             std::optional<std::uint64_t> seed_override, bool force_trace, std::ostream& log);

/// One (n, g, k class, adversary, placement) combination of a grid.
struct GridCell {
  int n = 0;
  int g = 0;
  std::string k_class;
  int k = 0;
  nlohmann::json adversary;
  nlohmann::json placement;
  std::string skip;  // non-empty if the cell is not run
};

/// k for a named class ("b1_low", "b1_high", "b2_low", "b2_high", "b3_edge",
/// "b3_full"), or nullopt if the class range is empty for (n, g).
std::optional<int> k_for_class(const std::string& k_class, int n, int g);
extern const std::vector<std::string> kAllKClasses;

std::vector<GridCell> expand_grid(const nlohmann::json& grid);

/// RunConfig of one cell for one seed.
RunConfig cell_config(const GridCell& cell, std::uint64_t seed, const nlohmann::json& grid);

struct CellSummary {
  GridCell cell;
  std::string variant;
  std::string adversary_label;
  std::string placement_label;
  int runs = 0;
  int passed = 0;
  int max_rounds = 0;
  int round_cap = 0;
  long long max_moves = 0;
  long long move_cap = 0;
  std::array<int, kPhaseCount> max_passes{};
  std::vector<RunReport> reports;
};

/// Runs every cell over the grid's seeds on `jobs` worker threads; results
/// come back in cell order.
std::vector<CellSummary> sweep(const nlohmann::json& grid, int jobs);

std::string summary_header();
std::string summary_row(const CellSummary& cell);

/// Writes summary.csv and metrics.csv (plus traces/ if enabled). Nonzero iff
/// any cell failed; 3 for a malformed grid.
int run_sweep(const nlohmann::json& grid, const std::filesystem::path& out_dir, int jobs, std::ostream& log);

}  // namespace pgather
