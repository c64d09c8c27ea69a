#include "pgather/batch.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace pgather {

using nlohmann::json;

RunReport execute(const RunConfig& config) {
  RunReport report;
  report.config = config;
  report.variant = dispatch(config.n, config.k, config.g);
  const auto initial = build_initial(config, start_pc(report.variant.tag));
  const int limit = config.round_limit.value_or(default_round_limit(config.n, config.g));
  try {
    report.result = run(initial, report.variant, config.adversary, limit, config.order);
    report.gathered = check_partial_gathering(report.result.final, config.g);
    report.bounds = check_bounds(report.result, report.variant);
  } catch (const GatheringError& e) {
    report.error = e.what();
  }
  return report;
}

std::string metrics_header() {
  std::string h =
      "schema_version,config_hash,n,k,g,variant,adversary,placement,seed,outcome,rounds,round_cap,total_moves,move_cap";
  for (int p = 0; p < kPhaseCount; ++p) h += std::string(",max_pass_") + to_string(static_cast<Phase>(p));
  for (int p = 0; p < kPhaseCount; ++p) h += std::string(",cap_pass_") + to_string(static_cast<Phase>(p));
  h += ",gathered,bounds_pass,pass";
  return h;
}

std::string metrics_row(const RunReport& r) {
  std::ostringstream os;
  const auto& c = r.config;
  os << kMetricsSchemaVersion << ',' << config_hash(c) << ',' << c.n << ',' << c.k << ',' << c.g << ','
     << to_string(r.variant.tag) << ',' << describe(c.adversary) << ',' << describe(c.placement) << ',' << c.seed
     << ',' << (r.error.empty() ? to_string(r.result.outcome) : "Error") << ',' << r.result.rounds_elapsed << ','
     << r.bounds.round_cap << ',' << r.result.total_moves << ',' << r.bounds.move_cap;
  for (const auto& b : r.bounds.per_phase) os << ',' << b.observed;
  for (const auto& b : r.bounds.per_phase) {
    os << ',';
    if (b.cap) os << *b.cap;
  }
  os << ',' << r.gathered << ',' << r.bounds.pass << ',' << r.pass();
  return os.str();
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

int run_once(const json& doc, const std::filesystem::path& out_dir, std::optional<std::uint64_t> seed_override,
             bool force_trace, std::ostream& log) {
  RunReport report;
  try {
    auto config = parse_run_config(doc, seed_override);
    if (force_trace) config.trace = true;
    report = execute(config);
  } catch (const Unsolvable& e) {
    log << "unsolvable: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    log << "malformed config: " << e.what() << '\n';
    return 3;
  }

  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "metrics.csv", metrics_header() + "\n" + metrics_row(report) + "\n");
  if (report.config.trace) write_file(out_dir / "trace.ndjson", serialize_trace(report.result.trace));

  if (!report.error.empty()) log << "run failed: " << report.error << '\n';
  log << to_string(report.variant.tag) << ' ' << to_string(report.result.outcome) << " rounds=" << report.result.rounds_elapsed
      << " moves=" << report.result.total_moves << " gathered=" << report.gathered
      << " bounds=" << (report.bounds.pass ? "ok" : "violated") << '\n';
  return report.pass() ? 0 : 1;
}

const std::vector<std::string> kAllKClasses{"b1_low", "b1_high", "b2_low", "b2_high", "b3_edge", "b3_full"};

std::optional<int> k_for_class(const std::string& k_class, int n, int g) {
  const int b1_lo = 2 * g + 1, b1_hi = 3 * g - 2;
  const int b2_lo = std::max(3 * g - 1, 2 * g + 1), b2_hi = 8 * g - 4;
  const int b3_lo = 8 * g - 3;
  if (k_class == "b1_low" || k_class == "b1_high") {
    if (b1_lo > b1_hi) return std::nullopt;
    return k_class == "b1_low" ? b1_lo : b1_hi;
  }
  if (k_class == "b2_low" || k_class == "b2_high") {
    if (b2_lo > b2_hi) return std::nullopt;
    return k_class == "b2_low" ? b2_lo : b2_hi;
  }
  if (k_class == "b3_edge") return b3_lo;
  if (k_class == "b3_full") {
    if (n < b3_lo) return std::nullopt;
    return n;
  }
  throw ConfigError("unknown k class '" + k_class + "'");
}

namespace {

std::vector<int> int_list(const json& grid, const char* key) {
  if (!grid.contains(key) || !grid.at(key).is_array()) throw ConfigError(std::string("grid needs a list '") + key + "'");
  std::vector<int> out;
  for (const auto& e : grid.at(key)) {
    if (!e.is_number_integer()) throw ConfigError(std::string("'") + key + "' entries must be integers");
    out.push_back(e.get<int>());
  }
  return out;
}

json list_or(const json& grid, const char* key, json fallback) {
  if (!grid.contains(key)) return fallback;
  if (!grid.at(key).is_array() || grid.at(key).empty())
    throw ConfigError(std::string("'") + key + "' must be a non-empty list");
  return grid.at(key);
}

}  // namespace

std::vector<GridCell> expand_grid(const json& grid) {
  if (!grid.is_object()) throw ConfigError("grid must be an object");
  const auto ns = int_list(grid, "n");
  const auto gs = int_list(grid, "g");
  std::vector<std::string> classes = kAllKClasses;
  if (grid.contains("k_classes")) {
    classes.clear();
    for (const auto& e : list_or(grid, "k_classes", {})) {
      if (!e.is_string()) throw ConfigError("k_classes entries must be strings");
      classes.push_back(e.get<std::string>());
    }
  }
  const json adversaries = list_or(grid, "adversaries", json::array({json{{"type", "none"}}}));
  const json placements = list_or(grid, "placements", json::array({"equidistant"}));
  list_or(grid, "seeds", json::array({0}));

  std::vector<GridCell> cells;
  for (int n : ns)
    for (int g : gs)
      for (const auto& kc : classes) {
        const auto k = k_for_class(kc, n, g);
        for (const auto& adv : adversaries)
          for (const auto& pl : placements) {
            GridCell cell{n, g, kc, k.value_or(0), adv, pl, ""};
            if (!k)
              cell.skip = "skipped-empty-range";
            else if (*k > n)
              cell.skip = "skipped-k-exceeds-n";
            else
              cell_config(cell, 0, grid);
            cells.push_back(std::move(cell));
          }
      }
  return cells;
}

RunConfig cell_config(const GridCell& cell, std::uint64_t seed, const json& grid) {
  json doc{{"n", cell.n}, {"k", cell.k}, {"g", cell.g}, {"adversary", cell.adversary},
           {"placement", cell.placement}, {"seed", seed}};
  for (const char* key : {"order", "round_limit", "trace"})
    if (grid.contains(key)) doc[key] = grid.at(key);
  return parse_run_config(doc);
}

std::vector<CellSummary> sweep(const json& grid, int jobs) {
  const auto cells = expand_grid(grid);
  std::vector<std::uint64_t> seeds;
  for (const auto& s : list_or(grid, "seeds", json::array({0}))) {
    if (!s.is_number_integer() || s.get<long long>() < 0) throw ConfigError("seeds must be non-negative integers");
    seeds.push_back(s.get<std::uint64_t>());
  }

  struct Task {
    std::size_t cell;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  std::vector<CellSummary> out(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    out[i].cell = cells[i];
    if (!cells[i].skip.empty()) continue;
    for (auto s : seeds) tasks.push_back({i, s});
  }

  std::vector<RunReport> reports(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      const auto config = cell_config(cells[tasks[t].cell], tasks[t].seed, grid);
      reports[t] = execute(config);
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < std::max(jobs, 1); ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (std::size_t t = 0; t < tasks.size(); ++t) {
    auto& cs = out[tasks[t].cell];
    auto& r = reports[t];
    if (cs.runs == 0) {
      cs.variant = to_string(r.variant.tag);
      cs.adversary_label = describe(r.config.adversary);
      cs.placement_label = describe(r.config.placement);
      cs.round_cap = r.bounds.round_cap;
      cs.move_cap = r.bounds.move_cap;
    }
    ++cs.runs;
    if (r.pass()) ++cs.passed;
    cs.max_rounds = std::max(cs.max_rounds, r.result.rounds_elapsed);
    cs.max_moves = std::max(cs.max_moves, r.result.total_moves);
    for (int p = 0; p < kPhaseCount; ++p) cs.max_passes[p] = std::max(cs.max_passes[p], r.bounds.per_phase[p].observed);
    cs.reports.push_back(std::move(r));
  }
  return out;
}

std::string summary_header() {
  std::string h = "schema_version,n,g,k_class,k,variant,adversary,placement,status,runs,passed,failed,max_rounds,"
                  "round_cap,max_moves,move_cap";
  for (int p = 0; p < kPhaseCount; ++p) h += std::string(",max_pass_") + to_string(static_cast<Phase>(p));
  return h;
}

std::string summary_row(const CellSummary& cs) {
  std::ostringstream os;
  const auto& c = cs.cell;
  std::string status = c.skip;
  if (status.empty()) status = cs.passed == cs.runs ? "ok" : "failed";
  std::string adversary = cs.adversary_label;
  std::string placement = cs.placement_label;
  if (!c.skip.empty()) {
    adversary = c.adversary.value("type", "?");
    placement = c.placement.is_string() ? c.placement.get<std::string>() : "custom";
  }
  os << kMetricsSchemaVersion << ',' << c.n << ',' << c.g << ',' << c.k_class << ',' << c.k << ',' << cs.variant << ','
     << adversary << ',' << placement << ',' << status << ',' << cs.runs << ',' << cs.passed << ','
     << cs.runs - cs.passed << ',' << cs.max_rounds << ',' << cs.round_cap << ',' << cs.max_moves << ','
     << cs.move_cap;
  for (int v : cs.max_passes) os << ',' << v;
  return os.str();
}

int run_sweep(const json& grid, const std::filesystem::path& out_dir, int jobs, std::ostream& log) {
  std::vector<CellSummary> cells;
  try {
    cells = sweep(grid, jobs);
  } catch (const ConfigError& e) {
    log << "malformed grid: " << e.what() << '\n';
    return 3;
  } catch (const Unsolvable& e) {
    log << "unsolvable cell: " << e.what() << '\n';
    return 2;
  }

  std::filesystem::create_directories(out_dir);
  const bool trace = grid.value("trace", false);
  if (trace) std::filesystem::create_directories(out_dir / "traces");
  std::string summary = summary_header() + "\n";
  std::string metrics = metrics_header() + "\n";
  int failed = 0, skipped = 0, runs = 0;
  for (const auto& cs : cells) {
    summary += summary_row(cs) + "\n";
    if (!cs.cell.skip.empty()) ++skipped;
    if (cs.passed != cs.runs) ++failed;
    runs += cs.runs;
    for (const auto& r : cs.reports) {
      metrics += metrics_row(r) + "\n";
      if (trace)
        write_file(out_dir / "traces" / (config_hash(r.config) + ".ndjson"), serialize_trace(r.result.trace));
      if (!r.error.empty()) log << "cell error: " << r.error << '\n';
    }
  }
  write_file(out_dir / "summary.csv", summary);
  write_file(out_dir / "metrics.csv", metrics);
  log << cells.size() << " cells, " << runs << " runs, " << failed << " failed cells, " << skipped << " skipped\n";
  return failed == 0 ? 0 : 1;
}

}  // namespace pgather
