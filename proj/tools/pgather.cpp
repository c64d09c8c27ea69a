#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pgather/batch.hpp"

namespace {

std::optional<nlohmann::json> load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << '\n';
    return std::nullopt;
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "malformed config: " << e.what() << '\n';
    return std::nullopt;
  }
}

std::string out_dir(const std::string& flag) {
  if (const char* env = std::getenv("PGATHER_OUT_DIR"); env && *env) return env;
  return flag;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial gathering on 1-interval connected rings"};
  app.require_subcommand(1);

  std::string config_path, out = "out";
  bool trace = false;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("--config", config_path, "Run config (JSON)")->required();
  run->add_option("--out", out, "Output directory (PGATHER_OUT_DIR overrides)");
  run->add_flag("--trace", trace, "Write trace.ndjson");
  run->add_option("--seed", seed, "Override the config seed");

  std::string grid_path;
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid");
  sweep->add_option("--config", grid_path, "Grid config (JSON)")->required();
  sweep->add_option("--out", out, "Output directory (PGATHER_OUT_DIR overrides)");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (*run) {
    const auto doc = load(config_path);
    if (!doc) return 3;
    return pgather::run_once(*doc, out_dir(out), seed, trace, std::cerr);
  }
  const auto doc = load(grid_path);
  if (!doc) return 3;
  return pgather::run_sweep(*doc, out_dir(out), jobs, std::cerr);
}
