#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "secchain/metrics.hpp"
#include "secchain/simengine.hpp"
#include "secchain/topology.hpp"

namespace secchain {

struct RunOptions {
  std::optional<uint64_t> seed;
  std::optional<double> duration_s;
  // Dotted-path config overrides, e.g. "timers.node_create_latency_s=2".
  // Array segments address by index or by element id ("groups.waf.…").
  std::vector<std::string> overrides;
};

struct VariantResult {
  std::string variant;  // empty for single-document scenarios
  ScenarioConfig cfg;
  SimResult sim;
  uint64_t workload_hash = 0;
};

struct ScenarioResult {
  std::string name;
  bool multi = false;  // scenario document declared named variants
  std::vector<VariantResult> variants;
};

// Built-in scenario documents (shipped as config text, not code).
const char* builtin_scenario(const std::string& name);
const std::vector<std::string>& builtin_scenario_names();

// Hash of everything that determines the injected workload (seed, duration,
// workload section); `compare` refuses runs whose hashes differ.
uint64_t workload_hash(const ScenarioConfig& cfg);

// Loads a scenario by built-in name or config-file path, applies options,
// and runs every variant. Throws ConfigError subclasses for bad input and
// SimAbort when a simulation exceeds its event cap.
ScenarioResult run_scenario(const std::string& name_or_path,
                            const RunOptions& opts);

// Renderers. CSV columns exactly `time_s,scenario,series,value`; the scenario
// column is "<name>/<variant>" for multi-variant runs. Log lines are
// tab-separated; sources gain a "<variant>/" prefix in the combined file.
std::string render_metrics_csv(const ScenarioResult& r);
std::string render_logs_tsv(const ScenarioResult& r);
std::string render_summary_json(const ScenarioResult& r);

// Writes metrics.csv, log.tsv, summary.json (and per-variant subdirectories
// with config.json and rules.txt) under out_dir, creating it if needed.
void write_outputs(const ScenarioResult& r, const std::string& out_dir);

// `logs` subcommand: parse a log file, apply the conjunctive filter, return
// matching lines. Throws ConfigError on unreadable files or malformed lines.
std::string query_log_file(const std::string& path, const LogFilter& filter);

// `compare` subcommand over two run directories (or summary.json paths).
// Pairs variants by name (or the sole variant on each side), verifies seed and
// workload hash, and reports mean latency / throughput overhead percentages.
std::string render_compare(const std::string& run_dir,
                           const std::string& baseline_dir);

struct CompareRow {
  std::string label;
  double latency_run = 0, latency_baseline = 0, latency_overhead_pct = 0;
  double throughput_run = 0, throughput_baseline = 0,
         throughput_overhead_pct = 0;
};

// Core of `compare` for in-process use: run vs baseline variant.
CompareRow compare_variants(const VariantResult& run,
                            const VariantResult& baseline);

// Full CLI (secchain run|logs|compare). Returns the process exit code:
// 0 success, 2 configuration error, 3 simulation abort.
int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err);

}  // namespace secchain
