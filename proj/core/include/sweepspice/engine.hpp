// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metrics.hpp"
#include "netlist.hpp"
#include "sweep.hpp"

namespace sweepspice {

struct engine_config {
  std::filesystem::path executable;
  // argv after the executable; {netlist} and {rawfile} are substituted.
  std::vector<std::string> args_template{"-b", "-r", "{rawfile}", "{netlist}"};
  std::filesystem::path model_include;
  std::filesystem::path work_dir = "sweep_work";
  double timeout_s = 60.0;
  bool keep_artifacts = false;
  bool use_mock = false;
  std::map<std::string, std::string> env;

  void validate() const;
  std::string describe() const;
};

engine_config parse_engine_config(const std::string& json_text, const std::string& origin);
engine_config load_engine_config(const std::filesystem::path& path);

enum class case_status { ok, engine_error, timeout, parse_error, metric_error };

std::string_view to_string(case_status s);
std::optional<case_status> case_status_from(std::string_view s);

struct case_result {
  std::uint64_t index = 0;
  case_status status = case_status::engine_error;
  std::optional<metrics_record> metrics;
  std::string diagnostics;
};

// One simulation: netlist text in, rawfile bytes out. Implementations must
// be safe to call concurrently from several workers.
class engine {
public:
  virtual ~engine() = default;
  virtual std::string run(const std::string& netlist, std::uint64_t case_index) = 0;
  virtual std::string describe() const = 0;
};

// Spawns the configured executable per case under work_dir/case_<index>/,
// captures stdout+stderr to engine.log, enforces the timeout.
std::unique_ptr<engine> make_process_engine(const engine_config& cfg);

// Deterministic closed-form stand-in for SPICE (model in docs/mock_engine.md).
std::unique_ptr<engine> make_mock_engine(const engine_config& cfg);

std::unique_ptr<engine> make_engine(const engine_config& cfg);

// The mock's pure core: reads the parameter comment block emitted by
// render_netlist and synthesizes a rawfile.
std::string mock_engine_run(const std::string& netlist);

// One-shot convenience around make_engine: returns rawfile bytes.
std::string run_case(const engine_config& cfg, const std::string& netlist,
                     std::uint64_t case_index);

struct sweep_options {
  int parallelism = 1;
  std::filesystem::path journal; // empty = no journal, no resume
  bool resume = false;           // false truncates any existing journal
  std::uint64_t n_shards = 1;
  std::uint64_t shard_id = 0;

  bool inverting = false;
  swing_tolerances eps;
  sim_directives sim;

  // Streamed in completion order from the aggregator thread.
  std::function<void(const case_result&)> on_result;
  // Cooperative cancellation, polled between case dispatches.
  std::function<bool()> cancelled;
};

struct sweep_outcome {
  std::vector<case_result> results; // sorted by case index
  std::uint64_t executed = 0;       // cases run this invocation
  std::uint64_t skipped = 0;        // journaled-ok cases carried over
  bool cancelled = false;
};

// Runs every non-journaled case of the shard exactly once on a pool of
// parallelism workers (render -> run -> parse -> measure per worker).
// Per-case failures become non-ok results and never abort the sweep. The
// result set, keyed by case index, is invariant under parallelism and
// completion order.
sweep_outcome run_sweep(const sweep_spec& spec, const netlist_template& tmpl,
                        const stimulus& stim, engine& eng, const sweep_options& opts);

sweep_outcome run_sweep(const sweep_spec& spec, const netlist_template& tmpl,
                        const stimulus& stim, const engine_config& cfg,
                        const sweep_options& opts);

} // namespace sweepspice
