// SPDX-License-Identifier: Apache-2.0
//
// sweepspice: batch design-space exploration for SPICE-simulated circuits.
// Subcommands mirror the pipeline stages: validate | sweep | rank | pareto |
// parse | report. Exit codes: 0 success, 1 validation error, 2 runtime or
// engine error, 3 I/O error.
#include <atomic>
#include <cmath>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sweepspice/engine.hpp"
#include "sweepspice/errors.hpp"
#include "sweepspice/metrics.hpp"
#include "sweepspice/netlist.hpp"
#include "sweepspice/quantity.hpp"
#include "sweepspice/ranker.hpp"
#include "sweepspice/rawfile.hpp"
#include "sweepspice/results.hpp"
#include "sweepspice/sweep.hpp"
#include "sweepspice/table.hpp"

namespace ssp = sweepspice;

namespace {

std::atomic<bool> interrupted{false};

void handle_sigint(int) { interrupted.store(true); }

// Quantity flags accept engineering suffixes ("40n", "5f") on the CLI only.
double quantity_arg(const std::string& text, const std::string& flag) {
  auto v = ssp::parse_quantity(text);
  if (!v)
    throw ssp::validation_error("flag " + flag + ": cannot parse quantity '" + text + "'");
  return *v;
}

struct stimulus_flags {
  std::string vddh, vddl, vin_high, vin_low, t_rise, t_fall, t_delay, freq, cload;

  void attach(CLI::App* cmd) {
    cmd->add_option("--vddh", vddh, "High supply rail (V)");
    cmd->add_option("--vddl", vddl, "Low supply rail (V)");
    cmd->add_option("--vin-high", vin_high, "Input pulse high level (V)");
    cmd->add_option("--vin-low", vin_low, "Input pulse low level (V)");
    cmd->add_option("--t-rise", t_rise, "Input rise time (s)");
    cmd->add_option("--t-fall", t_fall, "Input fall time (s)");
    cmd->add_option("--t-delay", t_delay, "Input pulse delay (s)");
    cmd->add_option("--freq", freq, "Input frequency (Hz)");
    cmd->add_option("--cload", cload, "Load capacitance (F)");
  }

  ssp::stimulus resolve() const {
    ssp::stimulus s;
    if (!vddh.empty()) s.v_ddh = quantity_arg(vddh, "--vddh");
    if (!vddl.empty()) s.v_ddl = quantity_arg(vddl, "--vddl");
    if (!vin_high.empty()) s.v_in_high = quantity_arg(vin_high, "--vin-high");
    if (!vin_low.empty()) s.v_in_low = quantity_arg(vin_low, "--vin-low");
    if (!t_rise.empty()) s.t_rise = quantity_arg(t_rise, "--t-rise");
    if (!t_fall.empty()) s.t_fall = quantity_arg(t_fall, "--t-fall");
    if (!t_delay.empty()) s.t_delay = quantity_arg(t_delay, "--t-delay");
    if (!freq.empty()) s.frequency = quantity_arg(freq, "--freq");
    if (!cload.empty()) s.c_load = quantity_arg(cload, "--cload");
    s.validate();
    return s;
  }
};

struct measure_flags {
  int settle_periods = 1;
  int window_periods = 2;
  std::string tstep;
  bool inverting = false;
  std::string eps_low, eps_high;

  void attach(CLI::App* cmd) {
    cmd->add_option("--settle-periods", settle_periods, "Periods skipped before measuring");
    cmd->add_option("--window-periods", window_periods, "Periods measured");
    cmd->add_option("--tstep", tstep, "Transient step (s); default period/1000");
    cmd->add_flag("--inverting,!--no-inverting", inverting,
                  "Treat the converter as inverting");
    cmd->add_option("--eps-low", eps_low, "Full-swing tolerance at the low rail (V)");
    cmd->add_option("--eps-high", eps_high, "Full-swing tolerance at the high rail (V)");
  }

  ssp::swing_tolerances tolerances() const {
    ssp::swing_tolerances eps;
    if (!eps_low.empty()) eps.eps_low = quantity_arg(eps_low, "--eps-low");
    if (!eps_high.empty()) eps.eps_high = quantity_arg(eps_high, "--eps-high");
    return eps;
  }
};

ssp::engine_config resolve_engine(const std::string& engine_path, bool mock,
                                  const std::string& model_include,
                                  const std::string& work_dir, double timeout_s,
                                  bool keep_artifacts) {
  if (mock && !engine_path.empty())
    throw ssp::validation_error("--mock and --engine are mutually exclusive");

  ssp::engine_config cfg;
  if (mock) {
    cfg.use_mock = true;
  } else if (!engine_path.empty()) {
    cfg = ssp::load_engine_config(engine_path);
  } else if (const char* env = std::getenv("SWEEPSPICE_ENGINE"); env && *env) {
    cfg.executable = env;
  } else {
    throw ssp::validation_error(
        "no engine selected: pass --engine <config.json>, --mock, or set SWEEPSPICE_ENGINE");
  }
  if (!model_include.empty())
    cfg.model_include = model_include;
  if (!work_dir.empty())
    cfg.work_dir = work_dir;
  if (timeout_s > 0)
    cfg.timeout_s = timeout_s;
  if (keep_artifacts)
    cfg.keep_artifacts = true;
  cfg.validate();
  return cfg;
}

void parse_shard_spec(const std::string& text, std::uint64_t& shard_id,
                      std::uint64_t& n_shards) {
  auto slash = text.find('/');
  if (slash == std::string::npos)
    throw ssp::validation_error("--shard expects I/N, got '" + text + "'");
  try {
    shard_id = std::stoull(text.substr(0, slash));
    n_shards = std::stoull(text.substr(slash + 1));
  } catch (const std::exception&) {
    throw ssp::validation_error("--shard expects I/N, got '" + text + "'");
  }
  if (n_shards == 0 || shard_id >= n_shards)
    throw ssp::validation_error("--shard " + text + ": need 0 <= I < N");
}

std::string thousands(std::uint64_t v) {
  std::string digits = std::to_string(v);
  std::string out;
  int count = 0;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    if (count && count % 3 == 0)
      out += ',';
    out += *it;
    ++count;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// validate

int cmd_validate(const std::vector<std::string>& configs,
                 const std::vector<std::string>& templates, const stimulus_flags& sf,
                 const measure_flags& mf) {
  if (!templates.empty() && templates.size() != configs.size())
    throw ssp::validation_error("need one --template per --config (or none)");

  const ssp::stimulus stim = sf.resolve();
  std::uint64_t total = 0;
  bool ok = true;

  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ssp::sweep_spec spec = ssp::load_sweep_config(configs[i]);
    const std::uint64_t count = spec.case_count();
    total += count;
    std::cout << "config " << configs[i] << ": " << spec.axes.size() << " axes, "
              << spec.variants.size() << " variant" << (spec.variants.size() == 1 ? "" : "s")
              << ", case count " << count << "\n";

    if (i < templates.size()) {
      const ssp::netlist_template tmpl = ssp::load_template(templates[i]);
      ssp::sim_directives sim;
      sim.settle_periods = mf.settle_periods;
      sim.measure_periods = mf.window_periods;
      if (!mf.tstep.empty())
        sim.t_step = quantity_arg(mf.tstep, "--tstep");

      try {
        std::vector<std::string> warnings;
        const ssp::case_assignment first = spec.case_by_index(0);
        const std::string netlist =
            ssp::render_netlist(tmpl, first, spec, stim, sim, {}, &warnings);
        for (const auto& w : warnings)
          std::cout << "  warning: " << w << "\n";
        std::cout << "  template " << tmpl.name << ": placeholders OK ("
                  << tmpl.required_placeholders.size() << " in template)\n";

        // Scratch estimate: netlist plus a rawfile of ~5 traces at the
        // transient step, per concurrently running case.
        const double t_step = sim.t_step > 0 ? sim.t_step : stim.period() / 1000.0;
        const std::uint64_t points =
            static_cast<std::uint64_t>(sim.n_periods() * stim.period() / t_step) + 1;
        const std::uint64_t bytes = netlist.size() + 512 + points * 5 * 8;
        std::cout << "  estimated scratch: ~" << (bytes + 1023) / 1024
                  << " KiB per in-flight case\n";
      } catch (const ssp::validation_error& e) {
        std::cout << "  error: " << e.what() << "\n";
        ok = false;
      }
    }
  }

  std::cout << "total case count " << total << " (" << thousands(total) << ")\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep

int cmd_sweep(const std::string& config_path, const std::string& template_path,
              const std::string& engine_path, bool mock, const std::string& model_include,
              const std::string& work_dir, double timeout_s, bool keep_artifacts,
              int parallelism, const std::string& shard_text, bool resume,
              std::string journal_path, const std::string& out_path,
              const std::string& format_text, std::uint64_t progress_every,
              const stimulus_flags& sf, const measure_flags& mf) {
  const ssp::sweep_spec spec = ssp::load_sweep_config(config_path);
  const ssp::netlist_template tmpl = ssp::load_template(template_path);
  const ssp::stimulus stim = sf.resolve();
  const ssp::engine_config engine_cfg =
      resolve_engine(engine_path, mock, model_include, work_dir, timeout_s, keep_artifacts);

  auto format = ssp::results_format_from(format_text);
  if (!format)
    throw ssp::validation_error("--format must be csv or jsonl, got '" + format_text + "'");

  ssp::sweep_options opts;
  opts.parallelism = parallelism;
  opts.resume = resume;
  if (journal_path.empty())
    journal_path = out_path + ".journal";
  opts.journal = journal_path;
  if (!shard_text.empty())
    parse_shard_spec(shard_text, opts.shard_id, opts.n_shards);
  opts.inverting = mf.inverting;
  opts.eps = mf.tolerances();
  opts.sim.settle_periods = mf.settle_periods;
  opts.sim.measure_periods = mf.window_periods;
  if (!mf.tstep.empty())
    opts.sim.t_step = quantity_arg(mf.tstep, "--tstep");
  opts.sim.model_include = engine_cfg.model_include.string();

  std::atomic<std::uint64_t> completed{0};
  const std::uint64_t shard_size =
      ssp::shard(spec, opts.n_shards, opts.shard_id).size();
  opts.on_result = [&](const ssp::case_result& r) {
    const std::uint64_t n = completed.fetch_add(1) + 1;
    if (progress_every && n % progress_every == 0)
      std::cerr << "progress: " << n << " cases done (last index " << r.index << ")\n";
  };
  opts.cancelled = [] { return interrupted.load(); };
  std::signal(SIGINT, handle_sigint);

  const ssp::sweep_outcome outcome = ssp::run_sweep(spec, tmpl, stim, engine_cfg, opts);

  // Partial results are always flushed, even on cancellation.
  ssp::results_header header;
  header.fingerprint = ssp::sweep_fingerprint(spec, tmpl.body);
  header.engine_desc = engine_cfg.describe();
  header.timestamp = ssp::current_timestamp();
  header.stim = stim;
  for (const auto& axis : spec.axes)
    header.axis_names.push_back(axis.name);

  std::vector<ssp::result_row> rows;
  rows.reserve(outcome.results.size());
  for (const auto& r : outcome.results)
    rows.push_back(ssp::row_from_result(spec, r));
  ssp::write_results(header, rows, out_path, *format);

  std::uint64_t ok_count = 0;
  for (const auto& r : outcome.results)
    if (r.status == ssp::case_status::ok)
      ++ok_count;
  std::cerr << "sweep: " << outcome.results.size() << "/" << shard_size
            << " cases in results (" << outcome.executed << " executed, " << outcome.skipped
            << " resumed, " << ok_count << " ok) -> " << out_path << "\n";

  if (outcome.cancelled) {
    std::cerr << "sweep: interrupted; resume with --resume --journal " << journal_path
              << "\n";
    return 2;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// rank / pareto / report

ssp::record_filter filter_from_flags(bool require_full_swing, bool require_ok) {
  ssp::record_filter f;
  f.require_ok = require_ok;
  f.require_full_swing = require_full_swing;
  return f;
}

void check_fingerprint(const ssp::results_header& header, const std::string& config_path,
                       const std::string& template_path) {
  if (config_path.empty())
    return;
  const ssp::sweep_spec spec = ssp::load_sweep_config(config_path);
  std::string body;
  if (!template_path.empty())
    body = ssp::load_template(template_path).body;
  const std::string expect = ssp::sweep_fingerprint(spec, body);
  if (expect != header.fingerprint)
    throw ssp::validation_error("results fingerprint " + header.fingerprint +
                                " does not match config fingerprint " + expect);
}

int cmd_rank(const std::string& results_path, const std::string& by, std::size_t k,
             bool require_full_swing, bool require_ok, const std::string& out_path,
             const std::string& format_text, const std::string& config_path,
             const std::string& template_path) {
  auto key = ssp::metric_key_from(by);
  if (!key)
    throw ssp::validation_error("--by must be p_avg, pdp or t_dmax, got '" + by + "'");

  auto [header, rows] = ssp::load_results(results_path);
  check_fingerprint(header, config_path, template_path);

  const ssp::record_filter filter = filter_from_flags(require_full_swing, require_ok);
  const auto kept = ssp::filter_records(rows, filter);
  const ssp::ranked_report report = ssp::rank(kept, *key, k, filter.describe());
  std::cout << ssp::render_table(report, header.axis_names);

  if (!out_path.empty()) {
    auto format = ssp::results_format_from(format_text);
    if (!format)
      throw ssp::validation_error("--format must be csv or jsonl");
    ssp::write_results(header, report.rows, out_path, *format);
  }
  return 0;
}

int cmd_pareto(const std::string& results_path, const std::string& keys_text,
               bool require_full_swing, bool require_ok, const std::string& out_path,
               const std::string& format_text) {
  std::vector<ssp::metric_key> keys;
  std::stringstream ss(keys_text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto key = ssp::metric_key_from(item);
    if (!key)
      throw ssp::validation_error("--keys: unknown metric '" + item + "'");
    keys.push_back(*key);
  }
  if (keys.empty())
    throw ssp::validation_error("--keys needs at least one metric");

  auto [header, rows] = ssp::load_results(results_path);
  const ssp::record_filter filter = filter_from_flags(require_full_swing, require_ok);
  const auto kept = ssp::filter_records(rows, filter);
  const auto front = ssp::pareto_front(kept, keys);

  ssp::ranked_report report;
  report.criterion = keys[0];
  report.filter_desc = filter.describe() + "; pareto keys: " + keys_text;
  report.k = front.size();
  report.rows = front;
  std::cout << ssp::render_table(report, header.axis_names);

  if (!out_path.empty()) {
    auto format = ssp::results_format_from(format_text);
    if (!format)
      throw ssp::validation_error("--format must be csv or jsonl");
    ssp::write_results(header, report.rows, out_path, *format);
  }
  return 0;
}

int cmd_report(const std::string& results_path, std::size_t k) {
  auto [header, rows] = ssp::load_results(results_path);

  std::size_t by_status[5] = {0, 0, 0, 0, 0};
  std::size_t swing_pass = 0;
  for (const auto& row : rows) {
    ++by_status[static_cast<int>(row.status)];
    if (row.metrics && row.metrics->full_swing)
      ++swing_pass;
  }
  std::cout << "results: " << results_path << "\n";
  std::cout << "engine: " << header.engine_desc << "\n";
  std::cout << "fingerprint: " << header.fingerprint << "\n";
  std::cout << "rows: " << rows.size() << " (ok " << by_status[0] << ", engine_error "
            << by_status[1] << ", timeout " << by_status[2] << ", parse_error "
            << by_status[3] << ", metric_error " << by_status[4] << "); full_swing "
            << swing_pass << "\n\n";

  const ssp::record_filter filter;
  const auto kept = ssp::filter_records(rows, filter);
  for (ssp::metric_key key :
       {ssp::metric_key::p_avg, ssp::metric_key::pdp, ssp::metric_key::t_dmax}) {
    const ssp::ranked_report report = ssp::rank(kept, key, k, filter.describe());
    std::cout << ssp::render_table(report, header.axis_names) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// parse

int cmd_parse(const std::string& rawfile_path, const std::string& dump_csv) {
  std::ifstream in(rawfile_path, std::ios::binary);
  if (!in)
    throw ssp::io_error("cannot open rawfile '" + rawfile_path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const auto plots = ssp::parse_rawfile(ss.str());

  for (std::size_t p = 0; p < plots.size(); ++p) {
    const auto& plot = plots[p];
    std::cout << "plot " << p << ": " << plot.plotname << " ("
              << (plot.is_complex ? "complex" : "real") << ", " << plot.n_vars()
              << " variables, " << plot.n_points() << " points)\n";
    for (std::size_t v = 0; v < plot.n_vars(); ++v) {
      const auto& var = plot.variables[v];
      std::cout << "  " << v << "\t" << var.name << "\t" << ssp::to_string(var.kind);
      if (plot.n_points() > 0 && !plot.is_complex) {
        double lo = plot.at(0, v), hi = plot.at(0, v);
        for (std::size_t i = 1; i < plot.n_points(); ++i) {
          lo = std::min(lo, plot.at(i, v));
          hi = std::max(hi, plot.at(i, v));
        }
        std::cout << "\t[" << ssp::format_display(lo) << ", " << ssp::format_display(hi)
                  << "]";
      }
      std::cout << "\n";
    }
  }

  if (!dump_csv.empty()) {
    if (plots.empty())
      throw ssp::validation_error("no plots to dump");
    const auto& plot = plots[0];
    std::ofstream out(dump_csv);
    if (!out)
      throw ssp::io_error("cannot write '" + dump_csv + "'");
    for (std::size_t v = 0; v < plot.n_vars(); ++v)
      out << (v ? "," : "") << plot.variables[v].name;
    out << "\n";
    for (std::size_t i = 0; i < plot.n_points(); ++i) {
      for (std::size_t v = 0; v < plot.n_vars(); ++v)
        out << (v ? "," : "") << ssp::format_full(plot.at(i, v));
      out << "\n";
    }
    std::cout << "dumped plot 0 to " << dump_csv << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"sweepspice: batch design-space exploration for SPICE-simulated circuits"};
  app.require_subcommand(1);

  // validate
  auto* validate = app.add_subcommand("validate", "Check configs and print case counts");
  std::vector<std::string> v_configs, v_templates;
  validate->add_option("--config", v_configs, "Sweep config JSON (repeatable)")->required();
  validate->add_option("--template", v_templates, "Netlist template (repeatable, zipped)");
  stimulus_flags v_stim;
  v_stim.attach(validate);
  measure_flags v_measure;
  v_measure.attach(validate);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the design-space sweep");
  std::string s_config, s_template, s_engine, s_model, s_workdir, s_shard, s_journal;
  std::string s_out = "results.csv", s_format = "csv";
  bool s_mock = false, s_resume = false, s_keep = false;
  int s_parallelism = 1;
  double s_timeout = 0.0;
  std::uint64_t s_progress = 1000;
  sweep->add_option("--config", s_config, "Sweep config JSON")->required();
  sweep->add_option("--template", s_template, "Netlist template")->required();
  sweep->add_option("--engine", s_engine, "Engine config JSON");
  sweep->add_flag("--mock", s_mock, "Use the built-in mock engine");
  sweep->add_option("--model", s_model, "Model card path for .include");
  sweep->add_option("--work-dir", s_workdir, "Scratch directory");
  sweep->add_option("--timeout", s_timeout, "Per-case engine timeout (s)");
  sweep->add_flag("--keep-artifacts", s_keep, "Keep per-case scratch directories");
  sweep->add_option("--parallelism", s_parallelism, "Worker count")->check(CLI::Range(1, 4096));
  sweep->add_option("--shard", s_shard, "I/N: run the I-th of N contiguous shards");
  sweep->add_flag("--resume", s_resume, "Honor an existing journal");
  sweep->add_option("--journal", s_journal, "Journal path (default <out>.journal)");
  sweep->add_option("--out", s_out, "Results file path");
  sweep->add_option("--format", s_format, "csv|jsonl");
  sweep->add_option("--progress-every", s_progress, "Progress line every N cases (0 = off)");
  stimulus_flags s_stim;
  s_stim.attach(sweep);
  measure_flags s_measure;
  s_measure.attach(sweep);

  // rank
  auto* rank_cmd = app.add_subcommand("rank", "Filter and rank a results file");
  std::string r_results, r_by = "p_avg", r_out, r_format = "jsonl", r_config, r_template;
  std::size_t r_k = 10;
  bool r_swing = true, r_ok = true;
  rank_cmd->add_option("results", r_results, "Results file")->required();
  rank_cmd->add_option("--by", r_by, "Criterion: p_avg|pdp|t_dmax");
  rank_cmd->add_option("-k,--top", r_k, "Rows to keep");
  rank_cmd->add_flag("--require-full-swing,!--no-require-full-swing", r_swing,
                     "Keep only full-swing solutions (default on)");
  rank_cmd->add_flag("--require-ok,!--no-require-ok", r_ok,
                     "Keep only status=ok rows (default on)");
  rank_cmd->add_option("--out", r_out, "Also write ranked rows to this file");
  rank_cmd->add_option("--format", r_format, "csv|jsonl for --out");
  rank_cmd->add_option("--config", r_config, "Cross-check results fingerprint against config");
  rank_cmd->add_option("--template", r_template, "Template for the fingerprint cross-check");

  // pareto
  auto* pareto = app.add_subcommand("pareto", "Multi-objective non-dominated front");
  std::string p_results, p_keys = "p_avg,t_dmax", p_out, p_format = "jsonl";
  bool p_swing = true, p_ok = true;
  pareto->add_option("results", p_results, "Results file")->required();
  pareto->add_option("--keys", p_keys, "Comma-separated metrics, all minimized");
  pareto->add_flag("--require-full-swing,!--no-require-full-swing", p_swing,
                   "Keep only full-swing solutions (default on)");
  pareto->add_flag("--require-ok,!--no-require-ok", p_ok,
                   "Keep only status=ok rows (default on)");
  pareto->add_option("--out", p_out, "Also write front rows to this file");
  pareto->add_option("--format", p_format, "csv|jsonl for --out");

  // parse
  auto* parse = app.add_subcommand("parse", "Inspect a raw waveform file");
  std::string w_rawfile, w_dump;
  parse->add_option("rawfile", w_rawfile, "Rawfile path")->required();
  parse->add_option("--dump-csv", w_dump, "Dump the first plot as CSV");

  // report
  auto* report = app.add_subcommand("report", "Summary plus top-k tables for all criteria");
  std::string t_results;
  std::size_t t_k = 8;
  report->add_option("results", t_results, "Results file")->required();
  report->add_option("-k,--top", t_k, "Rows per table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0)
      return app.exit(e); // --help
    app.exit(e);
    return 1;
  }

  try {
    if (app.got_subcommand(validate))
      return cmd_validate(v_configs, v_templates, v_stim, v_measure);
    if (app.got_subcommand(sweep))
      return cmd_sweep(s_config, s_template, s_engine, s_mock, s_model, s_workdir, s_timeout,
                       s_keep, s_parallelism, s_shard, s_resume, s_journal, s_out, s_format,
                       s_progress, s_stim, s_measure);
    if (app.got_subcommand(rank_cmd))
      return cmd_rank(r_results, r_by, r_k, r_swing, r_ok, r_out, r_format, r_config,
                      r_template);
    if (app.got_subcommand(pareto))
      return cmd_pareto(p_results, p_keys, p_swing, p_ok, p_out, p_format);
    if (app.got_subcommand(parse))
      return cmd_parse(w_rawfile, w_dump);
    if (app.got_subcommand(report))
      return cmd_report(t_results, t_k);
  } catch (const ssp::validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ssp::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
