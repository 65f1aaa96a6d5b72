// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <condition_variable>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"
#include "sweepspice/rawfile.hpp"

extern char** environ;

namespace sweepspice {

namespace fs = std::filesystem;
using json = nlohmann::json;

void engine_config::validate() const {
  if (!(timeout_s > 0.0))
    throw validation_error("engine config: timeout must be positive");
  if (!use_mock && executable.empty())
    throw validation_error("engine config: no executable and mock not selected");
  int netlist_tokens = 0;
  for (const auto& arg : args_template)
    if (arg.find("{netlist}") != std::string::npos)
      ++netlist_tokens;
  if (!use_mock && netlist_tokens != 1)
    throw validation_error("engine config: args_template must contain {netlist} exactly once");
}

std::string engine_config::describe() const {
  if (use_mock)
    return "mock";
  std::string out = executable.string();
  for (const auto& arg : args_template)
    out += " " + arg;
  return out;
}

engine_config parse_engine_config(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw validation_error(origin + ": not valid JSON: " + e.what());
  }
  engine_config cfg;
  if (j.contains("executable"))
    cfg.executable = j["executable"].get<std::string>();
  if (j.contains("args")) {
    cfg.args_template.clear();
    for (const auto& a : j["args"])
      cfg.args_template.push_back(a.get<std::string>());
  }
  if (j.contains("model_include"))
    cfg.model_include = j["model_include"].get<std::string>();
  if (j.contains("work_dir"))
    cfg.work_dir = j["work_dir"].get<std::string>();
  if (j.contains("timeout_s"))
    cfg.timeout_s = j["timeout_s"].get<double>();
  if (j.contains("keep_artifacts"))
    cfg.keep_artifacts = j["keep_artifacts"].get<bool>();
  if (j.contains("mock"))
    cfg.use_mock = j["mock"].get<bool>();
  if (j.contains("env"))
    for (const auto& [k, v] : j["env"].items())
      cfg.env[k] = v.get<std::string>();
  cfg.validate();
  return cfg;
}

engine_config load_engine_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot open engine config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_engine_config(ss.str(), path.string());
}

std::string_view to_string(case_status s) {
  switch (s) {
  case case_status::ok: return "ok";
  case case_status::engine_error: return "engine_error";
  case case_status::timeout: return "timeout";
  case case_status::parse_error: return "parse_error";
  case case_status::metric_error: return "metric_error";
  }
  return "engine_error";
}

std::optional<case_status> case_status_from(std::string_view s) {
  if (s == "ok")
    return case_status::ok;
  if (s == "engine_error")
    return case_status::engine_error;
  if (s == "timeout")
    return case_status::timeout;
  if (s == "parse_error")
    return case_status::parse_error;
  if (s == "metric_error")
    return case_status::metric_error;
  return std::nullopt;
}

namespace {

std::string read_file_or_empty(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in)
    return {};
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tail_of(const std::string& text, std::size_t max_bytes = 800) {
  if (text.size() <= max_bytes)
    return text;
  return "..." + text.substr(text.size() - max_bytes);
}

struct spawn_outcome {
  int exit_code = -1;
  bool timed_out = false;
};

// fork/exec with cwd, stdout+stderr redirected to log_path, stdin from
// /dev/null, and a SIGKILL timeout. Only async-signal-safe calls happen
// between fork and exec.
spawn_outcome spawn_and_wait(const std::vector<std::string>& argv, const fs::path& cwd,
                             const fs::path& log_path, double timeout_s,
                             const std::map<std::string, std::string>& extra_env) {
  std::vector<std::string> env_store;
  for (char** e = environ; *e; ++e) {
    std::string_view entry(*e);
    const auto key = entry.substr(0, entry.find('='));
    if (extra_env.count(std::string(key)))
      continue;
    env_store.emplace_back(entry);
  }
  for (const auto& [k, v] : extra_env)
    env_store.push_back(k + "=" + v);

  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv)
    cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);
  std::vector<char*> cenv;
  cenv.reserve(env_store.size() + 1);
  for (const auto& e : env_store)
    cenv.push_back(const_cast<char*>(e.c_str()));
  cenv.push_back(nullptr);

  const std::string cwd_str = cwd.string();
  const std::string log_str = log_path.string();

  const int log_fd = ::open(log_str.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (log_fd < 0)
    throw io_error("cannot open engine log '" + log_str + "': " + std::strerror(errno));
  const int null_fd = ::open("/dev/null", O_RDONLY);

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(log_fd);
    if (null_fd >= 0)
      ::close(null_fd);
    throw engine_error(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    if (::chdir(cwd_str.c_str()) != 0)
      _exit(126);
    if (null_fd >= 0)
      ::dup2(null_fd, 0);
    ::dup2(log_fd, 1);
    ::dup2(log_fd, 2);
    ::execve(cargv[0], cargv.data(), cenv.data());
    // PATH lookup fallback when the executable is a bare name.
    ::execvpe(cargv[0], cargv.data(), cenv.data());
    const char* msg = "sweepspice: failed to execute engine executable\n";
    ssize_t ignored = ::write(log_fd, msg, std::strlen(msg));
    (void)ignored;
    _exit(127);
  }

  ::close(log_fd);
  if (null_fd >= 0)
    ::close(null_fd);

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_s);
  spawn_outcome out;
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid)
      break;
    if (r < 0 && errno != EINTR)
      throw engine_error(std::string("waitpid failed: ") + std::strerror(errno));
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      out.timed_out = true;
      return out;
    }
    std::this_thread::sleep_for(std::chrono::microseconds(200));
  }
  if (WIFEXITED(status))
    out.exit_code = WEXITSTATUS(status);
  else if (WIFSIGNALED(status))
    out.exit_code = 128 + WTERMSIG(status);
  return out;
}

class process_engine final : public engine {
public:
  explicit process_engine(engine_config cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

  std::string run(const std::string& netlist, std::uint64_t case_index) override {
    const fs::path case_dir = cfg_.work_dir / ("case_" + std::to_string(case_index));
    std::error_code ec;
    fs::create_directories(case_dir, ec);
    if (ec)
      throw io_error("cannot create scratch dir '" + case_dir.string() + "': " + ec.message());

    struct scratch_guard {
      const fs::path& dir;
      bool keep;
      ~scratch_guard() {
        if (!keep) {
          std::error_code e;
          fs::remove_all(dir, e);
        }
      }
    } guard{case_dir, cfg_.keep_artifacts};

    const fs::path netlist_path = case_dir / "case.sp";
    {
      std::ofstream out(netlist_path, std::ios::binary);
      if (!out)
        throw io_error("cannot write netlist '" + netlist_path.string() + "'");
      out << netlist;
    }

    const std::string netlist_name = "case.sp";
    const std::string rawfile_name = "sim.raw";
    std::vector<std::string> argv;
    argv.push_back(cfg_.executable.string());
    for (auto arg : cfg_.args_template) {
      for (const auto& [token, repl] :
           {std::pair<std::string, const std::string&>{"{netlist}", netlist_name},
            std::pair<std::string, const std::string&>{"{rawfile}", rawfile_name}}) {
        for (std::size_t pos = arg.find(token); pos != std::string::npos;
             pos = arg.find(token))
          arg.replace(pos, token.size(), repl);
      }
      argv.push_back(std::move(arg));
    }

    const fs::path exe = cfg_.executable;
    if (exe.string().find('/') != std::string::npos && !fs::exists(exe))
      throw engine_error("engine executable '" + exe.string() + "' does not exist");

    const fs::path log_path = case_dir / "engine.log";
    const spawn_outcome sp =
        spawn_and_wait(argv, case_dir, log_path, cfg_.timeout_s, cfg_.env);
    if (sp.timed_out)
      throw engine_timeout("case " + std::to_string(case_index) + ": engine '" +
                           exe.string() + "' timed out after " + format_display(cfg_.timeout_s) +
                           " s");
    if (sp.exit_code != 0)
      throw engine_error("case " + std::to_string(case_index) + ": engine '" + exe.string() +
                         "' exited with code " + std::to_string(sp.exit_code) + "; log: " +
                         tail_of(read_file_or_empty(log_path)));

    const fs::path raw_path = case_dir / rawfile_name;
    std::ifstream raw(raw_path, std::ios::binary);
    if (!raw)
      throw engine_error("case " + std::to_string(case_index) + ": engine '" + exe.string() +
                         "' produced no rawfile '" + raw_path.string() + "'; log: " +
                         tail_of(read_file_or_empty(log_path)));
    std::stringstream ss;
    ss << raw.rdbuf();
    return ss.str();
  }

  std::string describe() const override { return "process engine: " + cfg_.describe(); }

private:
  engine_config cfg_;
};

class mock_engine_impl final : public engine {
public:
  explicit mock_engine_impl(engine_config cfg) : cfg_(std::move(cfg)) {}

  std::string run(const std::string& netlist, std::uint64_t case_index) override {
    std::string bytes = mock_engine_run(netlist);
    if (cfg_.keep_artifacts) {
      const fs::path case_dir = cfg_.work_dir / ("case_" + std::to_string(case_index));
      std::error_code ec;
      fs::create_directories(case_dir, ec);
      if (!ec) {
        std::ofstream(case_dir / "case.sp", std::ios::binary) << netlist;
        std::ofstream(case_dir / "sim.raw", std::ios::binary) << bytes;
      }
    }
    return bytes;
  }

  std::string describe() const override { return "mock engine"; }

private:
  engine_config cfg_;
};

} // namespace

std::unique_ptr<engine> make_process_engine(const engine_config& cfg) {
  return std::make_unique<process_engine>(cfg);
}

std::unique_ptr<engine> make_mock_engine(const engine_config& cfg) {
  return std::make_unique<mock_engine_impl>(cfg);
}

std::unique_ptr<engine> make_engine(const engine_config& cfg) {
  if (cfg.use_mock)
    return make_mock_engine(cfg);
  return make_process_engine(cfg);
}

std::string run_case(const engine_config& cfg, const std::string& netlist,
                     std::uint64_t case_index) {
  return make_engine(cfg)->run(netlist, case_index);
}

namespace {

json metrics_to_json(const metrics_record& m) {
  return json{{"case_index", m.case_index}, {"p_avg", m.p_avg},
              {"t_d_lh", m.t_d_lh},         {"t_d_hl", m.t_d_hl},
              {"t_dmax", m.t_dmax},         {"pdp", m.pdp},
              {"v_out_low", m.v_out_low},   {"v_out_high", m.v_out_high},
              {"full_swing", m.full_swing}};
}

metrics_record metrics_from_json(const json& j) {
  metrics_record m;
  m.case_index = j.at("case_index").get<std::uint64_t>();
  m.p_avg = j.at("p_avg").get<double>();
  m.t_d_lh = j.at("t_d_lh").get<double>();
  m.t_d_hl = j.at("t_d_hl").get<double>();
  m.t_dmax = j.at("t_dmax").get<double>();
  m.pdp = j.at("pdp").get<double>();
  m.v_out_low = j.at("v_out_low").get<double>();
  m.v_out_high = j.at("v_out_high").get<double>();
  m.full_swing = j.at("full_swing").get<bool>();
  return m;
}

// Journal sidecar holding the full result per completed case, so resumed
// sweeps can carry metrics forward without re-running anything.
fs::path rows_path_for(const fs::path& journal) {
  return fs::path(journal.string() + ".rows");
}

void load_journal_state(const fs::path& journal, std::map<std::uint64_t, case_result>& done) {
  std::map<std::uint64_t, case_status> journaled;
  {
    std::ifstream in(journal);
    if (!in)
      return;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      std::uint64_t index = 0;
      std::string status_text;
      if (!(ls >> index >> status_text))
        continue; // tolerate a torn tail line
      if (auto s = case_status_from(status_text))
        journaled[index] = *s;
    }
  }

  std::ifstream rows(rows_path_for(journal));
  if (!rows)
    return;
  std::string line;
  while (std::getline(rows, line)) {
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      continue;
    case_result r;
    try {
      r.index = j.at("index").get<std::uint64_t>();
      auto s = case_status_from(j.at("status").get<std::string>());
      if (!s)
        continue;
      r.status = *s;
      if (j.contains("metrics") && !j["metrics"].is_null())
        r.metrics = metrics_from_json(j["metrics"]);
      if (j.contains("diagnostics"))
        r.diagnostics = j["diagnostics"].get<std::string>();
    } catch (const json::exception&) {
      continue;
    }
    // A case counts as done only when journal and sidecar agree it succeeded.
    auto it = journaled.find(r.index);
    if (it != journaled.end() && it->second == case_status::ok &&
        r.status == case_status::ok && r.metrics)
      done[r.index] = std::move(r);
  }
}

void check_template_coverage(const sweep_spec& spec, const netlist_template& tmpl) {
  static const std::set<std::string> ambient = {"STIMULUS", "MODEL",    "VDDH",
                                                "VDDL",     "VIN_HIGH", "VIN_LOW"};
  std::set<std::string> supplied;
  for (const auto& axis : spec.axes)
    supplied.insert(axis.name);
  for (const auto& [name, v] : spec.fixed) {
    (void)v;
    supplied.insert(name);
  }
  for (const auto& variant : spec.variants) {
    std::set<std::string> with_variant = supplied;
    for (const auto& [name, b] : variant.bindings) {
      (void)b;
      with_variant.insert(name);
    }
    for (const auto& token : tmpl.required_placeholders)
      if (!ambient.count(token) && !with_variant.count(token))
        throw validation_error("template '" + tmpl.name + "' placeholder '{" + token +
                               "}' has no value in sweep config (variant '" + variant.id +
                               "')");
  }
}

} // namespace

sweep_outcome run_sweep(const sweep_spec& spec, const netlist_template& tmpl,
                        const stimulus& stim, engine& eng, const sweep_options& opts) {
  if (opts.parallelism < 1)
    throw validation_error("parallelism must be >= 1");
  spec.validate();
  stim.validate();
  check_template_coverage(spec, tmpl);

  const case_range range = shard(spec, opts.n_shards, opts.shard_id);
  const measure_window win =
      measure_window::for_stimulus(stim, opts.sim.settle_periods, opts.sim.measure_periods);

  std::map<std::uint64_t, case_result> done;
  std::ofstream journal_out;
  std::ofstream rows_out;
  if (!opts.journal.empty()) {
    if (opts.resume)
      load_journal_state(opts.journal, done);
    const auto mode = opts.resume ? std::ios::app : std::ios::trunc;
    journal_out.open(opts.journal, mode);
    if (!journal_out)
      throw io_error("cannot open journal '" + opts.journal.string() + "' for writing");
    rows_out.open(rows_path_for(opts.journal), mode);
    if (!rows_out)
      throw io_error("cannot open journal sidecar '" +
                     rows_path_for(opts.journal).string() + "' for writing");
  }

  std::vector<std::uint64_t> pending;
  std::uint64_t skipped = 0;
  for (std::uint64_t i = range.first_index(); i < range.last_index(); ++i) {
    if (done.count(i))
      ++skipped;
    else
      pending.push_back(i);
  }

  std::mutex emit_mutex;
  std::vector<case_result> fresh;
  fresh.reserve(pending.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};

  auto emit = [&](case_result r) {
    std::lock_guard<std::mutex> lock(emit_mutex);
    if (rows_out.is_open()) {
      json j{{"index", r.index}, {"status", std::string(to_string(r.status))}};
      j["metrics"] = r.metrics ? metrics_to_json(*r.metrics) : json(nullptr);
      if (!r.diagnostics.empty())
        j["diagnostics"] = r.diagnostics;
      rows_out << j.dump() << "\n";
      rows_out.flush();
    }
    if (journal_out.is_open()) {
      journal_out << r.index << " " << to_string(r.status) << "\n";
      journal_out.flush();
    }
    if (opts.on_result)
      opts.on_result(r);
    fresh.push_back(std::move(r));
  };

  auto process_one = [&](std::uint64_t index) {
    case_result r;
    r.index = index;
    std::string bytes;
    try {
      const case_assignment c = spec.case_by_index(index);
      const std::string netlist =
          render_netlist(tmpl, c, spec, stim, opts.sim, render_options{});
      bytes = eng.run(netlist, index);
    } catch (const engine_timeout& e) {
      r.status = case_status::timeout;
      r.diagnostics = e.what();
      emit(std::move(r));
      return;
    } catch (const std::exception& e) {
      r.status = case_status::engine_error;
      r.diagnostics = e.what();
      emit(std::move(r));
      return;
    }
    try {
      const auto plots = parse_rawfile(bytes);
      const raw_plot* transient = nullptr;
      for (const auto& p : plots)
        if (p.has_time_scale() && !p.is_complex) {
          transient = &p;
          break;
        }
      if (!transient)
        throw rawfile_error("no real transient plot in engine output");
      metrics_record m = evaluate_case(*transient, tmpl.probes, stim, win,
                                       opts.inverting || tmpl.inverting, opts.eps, index);
      r.status = case_status::ok;
      if (m.p_avg < 0.0)
        r.diagnostics = "negative average power";
      r.metrics = std::move(m);
    } catch (const rawfile_error& e) {
      r.status = case_status::parse_error;
      r.diagnostics = e.what();
    } catch (const std::exception& e) {
      r.status = case_status::metric_error;
      r.diagnostics = e.what();
    }
    emit(std::move(r));
  };

  auto worker = [&]() {
    for (;;) {
      if (stop.load(std::memory_order_relaxed))
        return;
      if (opts.cancelled && opts.cancelled()) {
        stop.store(true, std::memory_order_relaxed);
        return;
      }
      const std::size_t slot = next.fetch_add(1, std::memory_order_relaxed);
      if (slot >= pending.size())
        return;
      process_one(pending[slot]);
    }
  };

  if (opts.parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(opts.parallelism);
    for (int i = 0; i < opts.parallelism; ++i)
      pool.emplace_back(worker);
    for (auto& t : pool)
      t.join();
  }

  sweep_outcome outcome;
  outcome.cancelled = stop.load();
  outcome.executed = fresh.size();
  outcome.skipped = skipped;
  for (auto& r : fresh)
    done[r.index] = std::move(r);
  outcome.results.reserve(done.size());
  for (auto it = done.begin(); it != done.end(); ++it)
    if (it->first >= range.first_index() && it->first < range.last_index())
      outcome.results.push_back(std::move(it->second));
  return outcome;
}

sweep_outcome run_sweep(const sweep_spec& spec, const netlist_template& tmpl,
                        const stimulus& stim, const engine_config& cfg,
                        const sweep_options& opts) {
  cfg.validate();
  auto eng = make_engine(cfg);
  return run_sweep(spec, tmpl, stim, *eng, opts);
}

} // namespace sweepspice
