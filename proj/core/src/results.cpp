// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/results.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

namespace {

using ordered_json = nlohmann::ordered_json;
using json = nlohmann::json;

constexpr int results_version = 1;

const char* const metric_columns[] = {"p_avg_w",     "t_d_lh_s",     "t_d_hl_s", "t_dmax_s",
                                      "pdp_j",       "v_out_low_v",  "v_out_high_v"};

json stimulus_to_json(const stimulus& s) {
  return json{{"v_in_low", s.v_in_low},   {"v_in_high", s.v_in_high},
              {"v_ddh", s.v_ddh},         {"v_ddl", s.v_ddl},
              {"t_rise", s.t_rise},       {"t_fall", s.t_fall},
              {"t_delay", s.t_delay},     {"frequency", s.frequency},
              {"c_load", s.c_load}};
}

stimulus stimulus_from_json(const json& j) {
  stimulus s;
  s.v_in_low = j.value("v_in_low", s.v_in_low);
  s.v_in_high = j.value("v_in_high", s.v_in_high);
  s.v_ddh = j.value("v_ddh", s.v_ddh);
  s.v_ddl = j.value("v_ddl", s.v_ddl);
  s.t_rise = j.value("t_rise", s.t_rise);
  s.t_fall = j.value("t_fall", s.t_fall);
  s.t_delay = j.value("t_delay", s.t_delay);
  s.frequency = j.value("frequency", s.frequency);
  s.c_load = j.value("c_load", s.c_load);
  return s;
}

std::string sanitize_line(std::string s) {
  for (auto& c : s)
    if (c == '\n' || c == '\r')
      c = ' ';
  return s;
}

void metric_values_of(const result_row& row, double out[7]) {
  const auto& m = row.metrics;
  out[0] = m ? m->p_avg : std::nan("");
  out[1] = m ? m->t_d_lh : std::nan("");
  out[2] = m ? m->t_d_hl : std::nan("");
  out[3] = m ? m->t_dmax : std::nan("");
  out[4] = m ? m->pdp : std::nan("");
  out[5] = m ? m->v_out_low : std::nan("");
  out[6] = m ? m->v_out_high : std::nan("");
}

void check_row_shape(const results_header& header, const result_row& row) {
  if (row.axis_values.size() != header.axis_names.size())
    throw validation_error("result row " + std::to_string(row.index) + " has " +
                           std::to_string(row.axis_values.size()) + " axis values, header has " +
                           std::to_string(header.axis_names.size()) + " axes");
  if ((row.status == case_status::ok) != row.metrics.has_value())
    throw validation_error("result row " + std::to_string(row.index) +
                           ": metrics present iff status is ok");
}

std::string dump_csv(const results_header& header, const std::vector<result_row>& rows) {
  std::ostringstream out;
  out << "# sweepspice-results v" << results_version << "\n";
  out << "# fingerprint " << header.fingerprint << "\n";
  out << "# engine " << sanitize_line(header.engine_desc) << "\n";
  out << "# timestamp " << header.timestamp << "\n";
  out << "# stimulus " << stimulus_to_json(header.stim).dump() << "\n";

  out << "index,variant";
  for (const auto& name : header.axis_names)
    out << "," << name;
  out << ",status";
  for (const auto* col : metric_columns)
    out << "," << col;
  out << ",full_swing\n";

  for (const auto& row : rows) {
    check_row_shape(header, row);
    out << row.index << "," << row.variant;
    for (double v : row.axis_values)
      out << "," << format_full(v);
    out << "," << to_string(row.status);
    double metric_vals[7];
    metric_values_of(row, metric_vals);
    for (double v : metric_vals) {
      out << ",";
      if (row.metrics)
        out << format_full(v);
    }
    out << ",";
    if (row.metrics)
      out << (row.metrics->full_swing ? "true" : "false");
    out << "\n";
  }
  return out.str();
}

std::string dump_jsonl(const results_header& header, const std::vector<result_row>& rows) {
  std::ostringstream out;
  ordered_json jh;
  jh["sweepspice_results_version"] = results_version;
  jh["fingerprint"] = header.fingerprint;
  jh["engine"] = header.engine_desc;
  jh["timestamp"] = header.timestamp;
  jh["stimulus"] = stimulus_to_json(header.stim);
  jh["axes"] = header.axis_names;
  out << jh.dump() << "\n";

  for (const auto& row : rows) {
    check_row_shape(header, row);
    ordered_json j;
    j["index"] = row.index;
    j["variant"] = row.variant;
    for (std::size_t i = 0; i < header.axis_names.size(); ++i)
      j[header.axis_names[i]] = row.axis_values[i];
    j["status"] = std::string(to_string(row.status));
    double metric_vals[7];
    metric_values_of(row, metric_vals);
    for (std::size_t i = 0; i < 7; ++i)
      j[metric_columns[i]] = row.metrics ? json(metric_vals[i]) : json(nullptr);
    j["full_swing"] = row.metrics ? json(row.metrics->full_swing) : json(nullptr);
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(field);
  return out;
}

double parse_double_field(const std::string& s, const std::string& where) {
  if (s.empty())
    return std::nan("");
  double out = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw io_error(where + ": bad number '" + s + "'");
  return out;
}

metrics_record metrics_from_fields(std::uint64_t index, const double vals[7],
                                   bool full_swing_flag) {
  metrics_record m;
  m.case_index = index;
  m.p_avg = vals[0];
  m.t_d_lh = vals[1];
  m.t_d_hl = vals[2];
  m.t_dmax = vals[3];
  m.pdp = vals[4];
  m.v_out_low = vals[5];
  m.v_out_high = vals[6];
  m.full_swing = full_swing_flag;
  return m;
}

std::pair<results_header, std::vector<result_row>> parse_csv(const std::string& text,
                                                             const std::string& origin) {
  results_header header;
  std::vector<result_row> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_columns = false;
  std::size_t n_axes = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (line[0] == '#') {
      std::istringstream meta(line.substr(1));
      std::string key;
      meta >> key;
      std::string value;
      std::getline(meta, value);
      if (!value.empty() && value.front() == ' ')
        value.erase(value.begin());
      if (key == "sweepspice-results") {
        if (value != "v" + std::to_string(results_version))
          throw io_error(where + ": unsupported results version '" + value + "'");
        header.version = results_version;
      } else if (key == "fingerprint") {
        header.fingerprint = value;
      } else if (key == "engine") {
        header.engine_desc = value;
      } else if (key == "timestamp") {
        header.timestamp = value;
      } else if (key == "stimulus") {
        json js = json::parse(value, nullptr, false);
        if (js.is_discarded())
          throw io_error(where + ": bad stimulus metadata");
        header.stim = stimulus_from_json(js);
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (!have_columns) {
      if (fields.size() < 11 || fields[0] != "index" || fields[1] != "variant")
        throw io_error(where + ": bad column header");
      if (fields.back() != "full_swing" || fields[fields.size() - 9] != "status")
        throw io_error(where + ": bad column header");
      n_axes = fields.size() - 11;
      header.axis_names.assign(fields.begin() + 2, fields.begin() + 2 + n_axes);
      have_columns = true;
      continue;
    }
    if (fields.size() != 11 + n_axes)
      throw io_error(where + ": expected " + std::to_string(11 + n_axes) + " fields, got " +
                     std::to_string(fields.size()));
    result_row row;
    row.index = static_cast<std::uint64_t>(parse_double_field(fields[0], where));
    row.variant = fields[1];
    for (std::size_t i = 0; i < n_axes; ++i)
      row.axis_values.push_back(parse_double_field(fields[2 + i], where));
    auto status = case_status_from(fields[2 + n_axes]);
    if (!status)
      throw io_error(where + ": unknown status '" + fields[2 + n_axes] + "'");
    row.status = *status;
    double metric_vals[7];
    bool any_metric = false;
    for (std::size_t i = 0; i < 7; ++i) {
      const std::string& f = fields[3 + n_axes + i];
      metric_vals[i] = parse_double_field(f, where);
      any_metric = any_metric || !f.empty();
    }
    const std::string& swing_field = fields[10 + n_axes];
    if (row.status == case_status::ok) {
      if (!any_metric || swing_field.empty())
        throw io_error(where + ": ok row without metrics");
      row.metrics = metrics_from_fields(row.index, metric_vals, swing_field == "true");
    } else if (any_metric || !swing_field.empty()) {
      throw io_error(where + ": non-ok row carries metrics");
    }
    rows.push_back(std::move(row));
  }

  if (!have_columns)
    throw io_error(origin + ": no column header found");
  return {std::move(header), std::move(rows)};
}

std::pair<results_header, std::vector<result_row>> parse_jsonl(const std::string& text,
                                                               const std::string& origin) {
  results_header header;
  std::vector<result_row> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty())
      continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw io_error(where + ": not a JSON object");
    if (!have_header) {
      if (!j.contains("sweepspice_results_version"))
        throw io_error(where + ": first record must be the results header");
      if (j["sweepspice_results_version"].get<int>() != results_version)
        throw io_error(where + ": unsupported results version");
      header.version = results_version;
      header.fingerprint = j.value("fingerprint", std::string{});
      header.engine_desc = j.value("engine", std::string{});
      header.timestamp = j.value("timestamp", std::string{});
      if (j.contains("stimulus"))
        header.stim = stimulus_from_json(j["stimulus"]);
      if (j.contains("axes"))
        header.axis_names = j["axes"].get<std::vector<std::string>>();
      have_header = true;
      continue;
    }
    try {
      result_row row;
      row.index = j.at("index").get<std::uint64_t>();
      row.variant = j.at("variant").get<std::string>();
      for (const auto& name : header.axis_names)
        row.axis_values.push_back(j.at(name).get<double>());
      auto status = case_status_from(j.at("status").get<std::string>());
      if (!status)
        throw io_error(where + ": unknown status");
      row.status = *status;
      if (row.status == case_status::ok) {
        double metric_vals[7];
        for (std::size_t i = 0; i < 7; ++i) {
          const auto& jv = j.at(metric_columns[i]);
          metric_vals[i] = jv.is_null() ? std::nan("") : jv.get<double>();
        }
        row.metrics =
            metrics_from_fields(row.index, metric_vals, j.at("full_swing").get<bool>());
      }
      rows.push_back(std::move(row));
    } catch (const json::exception& e) {
      throw io_error(where + ": malformed row: " + e.what());
    }
  }

  if (!have_header)
    throw io_error(origin + ": no results header found");
  return {std::move(header), std::move(rows)};
}

} // namespace

std::string dump_results(const results_header& header, const std::vector<result_row>& rows,
                         results_format format) {
  return format == results_format::csv ? dump_csv(header, rows) : dump_jsonl(header, rows);
}

void write_results(const results_header& header, const std::vector<result_row>& rows,
                   const std::filesystem::path& path, results_format format) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw io_error("cannot write results file '" + path.string() + "'");
  out << dump_results(header, rows, format);
  out.flush();
  if (!out)
    throw io_error("write failed for results file '" + path.string() + "'");
}

std::pair<results_header, std::vector<result_row>> parse_results(const std::string& text,
                                                                 const std::string& origin) {
  for (char c : text) {
    if (c == '#')
      return parse_csv(text, origin);
    if (c == '{')
      return parse_jsonl(text, origin);
    if (!std::isspace(static_cast<unsigned char>(c)))
      break;
  }
  throw io_error(origin + ": not a sweepspice results file (expected CSV or JSONL)");
}

std::pair<results_header, std::vector<result_row>>
load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw io_error("cannot open results file '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_results(ss.str(), path.string());
}

std::optional<results_format> results_format_from(std::string_view s) {
  if (s == "csv")
    return results_format::csv;
  if (s == "jsonl")
    return results_format::jsonl;
  return std::nullopt;
}

std::string current_timestamp() {
  std::time_t now = 0;
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    now = static_cast<std::time_t>(std::strtoll(sde, nullptr, 10));
  } else {
    now = std::time(nullptr);
  }
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

result_row row_from_result(const sweep_spec& spec, const case_result& r) {
  result_row row;
  row.index = r.index;
  const case_assignment c = spec.case_by_index(r.index);
  row.variant = c.variant;
  row.axis_values.reserve(c.axis_values.size());
  for (const auto& [name, value] : c.axis_values) {
    (void)name;
    row.axis_values.push_back(value);
  }
  row.status = r.status;
  row.metrics = r.metrics;
  return row;
}

} // namespace sweepspice
