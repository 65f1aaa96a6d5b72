// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/rawfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <sstream>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

std::string_view to_string(var_kind k) {
  switch (k) {
  case var_kind::time: return "time";
  case var_kind::voltage: return "voltage";
  case var_kind::current: return "current";
  case var_kind::other: return "other";
  }
  return "other";
}

var_kind var_kind_from(std::string_view s) {
  std::string l(s);
  std::transform(l.begin(), l.end(), l.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (l == "time")
    return var_kind::time;
  if (l == "voltage")
    return var_kind::voltage;
  if (l == "current")
    return var_kind::current;
  return var_kind::other;
}

void raw_plot::validate() const {
  if (variables.empty())
    throw rawfile_error("plot '" + plotname + "' has no variables");
  const std::size_t per_point = variables.size() * (is_complex ? 2 : 1);
  if (values.size() % per_point != 0)
    throw rawfile_error("plot '" + plotname + "' has a ragged value matrix");
}

void waveform::validate() const {
  if (t.size() != v.size())
    throw validation_error("waveform '" + name + "': time/value length mismatch");
  if (t.size() < 2)
    throw validation_error("waveform '" + name + "': needs at least 2 samples");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || !std::isfinite(v[i]))
      throw validation_error("waveform '" + name + "': non-finite sample at index " +
                             std::to_string(i));
    if (i > 0 && !(t[i] > t[i - 1]))
      throw validation_error("waveform '" + name +
                             "': time not strictly increasing at index " +
                             std::to_string(i));
  }
}

bool waveform::spans(double a, double b) const {
  return !t.empty() && t.front() <= a && b <= t.back();
}

double waveform::value_at(double time) const {
  if (t.empty() || time < t.front() || time > t.back())
    throw metric_error("waveform '" + name + "': time " + format_full(time) +
                       " outside span");
  auto it = std::upper_bound(t.begin(), t.end(), time);
  if (it == t.begin())
    return v.front();
  if (it == t.end())
    return v.back();
  const std::size_t hi = static_cast<std::size_t>(it - t.begin());
  const std::size_t lo = hi - 1;
  const double w = (time - t[lo]) / (t[hi] - t[lo]);
  return v[lo] + w * (v[hi] - v[lo]);
}

namespace {

struct cursor {
  std::string_view data;
  std::size_t pos = 0;
  std::size_t line_no = 0;

  bool eof() const { return pos >= data.size(); }

  // Next line without the terminator; tolerates \r\n.
  std::string_view next_line() {
    std::size_t start = pos;
    while (pos < data.size() && data[pos] != '\n')
      ++pos;
    std::string_view line = data.substr(start, pos - start);
    if (pos < data.size())
      ++pos; // consume '\n'
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    return line;
  }

  void skip_blank_lines() {
    while (!eof()) {
      std::size_t save_pos = pos;
      std::size_t save_line = line_no;
      std::string_view line = next_line();
      bool blank = std::all_of(line.begin(), line.end(), [](unsigned char c) {
        return std::isspace(c);
      });
      if (!blank) {
        pos = save_pos;
        line_no = save_line;
        return;
      }
    }
  }
};

std::string_view trim_view(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::string lower_copy(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool split_header(std::string_view line, std::string& key, std::string& value) {
  auto colon = line.find(':');
  if (colon == std::string_view::npos)
    return false;
  key = lower_copy(trim_view(line.substr(0, colon)));
  value = std::string(trim_view(line.substr(colon + 1)));
  return true;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    if (i > start)
      out.push_back(s.substr(start, i - start));
  }
  return out;
}

long long parse_count(std::string_view v, const char* what, std::size_t line_no) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size() || out < 0)
    throw rawfile_error(std::string("line ") + std::to_string(line_no) + ": bad " + what +
                        " '" + std::string(v) + "'");
  return out;
}

// Whitespace-separated double scanner over the raw buffer, used for ASCII
// value sections. Complex values look like "re,im".
struct token_reader {
  cursor& c;

  std::string_view next_token() {
    while (!c.eof() &&
           std::isspace(static_cast<unsigned char>(c.data[c.pos]))) {
      if (c.data[c.pos] == '\n')
        ++c.line_no;
      ++c.pos;
    }
    std::size_t start = c.pos;
    while (!c.eof() &&
           !std::isspace(static_cast<unsigned char>(c.data[c.pos])))
      ++c.pos;
    return c.data.substr(start, c.pos - start);
  }

  double next_double(const char* what) {
    std::string_view tok = next_token();
    if (tok.empty())
      throw rawfile_error(std::string("unexpected end of file while reading ") + what);
    double out = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
      throw rawfile_error(std::string("line ") + std::to_string(c.line_no + 1) +
                          ": bad number '" + std::string(tok) + "' while reading " + what);
    return out;
  }
};

// Drops all but the last row of every run of equal time values.
void collapse_duplicate_times(raw_plot& plot) {
  if (!plot.has_time_scale() || plot.is_complex)
    return;
  const std::size_t nv = plot.n_vars();
  const std::size_t np = plot.n_points();
  if (np < 2)
    return;
  std::vector<double> out;
  out.reserve(plot.values.size());
  for (std::size_t p = 0; p < np; ++p) {
    const bool next_is_dup = p + 1 < np && plot.at(p + 1, 0) == plot.at(p, 0);
    if (next_is_dup)
      continue;
    for (std::size_t v = 0; v < nv; ++v)
      out.push_back(plot.at(p, v));
  }
  plot.values = std::move(out);
}

raw_plot parse_plot(cursor& c) {
  raw_plot plot;
  long long n_vars = -1;
  long long n_points = -1;

  // Header section.
  for (;;) {
    if (c.eof())
      throw rawfile_error("unexpected end of file inside plot header");
    const std::size_t header_line = c.line_no + 1;
    std::string_view line = c.next_line();
    std::string key, value;
    if (!split_header(line, key, value))
      throw rawfile_error("line " + std::to_string(header_line) +
                          ": expected 'Key: value' header, got '" + std::string(line) + "'");
    if (key == "title") {
      plot.title = value;
    } else if (key == "date") {
      plot.date = value;
    } else if (key == "plotname") {
      plot.plotname = value;
    } else if (key == "flags") {
      for (auto flag : split_ws(value)) {
        const std::string f = lower_copy(flag);
        if (f == "real")
          plot.is_complex = false;
        else if (f == "complex")
          plot.is_complex = true;
        else if (f == "padded")
          throw rawfile_error("line " + std::to_string(header_line) +
                              ": padded (float32) rawfiles are not supported");
        // unknown flags ignored
      }
    } else if (key == "no. variables") {
      n_vars = parse_count(value, "variable count", header_line);
    } else if (key == "no. points") {
      n_points = parse_count(value, "point count", header_line);
    } else if (key == "variables") {
      break;
    } else if (key == "values" || key == "binary") {
      throw rawfile_error("line " + std::to_string(header_line) +
                          ": data section before 'Variables:'");
    }
    // other keys (Command, Options, ...) ignored
  }

  if (n_vars < 0)
    throw rawfile_error("missing 'No. Variables' header");
  if (n_points < 0)
    throw rawfile_error("missing 'No. Points' header");
  if (n_vars == 0)
    throw rawfile_error("plot declares zero variables");

  for (long long i = 0; i < n_vars; ++i) {
    if (c.eof())
      throw rawfile_error("unexpected end of file in variable list");
    const std::size_t var_line = c.line_no + 1;
    auto fields = split_ws(c.next_line());
    if (fields.size() < 3)
      throw rawfile_error("line " + std::to_string(var_line) +
                          ": variable entry needs index, name and kind");
    const long long idx = parse_count(fields[0], "variable index", var_line);
    if (idx != i)
      throw rawfile_error("line " + std::to_string(var_line) + ": variable index " +
                          std::to_string(idx) + " out of order (expected " +
                          std::to_string(i) + ")");
    raw_variable var;
    var.name = std::string(fields[1]);
    var.kind = var_kind_from(fields[2]);
    plot.variables.push_back(std::move(var));
  }

  if (plot.is_complex && lower_copy(plot.plotname).find("transient") != std::string::npos)
    throw rawfile_error("transient plot '" + plot.plotname + "' carries complex data");

  // Data section marker.
  if (c.eof())
    throw rawfile_error("unexpected end of file before data section");
  const std::size_t marker_line = c.line_no + 1;
  std::string key, value;
  if (!split_header(c.next_line(), key, value))
    throw rawfile_error("line " + std::to_string(marker_line) +
                        ": expected 'Values:' or 'Binary:'");

  const std::size_t reals_per_value = plot.is_complex ? 2 : 1;
  const std::size_t total =
      static_cast<std::size_t>(n_points) * static_cast<std::size_t>(n_vars) * reals_per_value;
  plot.values.reserve(total);

  if (key == "values") {
    token_reader reader{c};
    for (long long p = 0; p < n_points; ++p) {
      std::string_view idx_tok = reader.next_token();
      if (idx_tok.empty())
        throw rawfile_error("ASCII point count mismatch: expected " +
                            std::to_string(n_points) + " points, file ends after " +
                            std::to_string(p));
      long long idx = 0;
      auto res = std::from_chars(idx_tok.data(), idx_tok.data() + idx_tok.size(), idx);
      if (res.ec != std::errc{} || res.ptr != idx_tok.data() + idx_tok.size())
        throw rawfile_error("line " + std::to_string(c.line_no + 1) +
                            ": bad point index '" + std::string(idx_tok) + "'");
      if (idx != p)
        throw rawfile_error("point index " + std::to_string(idx) + " out of order (expected " +
                            std::to_string(p) + ")");
      for (long long v = 0; v < n_vars; ++v) {
        if (plot.is_complex) {
          std::string_view tok = reader.next_token();
          if (tok.empty())
            throw rawfile_error("unexpected end of file in complex value");
          auto comma = tok.find(',');
          if (comma == std::string_view::npos)
            throw rawfile_error("line " + std::to_string(c.line_no + 1) +
                                ": complex value '" + std::string(tok) + "' lacks a comma");
          double re = 0.0, im = 0.0;
          auto r1 = std::from_chars(tok.data(), tok.data() + comma, re);
          auto r2 =
              std::from_chars(tok.data() + comma + 1, tok.data() + tok.size(), im);
          if (r1.ec != std::errc{} || r2.ec != std::errc{})
            throw rawfile_error("line " + std::to_string(c.line_no + 1) +
                                ": bad complex value '" + std::string(tok) + "'");
          plot.values.push_back(re);
          plot.values.push_back(im);
        } else {
          plot.values.push_back(reader.next_double("value"));
        }
      }
    }
    // step past the trailing newline of the last value line
    while (!c.eof() && std::isspace(static_cast<unsigned char>(c.data[c.pos])))
      ++c.pos;
  } else if (key == "binary") {
    const std::size_t want_bytes = total * sizeof(double);
    const std::size_t have_bytes = c.data.size() - c.pos;
    if (have_bytes < want_bytes)
      throw rawfile_error("binary section truncated: expected " +
                          std::to_string(want_bytes) + " bytes, found " +
                          std::to_string(have_bytes));
    plot.values.resize(total);
    if (want_bytes > 0)
      std::memcpy(plot.values.data(), c.data.data() + c.pos, want_bytes);
    c.pos += want_bytes;
    while (!c.eof() && std::isspace(static_cast<unsigned char>(c.data[c.pos])))
      ++c.pos;
  } else {
    throw rawfile_error("line " + std::to_string(marker_line) +
                        ": expected 'Values:' or 'Binary:', got '" + key + "'");
  }

  collapse_duplicate_times(plot);

  if (plot.has_time_scale() && !plot.is_complex) {
    for (std::size_t p = 1; p < plot.n_points(); ++p)
      if (!(plot.at(p, 0) > plot.at(p - 1, 0)))
        throw rawfile_error("time scale not strictly increasing at point " +
                            std::to_string(p));
  }
  return plot;
}

} // namespace

std::vector<raw_plot> parse_rawfile(std::string_view bytes) {
  cursor c{bytes};
  std::vector<raw_plot> plots;
  c.skip_blank_lines();
  if (c.eof())
    throw rawfile_error("empty rawfile");
  while (!c.eof()) {
    plots.push_back(parse_plot(c));
    c.skip_blank_lines();
  }
  return plots;
}

std::string write_rawfile(const std::vector<raw_plot>& plots, raw_format format) {
  std::ostringstream out;
  for (const auto& plot : plots) {
    plot.validate();
    out << "Title: " << plot.title << "\n";
    out << "Date: " << plot.date << "\n";
    out << "Plotname: " << plot.plotname << "\n";
    out << "Flags: " << (plot.is_complex ? "complex" : "real") << "\n";
    out << "No. Variables: " << plot.n_vars() << "\n";
    out << "No. Points: " << plot.n_points() << "\n";
    out << "Variables:\n";
    for (std::size_t i = 0; i < plot.n_vars(); ++i)
      out << "\t" << i << "\t" << plot.variables[i].name << "\t"
          << to_string(plot.variables[i].kind) << "\n";

    const std::size_t reals = plot.is_complex ? 2 : 1;
    if (format == raw_format::ascii) {
      out << "Values:\n";
      for (std::size_t p = 0; p < plot.n_points(); ++p) {
        out << p;
        for (std::size_t v = 0; v < plot.n_vars(); ++v) {
          const std::size_t base = (p * plot.n_vars() + v) * reals;
          out << "\t";
          if (plot.is_complex)
            out << format_full(plot.values[base]) << "," << format_full(plot.values[base + 1]);
          else
            out << format_full(plot.values[base]);
          out << "\n";
        }
      }
    } else {
      out << "Binary:\n";
      out.write(reinterpret_cast<const char*>(plot.values.data()),
                static_cast<std::streamsize>(plot.values.size() * sizeof(double)));
    }
  }
  return out.str();
}

waveform get_trace(const raw_plot& plot, std::string_view name) {
  if (!plot.has_time_scale())
    throw rawfile_error("plot '" + plot.plotname + "' has no time scale");
  if (plot.is_complex)
    throw rawfile_error("plot '" + plot.plotname + "' is complex; traces unsupported");

  const std::string wanted = lower_copy(name);
  std::vector<std::size_t> hits;
  for (std::size_t i = 0; i < plot.n_vars(); ++i)
    if (lower_copy(plot.variables[i].name) == wanted)
      hits.push_back(i);

  if (hits.empty()) {
    std::string available;
    for (std::size_t i = 0; i < plot.n_vars(); ++i) {
      if (i)
        available += ", ";
      available += plot.variables[i].name;
    }
    throw rawfile_error("no trace named '" + std::string(name) + "'; available: " +
                        available);
  }
  if (hits.size() > 1)
    throw rawfile_error("trace name '" + std::string(name) + "' is ambiguous (" +
                        std::to_string(hits.size()) + " case-insensitive matches)");

  waveform w;
  w.name = plot.variables[hits[0]].name;
  const std::size_t np = plot.n_points();
  w.t.reserve(np);
  w.v.reserve(np);
  for (std::size_t p = 0; p < np; ++p) {
    w.t.push_back(plot.at(p, 0));
    w.v.push_back(plot.at(p, hits[0]));
  }
  try {
    w.validate();
  } catch (const validation_error& e) {
    throw rawfile_error(std::string("trace '") + w.name + "' invalid: " + e.what());
  }
  return w;
}

} // namespace sweepspice
