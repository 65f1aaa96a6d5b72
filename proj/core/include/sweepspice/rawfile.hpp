// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sweepspice {

// Berkeley/ngspice raw waveform container. Supported header keys: Title,
// Date, Plotname, Flags, No. Variables, No. Points, Variables:, then
// Values: (ASCII) or Binary: (packed little-endian float64, row-major).
// Unknown keys are ignored. The exact grammar lives in docs/rawfile.md.

enum class var_kind { time, voltage, current, other };

std::string_view to_string(var_kind k);
var_kind var_kind_from(std::string_view s);

struct raw_variable {
  std::string name;
  var_kind kind = var_kind::other;
};

struct raw_plot {
  std::string title;
  std::string date;
  std::string plotname;
  bool is_complex = false;
  std::vector<raw_variable> variables;
  std::vector<double> values; // row-major, n_points x n_vars

  std::size_t n_vars() const { return variables.size(); }
  std::size_t n_points() const {
    const std::size_t per_point = variables.size() * (is_complex ? 2 : 1);
    return per_point == 0 ? 0 : values.size() / per_point;
  }
  // Real part when the plot is complex.
  double at(std::size_t point, std::size_t var) const {
    const std::size_t reals = is_complex ? 2 : 1;
    return values[(point * variables.size() + var) * reals];
  }
  bool has_time_scale() const {
    return !variables.empty() && variables[0].kind == var_kind::time;
  }

  void validate() const; // throws rawfile_error
};

// One named signal against a strictly increasing time base.
struct waveform {
  std::string name;
  std::vector<double> t;
  std::vector<double> v;

  void validate() const; // throws validation_error
  double t_front() const { return t.front(); }
  double t_back() const { return t.back(); }
  bool spans(double a, double b) const;
  // Linear interpolation; time must lie within [t_front, t_back].
  double value_at(double time) const;
};

enum class raw_format { ascii, binary };

// Parses every plot in the buffer. Never crashes on arbitrary bytes; all
// failures surface as rawfile_error. Consecutive duplicate time points in a
// transient plot are collapsed keeping the last row.
std::vector<raw_plot> parse_rawfile(std::string_view bytes);

std::string write_rawfile(const std::vector<raw_plot>& plots, raw_format format);

// Case-insensitive exact-name lookup of a variable column plus the scale.
waveform get_trace(const raw_plot& plot, std::string_view name);

} // namespace sweepspice
