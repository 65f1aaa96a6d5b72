// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/table.hpp"

#include <algorithm>
#include <sstream>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

namespace {

std::string solution_cell(const result_row& row, const std::vector<std::string>& axis_names) {
  std::string out;
  for (std::size_t i = 0; i < axis_names.size() && i < row.axis_values.size(); ++i) {
    if (i)
      out += " ";
    out += axis_names[i] + "=" + format_eng(row.axis_values[i]);
  }
  return out;
}

std::string metric_cell(const result_row& row, double metrics_record::*field, double scale) {
  if (!row.metrics)
    return "-";
  return format_display((*row.metrics).*field * scale);
}

} // namespace

std::string render_table(const ranked_report& report,
                         const std::vector<std::string>& axis_names,
                         const table_units& units) {
  std::vector<std::string> headers = {"#",
                                      "solution",
                                      "variant",
                                      units.p_avg_label,
                                      units.t_dmax_label,
                                      units.pdp_label,
                                      units.v_low_label,
                                      units.v_high_label};

  std::vector<std::vector<std::string>> cells;
  cells.reserve(report.rows.size());
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const result_row& row = report.rows[i];
    cells.push_back({std::to_string(i + 1), solution_cell(row, axis_names), row.variant,
                     metric_cell(row, &metrics_record::p_avg, units.p_avg_scale),
                     metric_cell(row, &metrics_record::t_dmax, units.t_dmax_scale),
                     metric_cell(row, &metrics_record::pdp, units.pdp_scale),
                     metric_cell(row, &metrics_record::v_out_low, units.v_low_scale),
                     metric_cell(row, &metrics_record::v_out_high, units.v_high_scale)});
  }

  std::vector<std::size_t> widths(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    widths[c] = headers[c].size();
    for (const auto& row : cells)
      widths[c] = std::max(widths[c], row[c].size());
  }

  std::ostringstream out;
  out << "ranked by " << to_string(report.criterion) << " (ascending)";
  if (!report.filter_desc.empty())
    out << "; filter: " << report.filter_desc;
  out << "\n";

  auto emit_row = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c)
        out << "  ";
      // numbers right-aligned, text left-aligned
      const bool numeric = c == 0 || c >= 3;
      const std::size_t pad = widths[c] - row[c].size();
      if (numeric)
        out << std::string(pad, ' ') << row[c];
      else
        out << row[c] << std::string(pad, ' ');
    }
    out << "\n";
  };

  emit_row(headers);
  std::size_t total = 0;
  for (std::size_t w : widths)
    total += w;
  out << std::string(total + 2 * (headers.size() - 1), '-') << "\n";
  for (const auto& row : cells)
    emit_row(row);
  return out.str();
}

} // namespace sweepspice
