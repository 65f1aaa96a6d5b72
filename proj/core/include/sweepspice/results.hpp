// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engine.hpp"
#include "metrics.hpp"
#include "netlist.hpp"

namespace sweepspice {

struct results_header {
  int version = 1;
  std::string fingerprint;
  std::string engine_desc;
  std::string timestamp; // ISO-8601 UTC; honors SOURCE_DATE_EPOCH
  stimulus stim;
  std::vector<std::string> axis_names;
};

// One persisted case. All numerics are SI; display units exist only in
// rendered tables.
struct result_row {
  std::uint64_t index = 0;
  std::string variant;
  std::vector<double> axis_values; // matches header.axis_names order
  case_status status = case_status::ok;
  std::optional<metrics_record> metrics; // present iff status == ok
};

enum class results_format { csv, jsonl };

std::optional<results_format> results_format_from(std::string_view s);

// CSV columns, fixed order: index, variant, <axis names>, status, p_avg_w,
// t_d_lh_s, t_d_hl_s, t_dmax_s, pdp_j, v_out_low_v, v_out_high_v,
// full_swing. JSONL uses identical field names, one object per row, after a
// header object. Floats are written with 17 significant digits.
void write_results(const results_header& header, const std::vector<result_row>& rows,
                   const std::filesystem::path& path, results_format format);

std::string dump_results(const results_header& header,
                         const std::vector<result_row>& rows, results_format format);

// Exact inverse of write_results; the format is sniffed from content.
std::pair<results_header, std::vector<result_row>>
load_results(const std::filesystem::path& path);

std::pair<results_header, std::vector<result_row>>
parse_results(const std::string& text, const std::string& origin);

std::string current_timestamp();

result_row row_from_result(const sweep_spec& spec, const case_result& r);

} // namespace sweepspice
