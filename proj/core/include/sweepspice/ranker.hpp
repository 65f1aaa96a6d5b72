// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "results.hpp"

namespace sweepspice {

enum class metric_key { p_avg, pdp, t_dmax };

std::string_view to_string(metric_key k);
std::optional<metric_key> metric_key_from(std::string_view s);
double metric_value(const result_row& row, metric_key key); // NaN if absent

struct record_filter {
  bool require_ok = true;
  bool require_full_swing = true;

  struct bound {
    metric_key key;
    double lo;
    double hi;
  };
  std::vector<bound> bounds;

  bool passes(const result_row& row) const;
  std::string describe() const;
};

// Order-preserving subset.
std::vector<result_row> filter_records(const std::vector<result_row>& rows,
                                       const record_filter& filter);

struct ranked_report {
  metric_key criterion = metric_key::p_avg;
  std::string filter_desc;
  std::size_t k = 0;
  std::vector<result_row> rows; // ascending by criterion
};

// Deterministic total order: ascending criterion, ties broken by
// (variant id, axis value vector, index). Returns min(k, n) rows.
// A NaN criterion value on any input row is a pipeline bug and throws.
ranked_report rank(const std::vector<result_row>& rows, metric_key criterion,
                   std::size_t k, std::string filter_desc = {});

// Non-dominated subset under minimization of every key, sorted by the first
// key (same tie-break as rank).
std::vector<result_row> pareto_front(const std::vector<result_row>& rows,
                                     const std::vector<metric_key>& keys);

} // namespace sweepspice
