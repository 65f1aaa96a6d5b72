// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/ranker.hpp"

#include <algorithm>
#include <cmath>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

std::string_view to_string(metric_key k) {
  switch (k) {
  case metric_key::p_avg: return "p_avg";
  case metric_key::pdp: return "pdp";
  case metric_key::t_dmax: return "t_dmax";
  }
  return "p_avg";
}

std::optional<metric_key> metric_key_from(std::string_view s) {
  if (s == "p_avg")
    return metric_key::p_avg;
  if (s == "pdp")
    return metric_key::pdp;
  if (s == "t_dmax")
    return metric_key::t_dmax;
  return std::nullopt;
}

double metric_value(const result_row& row, metric_key key) {
  if (!row.metrics)
    return std::nan("");
  switch (key) {
  case metric_key::p_avg: return row.metrics->p_avg;
  case metric_key::pdp: return row.metrics->pdp;
  case metric_key::t_dmax: return row.metrics->t_dmax;
  }
  return std::nan("");
}

bool record_filter::passes(const result_row& row) const {
  if (require_ok && row.status != case_status::ok)
    return false;
  if (require_full_swing && (!row.metrics || !row.metrics->full_swing))
    return false;
  for (const auto& b : bounds) {
    const double v = metric_value(row, b.key);
    if (std::isnan(v) || v < b.lo || v > b.hi)
      return false;
  }
  return true;
}

std::string record_filter::describe() const {
  std::string out;
  auto add = [&](const std::string& clause) {
    if (!out.empty())
      out += ", ";
    out += clause;
  };
  if (require_ok)
    add("status=ok");
  if (require_full_swing)
    add("full_swing");
  for (const auto& b : bounds) {
    std::string clause(to_string(b.key));
    clause += " in [" + format_display(b.lo) + ", " + format_display(b.hi) + "]";
    add(clause);
  }
  return out.empty() ? "none" : out;
}

std::vector<result_row> filter_records(const std::vector<result_row>& rows,
                                       const record_filter& filter) {
  std::vector<result_row> out;
  out.reserve(rows.size());
  for (const auto& row : rows)
    if (filter.passes(row))
      out.push_back(row);
  return out;
}

namespace {

// Published tie-break: variant id, then the axis value vector in declaration
// order, then the case index. Makes reports reproducible across runs, input
// permutations and parallelism.
bool tie_less(const result_row& a, const result_row& b) {
  if (a.variant != b.variant)
    return a.variant < b.variant;
  if (a.axis_values != b.axis_values)
    return std::lexicographical_compare(a.axis_values.begin(), a.axis_values.end(),
                                        b.axis_values.begin(), b.axis_values.end());
  return a.index < b.index;
}

void require_finite(const std::vector<result_row>& rows, metric_key key) {
  for (const auto& row : rows)
    if (std::isnan(metric_value(row, key)))
      throw error("record " + std::to_string(row.index) + " has NaN " +
                  std::string(to_string(key)) + "; unfiltered non-ok record in ranking input");
}

} // namespace

ranked_report rank(const std::vector<result_row>& rows, metric_key criterion,
                   std::size_t k, std::string filter_desc) {
  require_finite(rows, criterion);

  ranked_report report;
  report.criterion = criterion;
  report.filter_desc = std::move(filter_desc);
  report.k = k;
  report.rows = rows;
  std::sort(report.rows.begin(), report.rows.end(),
            [&](const result_row& a, const result_row& b) {
              const double va = metric_value(a, criterion);
              const double vb = metric_value(b, criterion);
              if (va != vb)
                return va < vb;
              return tie_less(a, b);
            });
  if (report.rows.size() > k)
    report.rows.resize(k);
  return report;
}

std::vector<result_row> pareto_front(const std::vector<result_row>& rows,
                                     const std::vector<metric_key>& keys) {
  if (keys.empty())
    throw validation_error("pareto_front needs at least one metric key");
  for (metric_key key : keys)
    require_finite(rows, key);

  auto dominates = [&](const result_row& a, const result_row& b) {
    bool strict = false;
    for (metric_key key : keys) {
      const double va = metric_value(a, key);
      const double vb = metric_value(b, key);
      if (va > vb)
        return false;
      if (va < vb)
        strict = true;
    }
    return strict;
  };

  std::vector<result_row> front;
  for (const auto& candidate : rows) {
    bool dominated = false;
    for (const auto& other : rows) {
      if (dominates(other, candidate)) {
        dominated = true;
        break;
      }
    }
    if (!dominated)
      front.push_back(candidate);
  }

  std::sort(front.begin(), front.end(), [&](const result_row& a, const result_row& b) {
    const double va = metric_value(a, keys[0]);
    const double vb = metric_value(b, keys[0]);
    if (va != vb)
      return va < vb;
    return tie_less(a, b);
  });
  return front;
}

} // namespace sweepspice
