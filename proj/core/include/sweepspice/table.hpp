// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ranker.hpp"

namespace sweepspice {

// Display unit scaling for rendered tables: p_avg in nW, t_dmax in ns,
// pdp in aJ, v_out_low in nV, v_out_high in mV.
struct table_units {
  double p_avg_scale = 1e9;
  std::string p_avg_label = "P_avg (nW)";
  double t_dmax_scale = 1e9;
  std::string t_dmax_label = "T_dmax (ns)";
  double pdp_scale = 1e18;
  std::string pdp_label = "PDP (aJ)";
  double v_low_scale = 1e9;
  std::string v_low_label = "V_out_low (nV)";
  double v_high_scale = 1e3;
  std::string v_high_label = "V_out_high (mV)";
};

// Fixed-width text table, one row per solution. Axis assignments render as
// `L=90n WP1=160n ...`; metric values use 6 significant digits in the
// display units above.
std::string render_table(const ranked_report& report,
                         const std::vector<std::string>& axis_names,
                         const table_units& units = {});

} // namespace sweepspice
