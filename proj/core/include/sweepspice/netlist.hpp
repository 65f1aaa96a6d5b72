// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sweep.hpp"

namespace sweepspice {

// Input pulse, dual supplies and load. Defaults follow the standard recipe:
// 0 -> 0.6 V pulse, 10 ns edges, 10 MHz, 5 fF load, rails 0.8 V / 0.6 V.
struct stimulus {
  double v_in_low = 0.0;
  double v_in_high = 0.6;
  double v_ddh = 0.8;
  double v_ddl = 0.6;
  double t_rise = 10e-9;
  double t_fall = 10e-9;
  double t_delay = 0.0;
  double frequency = 10e6;
  double c_load = 5e-15;

  double period() const { return 1.0 / frequency; }
  // 50% duty at half amplitude: high half-period ends exactly at period/2.
  double pulse_width() const { return period() / 2.0 - t_rise; }

  void validate() const; // throws validation_error
};

// Trace names the engine is expected to emit for each probe role.
struct probe_map {
  std::string vin = "v(in)";
  std::string vout = "v(out)";
  std::string i_vddh = "i(vddh)";
  std::string i_vddl = "i(vddl)";
};

// Placeholder template. required_placeholders is scanned from the body, so
// the two are consistent by construction.
struct netlist_template {
  std::string name;
  std::string body;
  std::set<std::string> required_placeholders;
  probe_map probes;
  bool inverting = false;
};

struct sim_directives {
  int settle_periods = 1;
  int measure_periods = 2;
  double t_step = 0.0;       // 0 = period/1000
  std::string model_include; // empty = no .include card

  int n_periods() const { return settle_periods + measure_periods; }
};

// Template file format: first line "* name: <id>", a "* probes: vin=.. vout=..
// ivddh=.. ivddl=.." magic comment, optional "* inverting: true", then the
// body with {NAME} placeholders.
netlist_template parse_template(const std::string& text, const std::string& origin);
netlist_template load_template(const std::filesystem::path& path);

// Reconstructed NNPT and PNPT templates. The same text ships as editable
// files under configs/templates/; those files are the operational truth.
std::vector<netlist_template> builtin_templates();
netlist_template builtin_template(std::string_view name);

// Pulse source, both supply cards, load capacitor and the transient
// directive spanning n_periods full periods.
std::string make_stimulus_cards(const stimulus& stim, int n_periods, double t_step = 0.0);

struct render_options {
  bool strict_unused = false; // unused user-supplied values become errors
};

double resolve_binding(const binding_value& b, const stimulus& stim);

// Deterministic netlist text for one case. Substitutes axis values, fixed
// values, variant bindings and the ambient tokens STIMULUS, MODEL, VDDH,
// VDDL, VIN_HIGH, VIN_LOW. Numbers are rendered with format_sci. A parameter
// comment block is emitted ahead of the body for downstream tooling.
std::string render_netlist(const netlist_template& tmpl, const case_assignment& c,
                           const sweep_spec& spec, const stimulus& stim,
                           const sim_directives& sim, const render_options& opts = {},
                           std::vector<std::string>* warnings = nullptr);

} // namespace sweepspice
