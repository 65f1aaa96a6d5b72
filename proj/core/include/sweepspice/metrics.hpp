// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "netlist.hpp"
#include "rawfile.hpp"

namespace sweepspice {

struct metrics_record {
  std::uint64_t case_index = 0;
  double p_avg = 0.0;      // W
  double t_d_lh = 0.0;     // s, worst-case output low->high delay
  double t_d_hl = 0.0;     // s, worst-case output high->low delay
  double t_dmax = 0.0;     // s, max of the two
  double pdp = 0.0;        // J, p_avg * t_dmax
  double v_out_low = 0.0;  // V
  double v_out_high = 0.0; // V
  bool full_swing = false;
};

// Steady-state measurement window. By construction t_end - t_start is an
// exact whole number of periods.
struct measure_window {
  double t_start = 0.0;
  double t_end = 0.0;
  int n_periods = 0;

  static measure_window for_stimulus(const stimulus& stim, int settle_periods,
                                     int n_periods);
};

enum class edge_direction { rising, falling, both };

// Threshold crossings by linear interpolation between bracketing samples.
// A sample exactly at the threshold attaches to the direction in which the
// waveform next departs from it.
std::vector<double> crossing_times(const waveform& w, double threshold,
                                   edge_direction direction);

struct delay_pair {
  double t_d_lh;
  double t_d_hl;
};

// Pairs each input edge in the window with the first output edge of the
// expected polarity at or after it; worst case across periods. Thresholds:
// input midswing of (v_in_low, v_in_high), output midswing of (0, v_ddh).
delay_pair propagation_delay(const waveform& vin, const waveform& vout,
                             const stimulus& stim, const measure_window& win,
                             bool inverting);

// Dual-supply average power over the window; trapezoidal on the union of
// both waveforms' sample points, exact for piecewise-linear currents.
// Sign convention: engines report current into the source's positive
// terminal, so delivered power is -V*i.
double average_power(const waveform& i_vddh, const waveform& i_vddl,
                     const stimulus& stim, const measure_window& win);

struct level_pair {
  double v_out_low;
  double v_out_high;
};

// Output levels sampled at the instants just before each input edge start,
// derived from stimulus timing (not from measured vin), averaged over the
// window's periods.
level_pair output_levels(const waveform& vout, const stimulus& stim,
                         const measure_window& win);

struct swing_tolerances {
  double eps_low = 10e-6; // V
  double eps_high = 1e-3; // V
};

bool full_swing(double v_out_low, double v_out_high, const stimulus& stim,
                const swing_tolerances& eps);

// Runs all four measurements on one parsed plot.
metrics_record evaluate_case(const raw_plot& plot, const probe_map& probes,
                             const stimulus& stim, const measure_window& win,
                             bool inverting, const swing_tolerances& eps,
                             std::uint64_t case_index);

} // namespace sweepspice
