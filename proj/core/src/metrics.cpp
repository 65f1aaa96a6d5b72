// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

measure_window measure_window::for_stimulus(const stimulus& stim, int settle_periods,
                                            int n_periods) {
  stim.validate();
  if (settle_periods < 0)
    throw validation_error("settle_periods must be >= 0");
  if (n_periods < 1)
    throw validation_error("measurement window needs at least one period");
  measure_window w;
  const double p = stim.period();
  w.t_start = stim.t_delay + settle_periods * p;
  w.t_end = w.t_start + n_periods * p;
  w.n_periods = n_periods;
  return w;
}

namespace {

struct edge_event {
  double t;
  bool rising;
};

// All threshold crossings, linear interpolation between bracketing samples.
// A run of samples exactly at the threshold yields one event at the run's
// first sample, in the direction the waveform departs.
std::vector<edge_event> find_crossings(const waveform& w, double threshold) {
  w.validate();
  std::vector<edge_event> out;
  const auto& t = w.t;
  const auto& v = w.v;
  const std::size_t n = t.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (v[i] == threshold) {
      if (i > 0 && v[i - 1] == threshold)
        continue; // interior of a run, already reported
      std::size_t j = i + 1;
      while (j < n && v[j] == threshold)
        ++j;
      if (j == n)
        break; // waveform ends on the threshold
      out.push_back({t[i], v[j] > threshold});
      continue;
    }
    const bool below = v[i] < threshold;
    const bool next_above = v[i + 1] > threshold;
    const bool next_below = v[i + 1] < threshold;
    if ((below && next_above) || (!below && next_below)) {
      const double tc = t[i] + (threshold - v[i]) * (t[i + 1] - t[i]) / (v[i + 1] - v[i]);
      out.push_back({tc, next_above});
    }
  }
  return out;
}

void require_span(const waveform& w, const measure_window& win) {
  if (!w.spans(win.t_start, win.t_end))
    throw metric_error("waveform '" + w.name + "' [" + format_full(w.t_front()) + ", " +
                       format_full(w.t_back()) + "] does not span the window [" +
                       format_full(win.t_start) + ", " + format_full(win.t_end) + "]");
}

} // namespace

std::vector<double> crossing_times(const waveform& w, double threshold,
                                   edge_direction direction) {
  std::vector<double> out;
  for (const auto& e : find_crossings(w, threshold)) {
    if (direction == edge_direction::rising && !e.rising)
      continue;
    if (direction == edge_direction::falling && e.rising)
      continue;
    out.push_back(e.t);
  }
  return out;
}

delay_pair propagation_delay(const waveform& vin, const waveform& vout,
                             const stimulus& stim, const measure_window& win,
                             bool inverting) {
  require_span(vin, win);
  require_span(vout, win);

  const double th_in = 0.5 * (stim.v_in_low + stim.v_in_high);
  const double th_out = 0.5 * stim.v_ddh;

  const auto in_edges = find_crossings(vin, th_in);
  const auto out_edges = find_crossings(vout, th_out);

  bool saw_input = false;
  double worst_lh = -1.0;
  double worst_hl = -1.0;
  for (const auto& e : in_edges) {
    if (e.t < win.t_start || e.t > win.t_end)
      continue;
    saw_input = true;
    const bool want_rising = inverting ? !e.rising : e.rising;
    const edge_event* match = nullptr;
    for (const auto& o : out_edges) {
      if (o.t >= e.t && o.rising == want_rising) {
        match = &o;
        break;
      }
    }
    if (!match)
      throw metric_error("incomplete switching: no " +
                         std::string(want_rising ? "rising" : "falling") +
                         " output edge at or after input edge at t=" + format_full(e.t));
    const double d = match->t - e.t;
    if (want_rising)
      worst_lh = std::max(worst_lh, d);
    else
      worst_hl = std::max(worst_hl, d);
  }

  if (!saw_input)
    throw metric_error("no input transitions inside the measurement window");
  if (worst_lh < 0.0 || worst_hl < 0.0)
    throw metric_error(std::string("incomplete switching: no ") +
                       (worst_lh < 0.0 ? "low-to-high" : "high-to-low") +
                       " output transition measured in the window");
  return {worst_lh, worst_hl};
}

double average_power(const waveform& i_vddh, const waveform& i_vddl,
                     const stimulus& stim, const measure_window& win) {
  require_span(i_vddh, win);
  require_span(i_vddl, win);

  // Union of both waveforms' sample points inside the window plus the window
  // edges. Both currents are piecewise linear on this grid, so the
  // trapezoidal rule integrates the model exactly.
  std::vector<double> times;
  times.reserve(i_vddh.t.size() + i_vddl.t.size() + 2);
  times.push_back(win.t_start);
  for (const auto* w : {&i_vddh, &i_vddl}) {
    auto lo = std::lower_bound(w->t.begin(), w->t.end(), win.t_start);
    auto hi = std::upper_bound(w->t.begin(), w->t.end(), win.t_end);
    times.insert(times.end(), lo, hi);
  }
  times.push_back(win.t_end);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  // Engine sign convention: reported current flows into the source's
  // positive terminal; delivered power is -V*i.
  auto integrand = [&](double t) {
    return stim.v_ddh * (-i_vddh.value_at(t)) + stim.v_ddl * (-i_vddl.value_at(t));
  };

  double integral = 0.0;
  double prev_t = times.front();
  double prev_f = integrand(prev_t);
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double t = times[i];
    const double f = integrand(t);
    integral += 0.5 * (f + prev_f) * (t - prev_t);
    prev_t = t;
    prev_f = f;
  }
  return integral / (win.t_end - win.t_start);
}

level_pair output_levels(const waveform& vout, const stimulus& stim,
                         const measure_window& win) {
  require_span(vout, win);
  const double p = stim.period();
  if (win.t_end - win.t_start < p * (1.0 - 1e-12))
    throw metric_error("measurement window is shorter than one period");

  // Edge-start instants come from the stimulus timing, not from measured
  // vin: rising edges start at t_delay + k*period, falling edges half a
  // period later (width = period/2 - t_rise by construction).
  const double half = stim.t_rise + stim.pulse_width();
  const double tol = p * 1e-9;

  double low_sum = 0.0, high_sum = 0.0;
  int low_n = 0, high_n = 0;
  const auto k_first = static_cast<long long>(
      std::floor((win.t_start - stim.t_delay) / p) - 1);
  for (long long k = std::max(0ll, k_first);; ++k) {
    const double rise_start = stim.t_delay + static_cast<double>(k) * p;
    const double fall_start = rise_start + half;
    if (rise_start >= win.t_end - tol && fall_start >= win.t_end - tol)
      break;
    if (rise_start >= win.t_start - tol && rise_start < win.t_end - tol) {
      low_sum += vout.value_at(rise_start);
      ++low_n;
    }
    if (fall_start >= win.t_start - tol && fall_start < win.t_end - tol) {
      high_sum += vout.value_at(fall_start);
      ++high_n;
    }
  }

  if (low_n == 0 || high_n == 0)
    throw metric_error("no full input period inside the measurement window");
  return {low_sum / low_n, high_sum / high_n};
}

bool full_swing(double v_out_low, double v_out_high, const stimulus& stim,
                const swing_tolerances& eps) {
  return v_out_low <= eps.eps_low && std::fabs(v_out_high - stim.v_ddh) <= eps.eps_high;
}

metrics_record evaluate_case(const raw_plot& plot, const probe_map& probes,
                             const stimulus& stim, const measure_window& win,
                             bool inverting, const swing_tolerances& eps,
                             std::uint64_t case_index) {
  const waveform vin = get_trace(plot, probes.vin);
  const waveform vout = get_trace(plot, probes.vout);
  const waveform ih = get_trace(plot, probes.i_vddh);
  const waveform il = get_trace(plot, probes.i_vddl);

  const delay_pair d = propagation_delay(vin, vout, stim, win, inverting);
  const double p = average_power(ih, il, stim, win);
  level_pair lv = output_levels(vout, stim, win);
  if (inverting)
    std::swap(lv.v_out_low, lv.v_out_high);

  metrics_record m;
  m.case_index = case_index;
  m.p_avg = p;
  m.t_d_lh = d.t_d_lh;
  m.t_d_hl = d.t_d_hl;
  m.t_dmax = std::max(d.t_d_lh, d.t_d_hl);
  m.pdp = m.p_avg * m.t_dmax;
  m.v_out_low = lv.v_out_low;
  m.v_out_high = lv.v_out_high;
  m.full_swing = full_swing(m.v_out_low, m.v_out_high, stim, eps);
  return m;
}

} // namespace sweepspice
