// SPDX-License-Identifier: Apache-2.0
//
// Closed-form stand-in for a SPICE engine, for offline end-to-end runs and
// oracle tests. The full model is documented in docs/mock_engine.md; the
// numbers below and there must stay in sync.
#include "sweepspice/engine.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "sweepspice/errors.hpp"
#include "sweepspice/rawfile.hpp"

namespace sweepspice {

namespace {

// Model constants. R_SCALE converts the geometry ratio into a time constant;
// C_AREA adds self-loading so larger devices stop being uniformly faster;
// W_REF/L_REF center the u-shaped static-current terms inside typical grids.
constexpr double r_scale = 1e6;   // ohm
constexpr double c_area = 0.08;   // F/m^2
constexpr double w_ref = 800e-9;  // m
constexpr double l_ref = 140e-9;  // m
constexpr double i_h0 = 30e-9;    // A
constexpr double i_l0 = 10e-9;    // A

struct mock_inputs {
  std::map<std::string, double> params;
  double vddh = 0, vddl = 0, vin_low = 0, vin_high = 0;
  double t_rise = 0, t_fall = 0, t_delay = 0, freq = 0, cload = 0;
  double tstep = 0, tstop = 0;
};

double parse_double_or_throw(std::string_view tok, const std::string& where) {
  double out = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
    throw validation_error("mock engine: bad number '" + std::string(tok) + "' in " + where);
  return out;
}

mock_inputs parse_param_block(const std::string& netlist) {
  mock_inputs in;
  bool saw_stim = false;
  bool saw_tran = false;

  std::istringstream lines(netlist);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("* param ", 0) == 0) {
      const std::string rest = line.substr(8);
      auto eq = rest.find('=');
      if (eq == std::string::npos)
        throw validation_error("mock engine: malformed param line '" + line + "'");
      in.params[rest.substr(0, eq)] = parse_double_or_throw(rest.substr(eq + 1), line);
    } else if (line.rfind("* stim ", 0) == 0 || line.rfind("* tran ", 0) == 0) {
      const bool is_stim = line[2] == 's';
      std::istringstream fields(line.substr(7));
      std::string kv;
      while (fields >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw validation_error("mock engine: malformed entry '" + kv + "' in '" + line + "'");
        const std::string key = kv.substr(0, eq);
        const double value = parse_double_or_throw(kv.substr(eq + 1), line);
        if (is_stim) {
          if (key == "vddh") in.vddh = value;
          else if (key == "vddl") in.vddl = value;
          else if (key == "vin_low") in.vin_low = value;
          else if (key == "vin_high") in.vin_high = value;
          else if (key == "t_rise") in.t_rise = value;
          else if (key == "t_fall") in.t_fall = value;
          else if (key == "t_delay") in.t_delay = value;
          else if (key == "freq") in.freq = value;
          else if (key == "cload") in.cload = value;
        } else {
          if (key == "tstep") in.tstep = value;
          else if (key == "tstop") in.tstop = value;
        }
      }
      (is_stim ? saw_stim : saw_tran) = true;
    }
  }

  if (!saw_stim || !saw_tran || in.params.empty())
    throw validation_error(
        "mock engine: netlist lacks the sweepspice parameter comment block");
  if (!(in.freq > 0) || !(in.tstop > 0) || !(in.tstep > 0) || !(in.cload > 0) ||
      !(in.vin_high > in.vin_low))
    throw validation_error("mock engine: parameter block has inconsistent stimulus values");
  return in;
}

double pulse_value(const mock_inputs& in, double t) {
  if (t <= in.t_delay)
    return in.vin_low;
  const double p = 1.0 / in.freq;
  const double width = p / 2.0 - in.t_rise;
  double x = std::fmod(t - in.t_delay, p);
  if (x < 0)
    x += p;
  if (x < in.t_rise)
    return in.vin_low + (in.vin_high - in.vin_low) * (x / in.t_rise);
  if (x < in.t_rise + width)
    return in.vin_high;
  if (x < in.t_rise + width + in.t_fall)
    return in.vin_high -
           (in.vin_high - in.vin_low) * ((x - in.t_rise - width) / in.t_fall);
  return in.vin_low;
}

} // namespace

std::string mock_engine_run(const std::string& netlist) {
  const mock_inputs in = parse_param_block(netlist);

  double l_sum = 0.0;
  double w_sum = 0.0;
  for (const auto& [name, value] : in.params) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
    if (c == 'L')
      l_sum += value;
    else if (c == 'W')
      w_sum += value;
  }
  if (!(l_sum > 0.0) || !(w_sum > 0.0))
    throw validation_error("mock engine: parameter block has no positive L/W parameters");

  const double tau = r_scale * (in.cload * l_sum / w_sum + c_area * l_sum * l_sum);
  const double i_h = i_h0 * 0.5 * (w_sum / w_ref + w_ref / w_sum);
  const double i_l = i_l0 * 0.5 * (l_sum / l_ref + l_ref / l_sum);

  const double p = 1.0 / in.freq;
  const double width = p / 2.0 - in.t_rise;

  // Sample grid: uniform tstep base, the exact pulse breakpoints, and a
  // geometric tail after every breakpoint to resolve the exponentials.
  std::vector<double> grid;
  grid.push_back(0.0);
  grid.push_back(in.tstop);
  for (double t = in.tstep; t < in.tstop; t += in.tstep)
    grid.push_back(t);
  std::vector<double> breakpoints{in.t_delay};
  for (long long k = 0;; ++k) {
    const double r0 = in.t_delay + static_cast<double>(k) * p;
    if (r0 > in.tstop)
      break;
    for (double b : {r0, r0 + in.t_rise, r0 + in.t_rise + width,
                     r0 + in.t_rise + width + in.t_fall})
      if (b >= 0.0 && b <= in.tstop)
        breakpoints.push_back(b);
  }
  constexpr int tail_points = 48;
  const double tail_ratio = std::pow(8.0 / 0.02, 1.0 / (tail_points - 1));
  for (double b : breakpoints) {
    grid.push_back(b);
    double off = 0.02 * tau;
    for (int j = 0; j < tail_points; ++j, off *= tail_ratio) {
      const double t = b + off;
      if (t < in.tstop)
        grid.push_back(t);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  // First-order RC response to the drive mapped onto the high rail:
  // u = vddh * (vin - vin_low) / (vin_high - vin_low), dv/dt = (u - v)/tau.
  // Piecewise-exponential closed form stepping over the grid; exact because
  // every pulse breakpoint is a grid point, so u is linear on each step.
  const double span = in.vin_high - in.vin_low;
  auto drive = [&](double t) {
    return in.vddh * (pulse_value(in, t) - in.vin_low) / span;
  };

  const std::size_t n = grid.size();
  std::vector<double> vin_s(n), vout_s(n), dvout_s(n);
  double v = drive(grid[0]);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = grid[i];
    vin_s[i] = pulse_value(in, t);
    if (i > 0) {
      const double t0 = grid[i - 1];
      const double dt = t - t0;
      const double u0 = drive(t0);
      const double u1 = drive(t);
      const double slope = (u1 - u0) / dt;
      // v(t) = u(t) - slope*tau + (v0 - u0 + slope*tau) * exp(-dt/tau)
      v = u1 - slope * tau + (v - u0 + slope * tau) * std::exp(-dt / tau);
    }
    vout_s[i] = v;
    dvout_s[i] = (drive(t) - v) / tau;
  }

  raw_plot plot;
  plot.title = "sweepspice mock engine";
  plot.date = "n/a";
  plot.plotname = "Transient Analysis";
  plot.variables = {{"time", var_kind::time},
                    {"v(in)", var_kind::voltage},
                    {"v(out)", var_kind::voltage},
                    {"i(vddh)", var_kind::current},
                    {"i(vddl)", var_kind::current}};
  plot.values.reserve(n * 5);
  for (std::size_t i = 0; i < n; ++i) {
    plot.values.push_back(grid[i]);
    plot.values.push_back(vin_s[i]);
    plot.values.push_back(vout_s[i]);
    // Half the load current is drawn through the high rail (signed, so the
    // steady-state charging contribution integrates to ~zero), plus the
    // u-shaped static draw. The low rail carries a static term only.
    plot.values.push_back(-(i_h + 0.5 * in.cload * dvout_s[i]));
    plot.values.push_back(-i_l);
  }
  return write_rawfile({plot}, raw_format::binary);
}

} // namespace sweepspice
