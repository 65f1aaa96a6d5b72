// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

void stimulus::validate() const {
  if (!(frequency > 0.0))
    throw validation_error("stimulus: frequency must be positive");
  if (!(t_rise > 0.0) || !(t_fall > 0.0))
    throw validation_error("stimulus: rise/fall times must be positive");
  if (t_delay < 0.0)
    throw validation_error("stimulus: delay must be non-negative");
  if (!(c_load > 0.0))
    throw validation_error("stimulus: load capacitance must be positive");
  if (!(v_ddl <= v_ddh))
    throw validation_error("stimulus: v_ddl must not exceed v_ddh");
  if (!(v_in_low < v_in_high))
    throw validation_error("stimulus: v_in_low must be below v_in_high");
  const double p = period();
  if (!(t_rise + t_fall < p))
    throw validation_error("stimulus: t_rise + t_fall must be below the period");
  if (!(pulse_width() > 0.0))
    throw validation_error("stimulus: pulse width is non-positive (t_rise >= period/2)");
  if (pulse_width() + t_rise + t_fall > p)
    throw validation_error("stimulus: width + rise + fall exceeds the period");
}

namespace {

bool is_token_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Every {NAME} occurrence in order of appearance. Throws on malformed tokens.
std::vector<std::string> scan_placeholders(const std::string& body,
                                           const std::string& origin) {
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{')
      continue;
    std::size_t j = i + 1;
    while (j < body.size() && is_token_char(body[j]))
      ++j;
    if (j >= body.size() || body[j] != '}' || j == i + 1)
      throw validation_error(origin + ": malformed placeholder token near '" +
                             body.substr(i, std::min<std::size_t>(12, body.size() - i)) +
                             "'");
    tokens.push_back(body.substr(i + 1, j - i - 1));
    i = j;
  }
  return tokens;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return std::string(s);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

} // namespace

netlist_template parse_template(const std::string& text, const std::string& origin) {
  netlist_template tmpl;
  tmpl.body = text;

  std::istringstream in(text);
  std::string line;
  bool first = true;
  bool have_probes = false;
  while (std::getline(in, line)) {
    if (first) {
      first = false;
      const std::string prefix = "* name:";
      if (line.rfind(prefix, 0) != 0)
        throw validation_error(origin + ": first line must be '* name: <id>'");
      tmpl.name = trim(line.substr(prefix.size()));
      if (tmpl.name.empty())
        throw validation_error(origin + ": template name is empty");
      continue;
    }
    if (line.rfind("* probes:", 0) == 0) {
      std::istringstream fields(line.substr(9));
      std::string kv;
      while (fields >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw validation_error(origin + ": malformed probes entry '" + kv + "'");
        const std::string key = lower(kv.substr(0, eq));
        const std::string value = kv.substr(eq + 1);
        if (key == "vin")
          tmpl.probes.vin = value;
        else if (key == "vout")
          tmpl.probes.vout = value;
        else if (key == "ivddh")
          tmpl.probes.i_vddh = value;
        else if (key == "ivddl")
          tmpl.probes.i_vddl = value;
        else
          throw validation_error(origin + ": unknown probe role '" + key + "'");
      }
      have_probes = true;
    } else if (line.rfind("* inverting:", 0) == 0) {
      const std::string v = lower(trim(line.substr(12)));
      if (v == "true" || v == "1" || v == "yes")
        tmpl.inverting = true;
      else if (v == "false" || v == "0" || v == "no")
        tmpl.inverting = false;
      else
        throw validation_error(origin + ": bad inverting flag '" + v + "'");
    }
  }
  if (!have_probes)
    throw validation_error(origin + ": missing '* probes:' magic comment");

  for (const auto& token : scan_placeholders(tmpl.body, origin))
    tmpl.required_placeholders.insert(token);
  return tmpl;
}

netlist_template load_template(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot open template '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_template(ss.str(), path.string());
}

std::string make_stimulus_cards(const stimulus& stim, int n_periods, double t_step) {
  stim.validate();
  if (n_periods < 2)
    throw validation_error("n_periods must be >= 2 (settle + measure)");
  const double p = stim.period();
  if (t_step <= 0.0)
    t_step = p / 1000.0;
  const double t_stop = stim.t_delay + n_periods * p;

  std::ostringstream out;
  out << "VIN in 0 pulse(" << format_sci(stim.v_in_low) << " " << format_sci(stim.v_in_high)
      << " " << format_sci(stim.t_delay) << " " << format_sci(stim.t_rise) << " "
      << format_sci(stim.t_fall) << " " << format_sci(stim.pulse_width()) << " "
      << format_sci(p) << ")\n";
  out << "VDDH vddh 0 dc " << format_sci(stim.v_ddh) << "\n";
  out << "VDDL vddl 0 dc " << format_sci(stim.v_ddl) << "\n";
  out << "CL out 0 " << format_sci(stim.c_load) << "\n";
  out << ".tran " << format_sci(t_step) << " " << format_sci(t_stop) << "\n";
  return out.str();
}

double resolve_binding(const binding_value& b, const stimulus& stim) {
  if (!b.is_rail())
    return b.value;
  const std::string r = lower(b.rail);
  if (r == "vddh")
    return stim.v_ddh;
  if (r == "vddl")
    return stim.v_ddl;
  if (r == "vinhigh" || r == "vin_high")
    return stim.v_in_high;
  if (r == "vinlow" || r == "vin_low")
    return stim.v_in_low;
  throw validation_error("unknown rail reference '" + b.rail + "'");
}

namespace {

const std::set<std::string> ambient_tokens = {"STIMULUS", "MODEL",    "VDDH",
                                              "VDDL",     "VIN_HIGH", "VIN_LOW"};

} // namespace

std::string render_netlist(const netlist_template& tmpl, const case_assignment& c,
                           const sweep_spec& spec, const stimulus& stim,
                           const sim_directives& sim, const render_options& opts,
                           std::vector<std::string>* warnings) {
  stim.validate();

  // User-supplied substitutions: axis values, fixed parameters, variant
  // bindings. std::map keeps the parameter block deterministic.
  std::map<std::string, double> user;
  auto put = [&](const std::string& name, double value, const char* kind) {
    if (ambient_tokens.count(name))
      throw validation_error(std::string(kind) + " '" + name +
                             "' shadows a reserved ambient token");
    if (!user.emplace(name, value).second)
      throw validation_error(std::string(kind) + " '" + name + "' supplied twice");
  };
  for (const auto& [name, value] : c.axis_values)
    put(name, value, "axis");
  for (const auto& [name, value] : spec.fixed)
    put(name, value, "fixed parameter");
  const config_variant& variant = spec.variant_by_id(c.variant);
  for (const auto& [name, b] : variant.bindings)
    put(name, resolve_binding(b, stim), "variant binding");

  std::map<std::string, std::string> subst;
  for (const auto& [name, value] : user)
    subst[name] = format_sci(value);
  subst["STIMULUS"] = make_stimulus_cards(stim, sim.n_periods(), sim.t_step);
  subst["MODEL"] =
      sim.model_include.empty() ? "* no model include" : ".include " + sim.model_include;
  subst["VDDH"] = format_sci(stim.v_ddh);
  subst["VDDL"] = format_sci(stim.v_ddl);
  subst["VIN_HIGH"] = format_sci(stim.v_in_high);
  subst["VIN_LOW"] = format_sci(stim.v_in_low);

  // Unused user-supplied values are a config smell: the sweep varies or
  // fixes something the netlist ignores.
  for (const auto& [name, value] : user) {
    (void)value;
    if (!tmpl.required_placeholders.count(name)) {
      const std::string msg = "supplied value '" + name + "' is not used by template '" +
                              tmpl.name + "'";
      if (opts.strict_unused)
        throw validation_error(msg);
      if (warnings)
        warnings->push_back(msg);
    }
  }

  std::ostringstream out;
  out << "* sweepspice case " << c.index << " variant " << c.variant << "\n";
  for (const auto& [name, value] : user)
    out << "* param " << name << "=" << format_sci(value) << "\n";
  const double p = stim.period();
  const double t_step = sim.t_step > 0.0 ? sim.t_step : p / 1000.0;
  out << "* stim vddh=" << format_sci(stim.v_ddh) << " vddl=" << format_sci(stim.v_ddl)
      << " vin_low=" << format_sci(stim.v_in_low)
      << " vin_high=" << format_sci(stim.v_in_high)
      << " t_rise=" << format_sci(stim.t_rise) << " t_fall=" << format_sci(stim.t_fall)
      << " t_delay=" << format_sci(stim.t_delay) << " freq=" << format_sci(stim.frequency)
      << " cload=" << format_sci(stim.c_load) << "\n";
  out << "* tran tstep=" << format_sci(t_step)
      << " tstop=" << format_sci(stim.t_delay + sim.n_periods() * p) << "\n";
  out << "* end params\n";

  const std::string& body = tmpl.body;
  for (std::size_t i = 0; i < body.size(); ++i) {
    if (body[i] != '{') {
      out << body[i];
      continue;
    }
    std::size_t j = i + 1;
    while (j < body.size() && is_token_char(body[j]))
      ++j;
    if (j >= body.size() || body[j] != '}' || j == i + 1)
      throw validation_error("template '" + tmpl.name + "': malformed placeholder near '" +
                             body.substr(i, std::min<std::size_t>(12, body.size() - i)) +
                             "'");
    const std::string token = body.substr(i + 1, j - i - 1);
    auto it = subst.find(token);
    if (it == subst.end())
      throw validation_error("missing placeholder value for '{" + token + "}' in template '" +
                             tmpl.name + "'");
    out << it->second;
    i = j;
  }
  return out.str();
}

namespace {

// Reconstructions of the two 5-transistor level converters. Connectivity is
// best effort (the source schematic is not machine-readable); the sweep
// contract is the placeholder set and the probe names. These same bodies
// ship as editable files under configs/templates/.
const char* const nnpt_template_text = R"(* name: nnpt
* probes: vin=v(in) vout=v(out) ivddh=i(vddh) ivddl=i(vddl)
* inverting: false
* Reconstructed 5T NNPT level converter. First stage is a pseudo inverter
* powered from vddh; the output pull-down is a symmetric pair of pass
* devices whose gate biases come from the sweep variant (VG_N2 / VG_N3).
MP1 midh in vddh vddh pmos L={L} W={WP1}
MN1 midh in 0 0 nmos L={L} W={WN1}
MP2 out midh vddh vddh pmos L={L} W={WP2}
MN2 out gn2 in 0 nmos L={L} W={WN2}
MN3 out gn3 in 0 nmos L={L} W={WN3}
VGN2 gn2 0 dc {VG_N2}
VGN3 gn3 0 dc {VG_N3}
{STIMULUS}
{MODEL}
.end
)";

const char* const pnpt_template_text = R"(* name: pnpt
* probes: vin=v(in) vout=v(out) ivddh=i(vddh) ivddl=i(vddl)
* inverting: false
* Reconstructed 5T PNPT level converter. Same first stage as NNPT; the
* pull-down pair is one bias-gated NMOS plus one PMOS pass device.
MP1 midh in vddh vddh pmos L={L} W={WP1}
MN1 midh in 0 0 nmos L={L} W={WN1}
MP2 out midh vddh vddh pmos L={L} W={WP2}
MN2 out vddh in 0 nmos L={L} W={WN2}
MP3 in in out vddh pmos L={L} W={WP3}
{STIMULUS}
{MODEL}
.end
)";

const char* const toy_template_text = R"(* name: toy_rc
* probes: vin=v(in) vout=v(out) ivddh=i(vddh) ivddl=i(vddl)
* Minimal fixture for the mock engine: one switching pair driving the load.
MP1 out in vddh vddh pmos L={L} W={W1}
MN1 out in 0 0 nmos L={L} W={W2}
{STIMULUS}
{MODEL}
.end
)";

} // namespace

std::vector<netlist_template> builtin_templates() {
  return {parse_template(nnpt_template_text, "builtin:nnpt"),
          parse_template(pnpt_template_text, "builtin:pnpt"),
          parse_template(toy_template_text, "builtin:toy_rc")};
}

netlist_template builtin_template(std::string_view name) {
  for (auto& t : builtin_templates())
    if (t.name == name)
      return t;
  throw validation_error("no builtin template named '" + std::string(name) + "'");
}

} // namespace sweepspice
