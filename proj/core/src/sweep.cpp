// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/sweep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sweepspice/errors.hpp"
#include "sweepspice/quantity.hpp"

namespace sweepspice {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty())
    return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

// Column names of the results file; axis names may not shadow them.
const std::set<std::string> reserved_names = {
    "index",    "variant", "status",       "p_avg_w",      "t_d_lh_s",  "t_d_hl_s",
    "t_dmax_s", "pdp_j",   "v_out_low_v",  "v_out_high_v", "full_swing"};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out))
    throw validation_error("case count overflows 64-bit arithmetic");
  return out;
}

} // namespace

double case_assignment::value_of(std::string_view axis) const {
  for (const auto& [name, value] : axis_values)
    if (name == axis)
      return value;
  throw validation_error("case has no axis named '" + std::string(axis) + "'");
}

void sweep_spec::validate() const {
  if (axes.empty())
    throw validation_error("sweep spec has no axes");
  if (variants.empty())
    throw validation_error("sweep spec has no variants");

  std::set<std::string> names;
  for (const auto& axis : axes) {
    if (!is_identifier(axis.name))
      throw validation_error("axis name '" + axis.name + "' is not an identifier");
    if (reserved_names.count(axis.name))
      throw validation_error("axis name '" + axis.name + "' is reserved");
    if (!names.insert(axis.name).second)
      throw validation_error("duplicate axis name '" + axis.name + "'");
    if (axis.values_m.empty())
      throw validation_error("axis '" + axis.name + "' has no values");
    double prev = 0.0;
    for (double v : axis.values_m) {
      if (!(v > 0.0))
        throw validation_error("axis '" + axis.name + "' has a non-positive value");
      if (!(v > prev))
        throw validation_error("axis '" + axis.name + "' values are not strictly increasing");
      prev = v;
    }
  }

  for (const auto& [name, value] : fixed) {
    if (!is_identifier(name))
      throw validation_error("fixed parameter name '" + name + "' is not an identifier");
    if (names.count(name))
      throw validation_error("fixed parameter '" + name + "' collides with an axis");
    (void)value;
  }

  std::set<std::string> ids;
  for (const auto& variant : variants) {
    if (variant.id.empty())
      throw validation_error("variant with empty id");
    if (!ids.insert(variant.id).second)
      throw validation_error("duplicate variant id '" + variant.id + "'");
    for (const auto& [name, b] : variant.bindings) {
      if (!is_identifier(name))
        throw validation_error("binding name '" + name + "' is not an identifier");
      if (names.count(name))
        throw validation_error("variant '" + variant.id + "' binding '" + name +
                               "' collides with an axis");
      (void)b;
    }
  }
}

std::uint64_t sweep_spec::case_count() const {
  validate();
  std::uint64_t count = 1;
  for (const auto& axis : axes)
    count = checked_mul(count, axis.values_m.size());
  return checked_mul(count, variants.size());
}

case_assignment sweep_spec::case_by_index(std::uint64_t i) const {
  const std::uint64_t count = case_count();
  if (i >= count)
    throw validation_error("case index " + std::to_string(i) + " out of range [0, " +
                           std::to_string(count) + ")");

  case_assignment c;
  c.index = i;
  c.axis_values.reserve(axes.size());
  std::uint64_t rest = i;
  for (const auto& axis : axes) {
    const std::uint64_t n = axis.values_m.size();
    c.axis_values.emplace_back(axis.name, axis.values_m[rest % n]);
    rest /= n;
  }
  c.variant = variants[rest].id;
  return c;
}

std::uint64_t sweep_spec::index_of(const case_assignment& c) const {
  if (c.axis_values.size() != axes.size())
    throw validation_error("assignment does not cover every axis");

  std::uint64_t index = 0;
  std::uint64_t stride = 1;
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const auto& axis = axes[k];
    const auto& [name, value] = c.axis_values[k];
    if (name != axis.name)
      throw validation_error("assignment axis order mismatch at '" + name + "'");
    auto it = std::find(axis.values_m.begin(), axis.values_m.end(), value);
    if (it == axis.values_m.end())
      throw validation_error("value not on axis '" + axis.name + "'");
    index += stride * static_cast<std::uint64_t>(it - axis.values_m.begin());
    stride = checked_mul(stride, axis.values_m.size());
  }
  auto vit = std::find_if(variants.begin(), variants.end(),
                          [&](const config_variant& v) { return v.id == c.variant; });
  if (vit == variants.end())
    throw validation_error("unknown variant id '" + c.variant + "'");
  return index + stride * static_cast<std::uint64_t>(vit - variants.begin());
}

const config_variant& sweep_spec::variant_by_id(std::string_view id) const {
  for (const auto& v : variants)
    if (v.id == id)
      return v;
  throw validation_error("unknown variant id '" + std::string(id) + "'");
}

case_range enumerate_cases(const sweep_spec& spec) {
  return case_range(spec, 0, spec.case_count());
}

case_range shard(const sweep_spec& spec, std::uint64_t n_shards, std::uint64_t shard_id) {
  if (n_shards == 0)
    throw validation_error("n_shards must be >= 1");
  if (shard_id >= n_shards)
    throw validation_error("shard id " + std::to_string(shard_id) + " not below " +
                           std::to_string(n_shards));
  const std::uint64_t count = spec.case_count();
  const std::uint64_t base = count / n_shards;
  const std::uint64_t rem = count % n_shards;
  const std::uint64_t first = shard_id * base + std::min<std::uint64_t>(shard_id, rem);
  const std::uint64_t size = base + (shard_id < rem ? 1 : 0);
  return case_range(spec, first, first + size);
}

namespace {

using json = nlohmann::json;

binding_value binding_from_json(const json& j, const std::string& where) {
  binding_value b;
  if (j.is_number()) {
    b.value = j.get<double>();
    return b;
  }
  if (j.is_string()) {
    b.rail = j.get<std::string>();
    return b;
  }
  throw validation_error(where + ": binding must be a number or rail name string");
}

} // namespace

sweep_spec parse_sweep_config(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw validation_error(origin + ": not valid JSON: " + e.what());
  }
  if (!j.is_object())
    throw validation_error(origin + ": top level must be an object");

  sweep_spec spec;
  if (!j.contains("axes") || !j["axes"].is_array())
    throw validation_error(origin + ": missing 'axes' array");
  for (const auto& ja : j["axes"]) {
    parameter_axis axis;
    if (!ja.is_object() || !ja.contains("name") || !ja.contains("values_m"))
      throw validation_error(origin + ": each axis needs 'name' and 'values_m'");
    axis.name = ja["name"].get<std::string>();
    for (const auto& v : ja["values_m"]) {
      if (!v.is_number())
        throw validation_error(origin + ": axis '" + axis.name +
                               "' values_m must be numbers (meters)");
      axis.values_m.push_back(v.get<double>());
    }
    spec.axes.push_back(std::move(axis));
  }

  if (j.contains("fixed")) {
    if (!j["fixed"].is_object())
      throw validation_error(origin + ": 'fixed' must be an object");
    for (const auto& [name, v] : j["fixed"].items()) {
      if (!v.is_number())
        throw validation_error(origin + ": fixed '" + name + "' must be a number");
      spec.fixed[name] = v.get<double>();
    }
  }

  if (j.contains("variants")) {
    if (!j["variants"].is_array())
      throw validation_error(origin + ": 'variants' must be an array");
    for (const auto& jv : j["variants"]) {
      config_variant variant;
      if (!jv.is_object() || !jv.contains("id"))
        throw validation_error(origin + ": each variant needs an 'id'");
      variant.id = jv["id"].get<std::string>();
      if (jv.contains("bindings"))
        for (const auto& [name, b] : jv["bindings"].items())
          variant.bindings[name] =
              binding_from_json(b, origin + ": variant '" + variant.id + "'");
      spec.variants.push_back(std::move(variant));
    }
  }
  if (spec.variants.empty())
    spec.variants.push_back(config_variant{"default", {}});

  spec.validate();
  return spec;
}

sweep_spec load_sweep_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw io_error("cannot open sweep config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_sweep_config(ss.str(), path.string());
}

std::string dump_sweep_config(const sweep_spec& spec) {
  json j;
  j["axes"] = json::array();
  for (const auto& axis : spec.axes) {
    json ja;
    ja["name"] = axis.name;
    ja["values_m"] = axis.values_m;
    j["axes"].push_back(ja);
  }
  j["fixed"] = json::object();
  for (const auto& [name, value] : spec.fixed)
    j["fixed"][name] = value;
  j["variants"] = json::array();
  for (const auto& v : spec.variants) {
    json jv;
    jv["id"] = v.id;
    jv["bindings"] = json::object();
    for (const auto& [name, b] : v.bindings) {
      if (b.is_rail())
        jv["bindings"][name] = b.rail;
      else
        jv["bindings"][name] = b.value;
    }
    j["variants"].push_back(jv);
  }
  return j.dump();
}

namespace {

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

std::string sweep_fingerprint(const sweep_spec& spec, const std::string& template_body) {
  std::uint64_t h = fnv1a64(dump_sweep_config(spec));
  h = fnv1a64(std::string_view("\0", 1), h);
  h = fnv1a64(template_body, h);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

} // namespace sweepspice
