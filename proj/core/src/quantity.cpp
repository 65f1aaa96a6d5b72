// SPDX-License-Identifier: Apache-2.0
#include "sweepspice/quantity.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>

namespace sweepspice {

std::string format_sci(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific);
  return std::string(buf, res.ptr);
}

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_display(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string format_eng(double v) {
  if (v == 0.0 || !std::isfinite(v))
    return format_display(v);

  static constexpr struct {
    double scale;
    const char* suffix;
  } prefixes[] = {
      {1e-15, "f"}, {1e-12, "p"}, {1e-9, "n"}, {1e-6, "u"}, {1e-3, "m"},
      {1.0, ""},    {1e3, "k"},   {1e6, "meg"}, {1e9, "g"},  {1e12, "t"},
  };

  double mag = std::fabs(v);
  for (const auto& p : prefixes) {
    double mant = mag / p.scale;
    if (mant >= 1.0 - 1e-12 && mant < 1000.0 - 1e-9)
      return format_display(v / p.scale) + p.suffix;
  }
  return format_display(v);
}

std::optional<double> parse_quantity(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  if (text.empty())
    return std::nullopt;

  const char* first = text.data();
  const char* last = text.data() + text.size();
  double value = 0.0;
  auto res = std::from_chars(first, last, value);
  if (res.ec != std::errc{})
    return std::nullopt;

  std::string suffix(res.ptr, last);
  for (auto& c : suffix)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));

  if (suffix.empty())
    return value;
  // "meg" must be matched before the milli prefix.
  if (suffix == "meg")
    return value * 1e6;
  if (suffix.size() != 1)
    return std::nullopt;
  switch (suffix[0]) {
  case 'f': return value * 1e-15;
  case 'p': return value * 1e-12;
  case 'n': return value * 1e-9;
  case 'u': return value * 1e-6;
  case 'm': return value * 1e-3;
  case 'k': return value * 1e3;
  case 'g': return value * 1e9;
  case 't': return value * 1e12;
  default: return std::nullopt;
  }
}

} // namespace sweepspice
