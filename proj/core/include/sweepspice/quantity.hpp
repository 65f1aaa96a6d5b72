// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sweepspice {

// Shortest lowercase scientific form that round-trips float64, e.g. 9e-08.
// This is the only numeric form ever placed inside a netlist.
std::string format_sci(double v);

// 17-significant-digit decimal, lossless for float64. Used by all persisted files.
std::string format_full(double v);

// 6-significant-digit display rounding used in rendered tables.
std::string format_display(double v);

// Engineering-prefix display, mantissa in [1, 1000): 9e-08 -> "90n".
std::string format_eng(double v);

// Parses CLI quantities: plain decimals plus SPICE-style suffixes
// (f p n u m k meg g t, case-insensitive). "40n" -> 4e-08, "5f" -> 5e-15.
// Suffixes are accepted on command-line flags only, never inside netlists.
std::optional<double> parse_quantity(std::string_view text);

} // namespace sweepspice
