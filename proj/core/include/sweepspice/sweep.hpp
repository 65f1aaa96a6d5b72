// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sweepspice {

// One swept parameter: an ordered list of lengths in meters.
struct parameter_axis {
  std::string name;
  std::vector<double> values_m;
};

// A variant binding is either a literal voltage or a symbolic rail name
// ("vddH", "vddL", "vinHigh", "vinLow") resolved against the stimulus at
// render time.
struct binding_value {
  double value = 0.0;
  std::string rail; // non-empty when symbolic

  bool is_rail() const { return !rail.empty(); }
};

struct config_variant {
  std::string id;
  std::map<std::string, binding_value> bindings;
};

// One point of the design space. axis_values follows axis declaration order.
struct case_assignment {
  std::uint64_t index = 0;
  std::vector<std::pair<std::string, double>> axis_values;
  std::string variant;

  double value_of(std::string_view axis) const; // throws validation_error
};

struct sweep_spec {
  std::vector<parameter_axis> axes;
  std::map<std::string, double> fixed;
  std::vector<config_variant> variants; // never empty once validated

  void validate() const; // throws validation_error

  // Exact product of axis cardinalities times variant count; 64-bit checked.
  std::uint64_t case_count() const;

  // Mixed-radix decode. Axes vary fastest-to-slowest in declaration order,
  // the variant is the outermost digit. Bijective over [0, case_count).
  case_assignment case_by_index(std::uint64_t i) const;

  // Inverse of case_by_index.
  std::uint64_t index_of(const case_assignment& c) const;

  const config_variant& variant_by_id(std::string_view id) const;
};

// Lazily decoded, ordered view over a contiguous index range of a spec.
class case_range {
public:
  class iterator {
  public:
    using value_type = case_assignment;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    iterator(const sweep_spec* spec, std::uint64_t i) : spec_(spec), i_(i) {}

    case_assignment operator*() const { return spec_->case_by_index(i_); }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      iterator t = *this;
      ++i_;
      return t;
    }
    bool operator==(const iterator& o) const { return i_ == o.i_; }
    bool operator!=(const iterator& o) const { return i_ != o.i_; }

  private:
    const sweep_spec* spec_ = nullptr;
    std::uint64_t i_ = 0;
  };

  case_range(const sweep_spec& spec, std::uint64_t first, std::uint64_t last)
      : spec_(&spec), first_(first), last_(last) {}

  iterator begin() const { return {spec_, first_}; }
  iterator end() const { return {spec_, last_}; }
  std::uint64_t size() const { return last_ - first_; }
  std::uint64_t first_index() const { return first_; }
  std::uint64_t last_index() const { return last_; }

private:
  const sweep_spec* spec_;
  std::uint64_t first_;
  std::uint64_t last_;
};

// All cases of the spec in index order.
case_range enumerate_cases(const sweep_spec& spec);

// Contiguous shard shard_id of n_shards; sizes differ by at most one and the
// concatenation over all shard ids equals enumerate_cases exactly.
case_range shard(const sweep_spec& spec, std::uint64_t n_shards, std::uint64_t shard_id);

// Sweep config file I/O (JSON; schema documented in README).
sweep_spec parse_sweep_config(const std::string& json_text, const std::string& origin);
sweep_spec load_sweep_config(const std::filesystem::path& path);
std::string dump_sweep_config(const sweep_spec& spec);

// Content hash over the canonical config dump plus the template body; stamped
// into results files so reports can refuse mismatched inputs.
std::string sweep_fingerprint(const sweep_spec& spec, const std::string& template_body);

} // namespace sweepspice
