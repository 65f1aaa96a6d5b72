// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace sweepspice {

// Error categories map onto CLI exit codes: validation -> 1,
// engine/metric/rawfile and anything else -> 2, io -> 3.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed configs, invalid sweep specs, contract violations.
struct validation_error : error {
  using error::error;
};

// External engine failures: spawn, nonzero exit, missing output artifact.
struct engine_error : error {
  using error::error;
};

// The engine process exceeded its timeout and was killed.
struct engine_timeout : engine_error {
  using engine_error::engine_error;
};

// Structural problems in a raw output file.
struct rawfile_error : error {
  using error::error;
};

// A waveform measurement could not be completed.
struct metric_error : error {
  using error::error;
};

// Filesystem or serialization failure.
struct io_error : error {
  using error::error;
};

} // namespace sweepspice
