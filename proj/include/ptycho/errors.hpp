#pragma once

#include <stdexcept>
#include <string>

namespace ptycho {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Array or field sizes do not match.
struct DimensionError : Error {
  using Error::Error;
};

/// A scan position or window falls outside the object.
struct GeometryError : Error {
  using Error::Error;
};

/// A value-level invariant is violated (non-finite data, out-of-range input).
struct ValidationError : Error {
  using Error::Error;
};

/// Bad configuration: invalid parameter combination or malformed config file.
struct ConfigError : Error {
  using Error::Error;
};

/// Real and simulated stacks cannot be combined.
struct SpliceError : Error {
  using Error::Error;
};

/// A metric cannot be evaluated (e.g. empty mask).
struct MetricError : Error {
  using Error::Error;
};

/// File read/write failure.
struct IoError : Error {
  using Error::Error;
};

/// Numerical breakdown (NaN/Inf produced, degenerate probe).
struct NumericError : Error {
  using Error::Error;
};

}  // namespace ptycho
