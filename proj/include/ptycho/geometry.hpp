#pragma once

#include <vector>

#include "ptycho/errors.hpp"

namespace ptycho {

/// Top-left corner of a probe window, in object pixel coordinates.
struct Position {
  int row = 0;
  int col = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

/// A scan over a square object with a square probe window.
///
/// Every position must keep the full S x S window inside the T x T object.
struct ScanGeometry {
  int object_size = 0;  ///< T
  int probe_size = 0;   ///< S
  int step = 0;         ///< nominal raster step, kept for bookkeeping
  std::vector<Position> positions;

  /// Throws GeometryError on out-of-bounds or duplicate positions.
  void validate() const;
};

/// Row-major raster grid: rows and cols in {0, step, 2*step, ...} <= T - S.
ScanGeometry raster_geometry(int object_size, int probe_size, int step);

/// Linear overlap between adjacent windows: 100 * (S - step) / S.
double overlap_percent(int probe_size, int step);

}  // namespace ptycho
