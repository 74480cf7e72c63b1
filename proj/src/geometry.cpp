#include "ptycho/geometry.hpp"

#include <set>
#include <string>
#include <utility>

namespace ptycho {

void ScanGeometry::validate() const {
  if (probe_size < 1) throw GeometryError("probe size must be >= 1");
  if (object_size < probe_size) {
    throw GeometryError("object size " + std::to_string(object_size) +
                        " smaller than probe size " + std::to_string(probe_size));
  }
  if (step < 1) throw GeometryError("step must be >= 1");

  std::set<std::pair<int, int>> seen;
  const int limit = object_size - probe_size;
  for (const auto& p : positions) {
    if (p.row < 0 || p.col < 0 || p.row > limit || p.col > limit) {
      throw GeometryError("position (" + std::to_string(p.row) + ", " + std::to_string(p.col) +
                          ") leaves the " + std::to_string(object_size) + "x" +
                          std::to_string(object_size) + " object");
    }
    if (!seen.insert({p.row, p.col}).second) {
      throw GeometryError("duplicate scan position (" + std::to_string(p.row) + ", " +
                          std::to_string(p.col) + ")");
    }
  }
}

ScanGeometry raster_geometry(int object_size, int probe_size, int step) {
  ScanGeometry g;
  g.object_size = object_size;
  g.probe_size = probe_size;
  g.step = step;
  if (probe_size < 1 || object_size < probe_size || step < 1) {
    g.validate();  // throws with a proper message
  }
  const int limit = object_size - probe_size;
  for (int r = 0; r <= limit; r += step) {
    for (int c = 0; c <= limit; c += step) {
      g.positions.push_back({r, c});
    }
  }
  g.validate();
  return g;
}

double overlap_percent(int probe_size, int step) {
  if (probe_size < 1) throw GeometryError("probe size must be >= 1");
  if (step < 1) throw GeometryError("step must be >= 1");
  return 100.0 * static_cast<double>(probe_size - step) / static_cast<double>(probe_size);
}

}  // namespace ptycho
