#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptycho/epie.hpp"
#include "ptycho/field.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/stack.hpp"

namespace ptycho {

struct RemixConfig {
  int oversample = 3;       ///< Y; real step must be divisible by it
  double weight = 20.0;     ///< w; simulated updates use alpha_base / w
  double w_decay = 1.0;     ///< multiplies w after each outer round
  int outer_iters = 1;
  int epie_sweeps = 2000;
  SweepOrder epie_order = SweepOrder::RandomShuffle;
  std::uint64_t seed = 0;
  double zero_guard = 1e-12;
  double alpha_base = 1.0;

  void validate() const;
};

struct RemixRound {
  double weight = 0.0;
  int sweeps_run = 0;
  double final_update_norm = 0.0;
  std::optional<double> aligned_mse;  ///< only when truth is supplied
  double real_misfit = 0.0;           ///< l1 misfit on the real records
};

struct RemixReport {
  std::vector<RemixRound> rounds;
};

struct RemixResult {
  ComplexField x_hat;
  RemixReport report;
};

/// Same object and probe sizes, step divided by Y. Every position of the
/// original raster appears in the result.
ScanGeometry oversampled_geometry(const ScanGeometry& real_geom, int oversample);

/// Dense stack in simulated order, with real intensities (and Real tags)
/// substituted at their positions. Every real position must exist in the
/// simulated grid.
DiffractionStack splice(const DiffractionStack& real, const DiffractionStack& simulated);

/// One oversample-and-splice round: simulate a dense scan from init, splice
/// in the real records, and run weighted ePIE from a flat all-ones start.
ComplexField remix_once(const ComplexField& init, const ComplexField& probe,
                        const DiffractionStack& real, const ScanGeometry& real_geom,
                        const RemixConfig& cfg);

/// Runs outer_iters rounds, feeding each reconstruction back in as the next
/// init and decaying w. Per-round metrics are logged against truth when given.
RemixResult remix_pipeline(const ComplexField& init, const ComplexField& probe,
                           const DiffractionStack& real, const ScanGeometry& real_geom,
                           const RemixConfig& cfg, const ComplexField* truth = nullptr,
                           double phase_max = 1.0);

}  // namespace ptycho
