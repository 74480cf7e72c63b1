#pragma once

#include <cstdint>

#include "ptycho/field.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/stack.hpp"

namespace ptycho {

enum class ProbeProfile {
  TopHat,        ///< constant amplitude inside the disk, zero outside
  GaussianEdge,  ///< constant inside, Gaussian rolloff of width edge_sigma past the rim
};

/// Synthetic probe description: a flat-phase disk of the given diameter
/// centered on the S x S grid.
struct ProbeSpec {
  int size = 60;
  int diameter = 60;
  ProbeProfile profile = ProbeProfile::TopHat;
  double edge_sigma = 2.0;  ///< only used by GaussianEdge
  double amplitude = 1.0;

  void validate() const;
};

/// Poisson photon-counting noise model. Intensities are scaled to expected
/// photon counts, sampled, and scaled back, so noisy data keeps clean units.
struct NoiseSpec {
  double photon_scale = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// psi[u,v] = P[u,v] * x[pos.row + u, pos.col + v].
ComplexField exit_wave(const ComplexField& object, const ComplexField& probe, Position pos);

/// d = |F psi|^2 under the unitary DFT, so sum(d) = sum(|psi|^2) exactly.
RealField diffract(const ComplexField& psi);

/// One diffraction record per geometry position, in geometry order, all
/// tagged with the given provenance. Defined pointwise; independent of
/// evaluation order.
DiffractionStack simulate_scan(const ComplexField& object, const ComplexField& probe,
                               const ScanGeometry& geometry, Provenance provenance);

/// Per pixel: d' = Poisson(d * photon_scale) / photon_scale. Sampling is
/// keyed by (seed, record index, pixel index), never by draw order.
DiffractionStack add_poisson_noise(const DiffractionStack& stack, const NoiseSpec& noise);

/// Flat-phase disk probe per spec.
ComplexField make_probe(const ProbeSpec& spec);

/// Phase-only object: x = exp(j * gray * phase_max); gray must lie in [0, 1].
ComplexField make_phantom(const RealField& gray, double phase_max);

}  // namespace ptycho
