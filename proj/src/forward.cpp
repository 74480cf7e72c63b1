#include "ptycho/forward.hpp"

#include <cmath>
#include <random>
#include <string>

#include "ptycho/fft.hpp"
#include "ptycho/rng.hpp"

namespace ptycho {

void ProbeSpec::validate() const {
  if (size < 1) throw ValidationError("probe size must be >= 1");
  if (diameter < 1 || diameter > size) {
    throw ValidationError("probe diameter must lie in [1, size], got " +
                          std::to_string(diameter) + " with size " + std::to_string(size));
  }
  if (!(amplitude > 0.0)) throw ValidationError("probe amplitude must be > 0");
  if (profile == ProbeProfile::GaussianEdge && !(edge_sigma > 0.0)) {
    throw ValidationError("edge_sigma must be > 0 for a Gaussian-edge probe");
  }
}

void NoiseSpec::validate() const {
  if (!(photon_scale > 0.0)) throw ValidationError("photon_scale must be > 0");
}

ComplexField exit_wave(const ComplexField& object, const ComplexField& probe, Position pos) {
  const int S = probe.rows();
  if (probe.cols() != S) throw DimensionError("probe must be square");
  if (pos.row < 0 || pos.col < 0 || pos.row + S > object.rows() || pos.col + S > object.cols()) {
    throw GeometryError("probe window at (" + std::to_string(pos.row) + ", " +
                        std::to_string(pos.col) + ") leaves the object");
  }
  ComplexField psi(S, S);
  for (int u = 0; u < S; ++u) {
    for (int v = 0; v < S; ++v) {
      psi(u, v) = probe(u, v) * object(pos.row + u, pos.col + v);
    }
  }
  return psi;
}

RealField diffract(const ComplexField& psi) {
  psi.require_finite("exit wave");
  const ComplexField spectrum = fft2(psi);
  RealField d(psi.rows(), psi.cols());
  for (std::size_t i = 0; i < d.size(); ++i) d.values()[i] = std::norm(spectrum.values()[i]);
  return d;
}

DiffractionStack simulate_scan(const ComplexField& object, const ComplexField& probe,
                               const ScanGeometry& geometry, Provenance provenance) {
  if (object.rows() != geometry.object_size || object.cols() != geometry.object_size) {
    throw DimensionError("object shape does not match geometry object_size");
  }
  if (probe.rows() != geometry.probe_size || probe.cols() != geometry.probe_size) {
    throw DimensionError("probe shape does not match geometry probe_size");
  }
  geometry.validate();

  DiffractionStack stack(geometry.probe_size);
  for (const Position& pos : geometry.positions) {
    DiffractionRecord rec;
    rec.position = pos;
    rec.provenance = provenance;
    rec.intensity = diffract(exit_wave(object, probe, pos));
    stack.push_back(std::move(rec));
  }
  return stack;
}

DiffractionStack add_poisson_noise(const DiffractionStack& stack, const NoiseSpec& noise) {
  noise.validate();
  DiffractionStack out(stack.patch_size());
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const DiffractionRecord& rec = stack[i];
    rec.intensity.require_nonnegative("diffraction intensity");
    DiffractionRecord noisy;
    noisy.position = rec.position;
    noisy.provenance = rec.provenance;
    noisy.intensity = RealField(rec.intensity.rows(), rec.intensity.cols());
    for (std::size_t p = 0; p < rec.intensity.size(); ++p) {
      const double lambda = rec.intensity.values()[p] * noise.photon_scale;
      if (lambda == 0.0) {
        noisy.intensity.values()[p] = 0.0;
        continue;
      }
      std::mt19937_64 engine(derive_seed(noise.seed, i, p));
      std::poisson_distribution<long long> poisson(lambda);
      noisy.intensity.values()[p] =
          static_cast<double>(poisson(engine)) / noise.photon_scale;
    }
    out.push_back(std::move(noisy));
  }
  return out;
}

ComplexField make_probe(const ProbeSpec& spec) {
  spec.validate();
  const int S = spec.size;
  const int center = S / 2;
  const double radius = spec.diameter / 2.0;
  ComplexField probe(S, S);
  for (int u = 0; u < S; ++u) {
    for (int v = 0; v < S; ++v) {
      const double du = u - center;
      const double dv = v - center;
      const double r = std::sqrt(du * du + dv * dv);
      double a = 0.0;
      if (r <= radius) {
        a = spec.amplitude;
      } else if (spec.profile == ProbeProfile::GaussianEdge) {
        const double t = (r - radius) / spec.edge_sigma;
        a = spec.amplitude * std::exp(-0.5 * t * t);
      }
      probe(u, v) = cdouble(a, 0.0);
    }
  }
  return probe;
}

ComplexField make_phantom(const RealField& gray, double phase_max) {
  gray.require_unit_range("phantom gray image");
  ComplexField x(gray.rows(), gray.cols());
  for (std::size_t i = 0; i < gray.size(); ++i) {
    x.values()[i] = std::polar(1.0, gray.values()[i] * phase_max);
  }
  return x;
}

}  // namespace ptycho
