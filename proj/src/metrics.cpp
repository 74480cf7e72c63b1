#include "ptycho/metrics.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "ptycho/fft.hpp"
#include "ptycho/forward.hpp"

namespace ptycho {

namespace {

double tv_of(const std::vector<double>& v, int rows, int cols) {
  double tv = 0.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t i = static_cast<std::size_t>(r) * cols + c;
      if (c + 1 < cols) tv += std::abs(v[i + 1] - v[i]);
      if (r + 1 < rows) tv += std::abs(v[i + cols] - v[i]);
    }
  }
  return tv;
}

// Circular mean of the phase residuals, then wrapped mean square. delta holds
// angle(recon) - reference phase; mask entries select contributing pixels.
double aligned_phase_mse(const std::vector<double>& delta, const std::vector<bool>* mask,
                         double phase_max) {
  double sin_sum = 0.0;
  double cos_sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    sin_sum += std::sin(delta[i]);
    cos_sum += std::cos(delta[i]);
    ++n;
  }
  if (n == 0) throw MetricError("alignment mask selects no pixels");
  const double mu = std::atan2(sin_sum, cos_sum);

  const double two_pi = 2.0 * std::numbers::pi;
  double sq = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    if (mask && !(*mask)[i]) continue;
    const double r = std::remainder(delta[i] - mu, two_pi) / phase_max;
    sq += r * r;
  }
  return sq / static_cast<double>(n);
}

void check_phase_max(double phase_max) {
  if (!(phase_max > 0.0)) throw MetricError("phase_max must be > 0");
}

}  // namespace

double total_variation(const RealField& image) {
  image.require_finite("image");
  return tv_of(image.values(), image.rows(), image.cols());
}

double total_variation(const ComplexField& x) {
  x.require_finite("field");
  std::vector<double> phase(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) phase[i] = std::arg(x.values()[i]);
  return tv_of(phase, x.rows(), x.cols());
}

double l1_misfit(const ComplexField& x, const ComplexField& probe,
                 const DiffractionStack& stack) {
  double total = 0.0;
  for (const DiffractionRecord& rec : stack) {
    const RealField model = diffract(exit_wave(x, probe, rec.position));
    if (model.size() != rec.intensity.size()) throw DimensionError("record shape mismatch");
    for (std::size_t k = 0; k < model.size(); ++k) {
      total += std::abs(rec.intensity.values()[k] - model.values()[k]);
    }
  }
  return total;
}

double poisson_nll(const ComplexField& x, const ComplexField& probe, const DiffractionStack& stack,
                   double zero_guard) {
  if (!(zero_guard > 0.0)) throw MetricError("zero_guard must be > 0");
  double total = 0.0;
  for (const DiffractionRecord& rec : stack) {
    const ComplexField spectrum = fft2(exit_wave(x, probe, rec.position));
    if (spectrum.size() != rec.intensity.size()) throw DimensionError("record shape mismatch");
    for (std::size_t k = 0; k < spectrum.size(); ++k) {
      const double power = std::norm(spectrum.values()[k]);
      const double d = rec.intensity.values()[k];
      total += power - 2.0 * d * std::log(std::sqrt(power) + zero_guard);
    }
  }
  return total;
}

std::vector<bool> coverage_mask(const ScanGeometry& geometry) {
  geometry.validate();
  const int T = geometry.object_size;
  const int S = geometry.probe_size;
  std::vector<bool> mask(static_cast<std::size_t>(T) * T, false);
  for (const Position& pos : geometry.positions) {
    for (int u = 0; u < S; ++u) {
      for (int v = 0; v < S; ++v) {
        mask[static_cast<std::size_t>(pos.row + u) * T + (pos.col + v)] = true;
      }
    }
  }
  return mask;
}

double coverage_fraction(const ScanGeometry& geometry) {
  const std::vector<bool> mask = coverage_mask(geometry);
  std::size_t covered = 0;
  for (bool b : mask) covered += b ? 1 : 0;
  return static_cast<double>(covered) / static_cast<double>(mask.size());
}

namespace {

double aligned_mse_impl(const ComplexField& recon, const RealField& truth_gray, double phase_max,
                        const std::vector<bool>* mask) {
  check_phase_max(phase_max);
  if (recon.rows() != truth_gray.rows() || recon.cols() != truth_gray.cols()) {
    throw DimensionError("reconstruction and truth shapes differ");
  }
  truth_gray.require_unit_range("truth gray image");
  std::vector<double> delta(recon.size());
  for (std::size_t i = 0; i < recon.size(); ++i) {
    delta[i] = std::arg(recon.values()[i]) - truth_gray.values()[i] * phase_max;
  }
  return aligned_phase_mse(delta, mask, phase_max);
}

}  // namespace

double aligned_mse(const ComplexField& recon, const RealField& truth_gray, double phase_max) {
  return aligned_mse_impl(recon, truth_gray, phase_max, nullptr);
}

double aligned_mse(const ComplexField& recon, const RealField& truth_gray, double phase_max,
                   const ScanGeometry& coverage) {
  if (coverage.object_size != recon.rows()) {
    throw DimensionError("coverage geometry does not match reconstruction size");
  }
  const std::vector<bool> mask = coverage_mask(coverage);
  return aligned_mse_impl(recon, truth_gray, phase_max, &mask);
}

double aligned_field_mse(const ComplexField& a, const ComplexField& b, double phase_max) {
  check_phase_max(phase_max);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("field shapes differ");
  }
  std::vector<double> delta(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    delta[i] = std::arg(a.values()[i]) - std::arg(b.values()[i]);
  }
  return aligned_phase_mse(delta, nullptr, phase_max);
}

}  // namespace ptycho
