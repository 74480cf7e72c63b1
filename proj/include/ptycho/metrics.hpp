#pragma once

#include <vector>

#include "ptycho/field.hpp"
#include "ptycho/geometry.hpp"
#include "ptycho/stack.hpp"

namespace ptycho {

/// Snapshot of the quality metrics for one reconstruction.
struct MetricReport {
  double aligned_mse = 0.0;
  double tv_value = 0.0;
  double poisson_nll = 0.0;
  double l1_misfit = 0.0;
  double coverage_fraction = 1.0;
};

/// Anisotropic TV: sum of |forward row differences| + |forward col
/// differences|, no wrap-around. Complex input uses the phase map.
double total_variation(const RealField& image);
double total_variation(const ComplexField& x);

/// sum_i || d_i - |F(P (.) x_patch_i)|^2 ||_1 over all records.
double l1_misfit(const ComplexField& x, const ComplexField& probe, const DiffractionStack& stack);

/// Poisson data term: sum over records and pixels of
/// |F psi|^2 - 2 d log(|F psi| + eps). Constants depending only on d are
/// dropped.
double poisson_nll(const ComplexField& x, const ComplexField& probe, const DiffractionStack& stack,
                   double zero_guard = 1e-12);

/// Boolean per-pixel union of the S x S probe windows; row-major T*T.
std::vector<bool> coverage_mask(const ScanGeometry& geometry);

/// Covered pixels / T^2.
double coverage_fraction(const ScanGeometry& geometry);

/// Phase MSE against a grayscale ground truth, in normalized-gray units:
/// residuals of angle(recon) - gray * phase_max after removing their circular
/// mean, wrapped to (-pi, pi], divided by phase_max, then mean-squared over
/// the mask. Overloads select the Full or Coverage(geometry) mask.
double aligned_mse(const ComplexField& recon, const RealField& truth_gray, double phase_max);
double aligned_mse(const ComplexField& recon, const RealField& truth_gray, double phase_max,
                   const ScanGeometry& coverage);

/// Same alignment and normalization, but between two complex fields (phase of
/// b plays the role of the ground-truth phase).
double aligned_field_mse(const ComplexField& a, const ComplexField& b, double phase_max);

}  // namespace ptycho
