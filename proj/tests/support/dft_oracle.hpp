#pragma once

// Test-only reference transform: direct O((RC)^2) DFT evaluation with the
// same unitary scaling the library claims, sharing no code with the FFT path.

#include <cmath>
#include <complex>
#include <numbers>

#include "ptycho/field.hpp"

namespace oracle {

inline ptycho::ComplexField dft2(const ptycho::ComplexField& in, int sign) {
  const int R = in.rows();
  const int C = in.cols();
  ptycho::ComplexField out(R, C);
  const double tau = 2.0 * std::numbers::pi;
  const double scale = 1.0 / std::sqrt(static_cast<double>(R) * C);
  for (int k = 0; k < R; ++k) {
    for (int l = 0; l < C; ++l) {
      std::complex<double> acc{0.0, 0.0};
      for (int r = 0; r < R; ++r) {
        for (int c = 0; c < C; ++c) {
          const double angle =
              sign * tau *
              (static_cast<double>(k) * r / R + static_cast<double>(l) * c / C);
          acc += in(r, c) * std::polar(1.0, angle);
        }
      }
      out(k, l) = acc * scale;
    }
  }
  return out;
}

// Matches the FFTW sign convention: forward uses exp(-j...).
inline ptycho::ComplexField forward_dft2(const ptycho::ComplexField& in) { return dft2(in, -1); }
inline ptycho::ComplexField inverse_dft2(const ptycho::ComplexField& in) { return dft2(in, +1); }

}  // namespace oracle
