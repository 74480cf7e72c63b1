#pragma once

#include "ptycho/field.hpp"

namespace ptycho {

/// Unitary 2-D DFT: each 1-D transform carries a 1/sqrt(n) factor, so
/// fft2 and ifft2 are exact inverses and both preserve the l2 norm.
ComplexField fft2(const ComplexField& in);
ComplexField ifft2(const ComplexField& in);

/// In-place-style variants writing into a preallocated output of the same
/// shape. Input and output may alias.
void fft2_into(const ComplexField& in, ComplexField& out);
void ifft2_into(const ComplexField& in, ComplexField& out);

}  // namespace ptycho
