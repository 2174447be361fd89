#pragma once

#include <complex>

namespace triwave::detail {

/// Unnormalized in-place multi-dimensional DFT of n^dim row-major samples.
/// sign = -1 is the forward transform.
void fft_execute(int dim, int n, int sign, std::complex<double>* data);

}  // namespace triwave::detail
