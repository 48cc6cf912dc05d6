#pragma once

#include "gsfpca/grid.hpp"

namespace gsfpca {

// In-place iterative radix-2 FFT, power-of-two length.
// sign = -1: X_k = sum_n x_n exp(-i 2 pi k n / N)  (forward, no scaling)
// sign = +1: unscaled inverse.
void fft_radix2(CVec& data, int sign);

// Forward FFT of every row of a row-major square array, then every column.
void fft2_forward(CMat& data);

}  // namespace gsfpca
