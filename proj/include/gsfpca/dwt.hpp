#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "gsfpca/grid.hpp"

namespace gsfpca {

// Orthonormal Daubechies lowpass filter of the given order (1..10), 2*order
// taps. Periodization of the associated wavelet family keeps the discrete
// filter bank exactly orthogonal at every dyadic level, which is what the
// transforms below rely on.
const std::vector<double>& daubechies_lowpass(int order);

// Quadrature-mirror highpass: g[j] = (-1)^j h[L-1-j].
std::vector<double> qmf_highpass(const std::vector<double>& h);

// Full periodic forward transform of a power-of-two-length vector, down to a
// single approximation coefficient. Output layout, coarsest first:
//   [ a(1) | d_level0(1) | d_level1(2) | ... | d_finest(n/2) ]
// With this layout the first p = 2^j entries are exactly the coefficients of
// the p-dimensional multiresolution subspace.
CVec dwt_forward_1d(const CVec& x, int order);
CVec dwt_inverse_1d(const CVec& coeffs, int order);

// Separable square (Mallat) 2D transform of an n-by-n row-major array, full
// depth. After the forward transform the top-left 2^j-by-2^j corner holds the
// coefficients of the 2^j x 2^j tensor multiresolution subspace.
CMat dwt_forward_2d(const CMat& x, int order);
CMat dwt_inverse_2d(const CMat& coeffs, int order);

// Deterministic linearization of the top-left corner of a square-Mallat
// coefficient array, coarsest level first: index 0 is (0,0); then per level
// j = 0,1,...: the HL block (rows < 2^j, cols 2^j..2^{j+1}-1) row-major, the
// LH block, then the HH block. `count` must be a power of 4.
void corner_coords_2d(std::int64_t count, std::int64_t index, std::int64_t* row,
                      std::int64_t* col);

// Wavelet analysis/synthesis against the midpoint grid: coefficients of the
// first `count` orthonormal periodized atoms (coarsest first), consistent
// with quadrature inner products against atoms scaled by 1/sqrt(du).
CVec wavelet_analyze(const FieldSample& f, std::int64_t count, int order);
FieldSample wavelet_synthesize(const CVec& coeffs, int order, const Grid& grid);

// Grid samples of atom `index` of the `count`-dimensional family.
CVec wavelet_atom(std::int64_t index, std::int64_t count, int order, const Grid& grid);

bool is_power_of_two(std::int64_t n);
bool is_power_of_four(std::int64_t n);

}  // namespace gsfpca
