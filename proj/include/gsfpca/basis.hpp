#pragma once

#include <cstdint>
#include <string>

#include "gsfpca/grid.hpp"

namespace gsfpca {

enum class BasisFamily { kFourier, kWavelet, kPixel };

std::string family_name(BasisFamily f);

// Declarative description of a sampling or reconstruction family.
//
// Atom conventions (0-based index j):
//  - fourier 1D: psi_j(u) = exp(i 2 pi (j - floor(q/2)) u), so the measurement
//    functional <f, psi_j> integrates f against exp(-i 2 pi (j - floor(q/2)) u).
//    2D: j = jr*sqrt(q)+jc with frequency (jc - floor(sqrt(q)/2)) on the first
//    axis u and (jr - floor(sqrt(q)/2)) on the second axis v.
//  - wavelet: periodized orthonormal Daubechies family of the given order,
//    coarsest first (2D: square Mallat ordering, see corner_coords_2d).
//  - pixel: raw indicator of cell j (1 on the cell, 0 elsewhere); 2D cells are
//    indexed j = jr*sqrt(q)+jc, cell jc along u, jr along v.
//
// riesz_lo/riesz_hi are the squared-norm equivalence constants r1, r2 in
// r1 ||b||^2 <= ||sum b_k psi_k||^2 <= r2 ||b||^2; both are 1 for the
// orthonormal fourier/wavelet families and 1/count (the cell measure) for raw
// pixel indicators. The GS conditioning bracket consumes these as
// sigma_min >= sqrt(r1) cos-angle.
struct BasisSpec {
  BasisFamily family = BasisFamily::kFourier;
  std::int64_t count = 0;
  int dim = 1;
  int wavelet_order = 1;  // vanishing moments s, wavelet family only
  double riesz_lo = 1.0;
  double riesz_hi = 1.0;
};

BasisSpec fourier_spec(std::int64_t count, int dim);
BasisSpec wavelet_spec(std::int64_t count, int dim, int order);
BasisSpec pixel_spec(std::int64_t count, int dim);

// Grid-sampled atoms, one row per atom.
struct BasisMatrix {
  BasisSpec spec;
  Grid grid;
  CMat atoms;  // count x node-count
};

// Cross-Gramian of a reconstruction family against a sampling family:
// entries(k, l) = <rec atom l, samp atom k>, the q x p GS system matrix.
struct CrossGram {
  std::int64_t rows = 0;  // q
  std::int64_t cols = 0;  // p (or m)
  CMat entries;
};

// Grid samples of a single atom (no materialized matrix needed).
CVec basis_atom(const BasisSpec& spec, const Grid& grid, std::int64_t index);

BasisMatrix build_basis(const BasisSpec& spec, const Grid& grid);

// Coefficient extraction: entry j = inner(f, atom_j).
CVec analyze(const FieldSample& f, const BasisMatrix& B);
FieldSample synthesize(const CVec& coeffs, const BasisMatrix& B);

// Transform-based fast paths, identical to the matrix versions to fp accuracy
// but O(N log N) per field; these are what the 2D pipeline uses.
CVec analyze_fast(const FieldSample& f, const BasisSpec& spec);
FieldSample synthesize_fast(const CVec& coeffs, const BasisSpec& spec, const Grid& grid);

CrossGram cross_gram(const BasisMatrix& rec, const BasisMatrix& samp);

// FFT fast path for Fourier sampling: the DFT of each reconstruction atom
// evaluated at the sampled frequencies (midpoint-grid phase included).
CrossGram cross_gram_fft(const BasisMatrix& rec, const BasisSpec& samp_spec);

// Streaming variant generating reconstruction atoms on the fly; also covers
// pixel sampling via per-cell block sums. This is the production assembler
// for the 2D problem sizes.
CrossGram cross_gram_fast(const BasisSpec& rec_spec, const BasisSpec& samp_spec,
                          const Grid& grid);

}  // namespace gsfpca
