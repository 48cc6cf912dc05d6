#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <random>

#include "gsfpca/basis.hpp"
#include "gsfpca/fpca.hpp"
#include "gsfpca/grid.hpp"
#include "gsfpca/gs.hpp"

namespace gsfpca {

// Deterministic per-draw RNG substream: independent of evaluation order, so
// parallel sweeps reproduce the serial results bit for bit.
std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index);

// Measurement noise sigma (complex, per-component deviation sigma/sqrt(2)),
// training noise sigma_tilde (real), and the stream seed.
struct NoiseSpec {
  double sigma = 0.0;
  double sigma_tilde = 0.0;
  std::uint64_t seed = 0;
};

// Strictly low-rank 1D Gaussian model: draws are sum_j sqrt(lambda_j) xi_j
// fpc_j with eigenvalues lambda_j = m0 - j + 1 and orthonormalized
// Gaussian-bump components.
struct GenerativeModel1D {
  Grid grid;
  RMat fpcs;      // m0 x nodes, orthonormal rows under grid quadrature
  RVec eigvals;   // strictly decreasing
  std::int64_t m0() const { return eigvals.size(); }
};

GenerativeModel1D make_model_1d(const Grid& grid);

FieldSample draw_1d(const GenerativeModel1D& model, std::mt19937_64& rng);
// As above with the factor vector returned/forced (tests use forced factors).
FieldSample synth_1d(const GenerativeModel1D& model, const RVec& factors);

// 10 ellipses, columns: intensity, semi-axis a, semi-axis b, center x,
// center y, rotation in degrees. Coordinates live in the [-1,1]^2 frame that
// is mapped affinely onto the unit square.
using EllipseMatrix = Eigen::Matrix<double, Eigen::Dynamic, 6>;

const EllipseMatrix& default_ellipses();

// Per-column deviation of the ellipse perturbation at scale = 1.
const Eigen::Matrix<double, 1, 6>& perturbation_deviations();

EllipseMatrix perturb_ellipses(const EllipseMatrix& e0, std::mt19937_64& rng, double scale);

// Sum of ellipse intensities at every grid node (additive overlap).
FieldSample phantom(const EllipseMatrix& e, std::int64_t resolution);

// Serial reference rasterizer; the parallel kernel must match it exactly.
FieldSample phantom_serial(const EllipseMatrix& e, std::int64_t resolution);

// values = analyze(f, B) + w with w complex Gaussian of component deviation
// sigma/sqrt(2).
MeasurementSet measure(const FieldSample& f, const BasisSpec& sampling_spec,
                       const NoiseSpec& noise, std::mt19937_64& rng);

// Rows analyze(f_i, rec_spec) + z_i with real Gaussian noise of deviation
// sigma_tilde per component (the training models are real-valued).
TrainingSet make_training_set(const std::function<FieldSample(std::mt19937_64&)>& generator,
                              std::int64_t n, const BasisSpec& rec_spec, const Grid& grid,
                              const NoiseSpec& noise, std::uint64_t seed_offset = 0);

}  // namespace gsfpca
