#pragma once

#include <optional>
#include <utility>

#include "gsfpca/basis.hpp"
#include "gsfpca/fpca.hpp"
#include "gsfpca/grid.hpp"
#include "gsfpca/gs.hpp"

namespace gsfpca {

struct ReconstructionDiagnostics {
  double sigma_min_reduced = 0.0;
  double cos_angle_estimate = 0.0;   // sigma_min of the reduced system, r1-scaled
  double residual_norm = 0.0;        // || Ahat alpha - rhs ||
  std::optional<double> relative_error;
};

struct ReconstructionResult {
  CVec alpha;                 // length m
  CVec coeffs_p;              // mean + eigvecs * alpha, length p
  FieldSample field;          // synthesized estimate on the working grid
  ReconstructionDiagnostics diagnostics;
};

// Reduced GS system: Ahat = A * eigvecs (q x m), rhs = b - A * mean.
std::pair<CMat, CVec> reduced_system(const CrossGram& A, const EigenModel& model,
                                     const MeasurementSet& b);

// End-to-end reconstruction: solve the reduced system by least squares or
// weighted ridge (weights 1/eigval_j), synthesize in the reconstruction
// family, optionally clip magnitudes at cfg.truncation_tau.
ReconstructionResult reconstruct(const CrossGram& A, const EigenModel& model,
                                 const MeasurementSet& b, const SolverConfig& cfg,
                                 const BasisSpec& rec_spec, const Grid& grid);

// sqrt of the smallest eigenvalue of Ahat^*Ahat + lambda diag(1/eigvals);
// equals sigma_min(Ahat) at lambda = 0.
double regularized_sigma_min(const CMat& ahat, double lambda, const RVec& eigvals);

// ||f - fhat|| / ||f|| under grid quadrature.
double relative_error(const FieldSample& fhat, const FieldSample& f);

}  // namespace gsfpca
