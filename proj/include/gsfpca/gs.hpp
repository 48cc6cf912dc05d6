#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "gsfpca/basis.hpp"
#include "gsfpca/grid.hpp"

namespace gsfpca {

// Thrown when a system's smallest singular value sits below the float64
// noise floor; carries the measured value.
class IllPosedError : public std::runtime_error {
 public:
  IllPosedError(const std::string& what, double sigma_min)
      : std::runtime_error(what), sigma_min_(sigma_min) {}
  double sigma_min() const { return sigma_min_; }

 private:
  double sigma_min_;
};

struct MeasurementSet {
  CVec values;             // length q
  BasisSpec sampling_spec;
  double noise_sigma = 0.0;
};

enum class SolverMethod { kLeastSquares, kRidge, kLasso };

struct SolverConfig {
  SolverMethod method = SolverMethod::kLeastSquares;
  double lambda = 0.0;
  RVec weights;            // ridge only; empty = unit weights
  int max_iters = 2000;    // lasso
  double tol = 1e-10;      // lasso relative objective change
  std::optional<double> truncation_tau;
};

constexpr double kIllPosedThreshold = 1e-12;

// Least squares via SVD (rank-revealing); requires rows >= cols and
// sigma_min above the ill-posedness threshold.
CVec solve_ls(const CMat& A, const CVec& b);

// Minimum-norm least squares with pseudo-inverse cutoff; defined for any
// shape and rank. The plain-GS experiment path when q < p.
CVec solve_ls_minnorm(const CMat& A, const CVec& b);

// argmin ||Aa-b||^2 + lambda sum w_j |a_j|^2. Dispatches to the dual
// formulation when the system is wide.
CVec solve_ridge(const CMat& A, const CVec& b, double lambda, const RVec& weights = {});

// argmin ||Aa-b||^2 + lambda sum |a_j| (no 1/2 on the data term) by proximal
// gradient with complex soft thresholding; monotone objective, step halving
// on increase.
CVec solve_l1(const CMat& A, const CVec& b, double lambda, int max_iters = 2000,
              double tol = 1e-10);

double sigma_min(const CMat& A);

// Orthonormal-set subspace angle: smallest singular value of the pairwise
// inner-product matrix <u_i, v_j>, i.e. the cosine of the largest principal
// angle of span(U) into span(V). Rows of U and V are grid samples.
double subspace_cos(const CMat& U, const CMat& V, const Grid& grid);
double subspace_sin(const CMat& U, const CMat& V, const Grid& grid);

// Pointwise magnitude clipping with phase preserved.
FieldSample truncate(const FieldSample& f, double tau);
CVec truncate(const CVec& values, double tau);

// Lasso objective, exposed for tests and diagnostics.
double lasso_objective(const CMat& A, const CVec& b, const CVec& a, double lambda);

}  // namespace gsfpca
