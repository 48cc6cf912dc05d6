#include "gsfpca/gsfpca.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gsfpca {

std::pair<CMat, CVec> reduced_system(const CrossGram& A, const EigenModel& model,
                                     const MeasurementSet& b) {
  if (A.cols != model.p())
    throw std::invalid_argument("reduced_system: cross-gram columns do not match model p");
  if (b.values.size() != A.rows)
    throw std::invalid_argument("reduced_system: measurement length does not match cross-gram");
  CMat ahat = A.entries * model.eigvecs;
  CVec rhs = b.values - A.entries * model.mean;
  return {std::move(ahat), std::move(rhs)};
}

double regularized_sigma_min(const CMat& ahat, double lambda, const RVec& eigvals) {
  if (lambda == 0.0) return sigma_min(ahat);
  if (eigvals.size() != ahat.cols())
    throw std::invalid_argument("regularized_sigma_min: eigenvalue count mismatch");
  if ((eigvals.array() <= 0).any())
    throw std::invalid_argument("regularized_sigma_min: eigenvalues must be positive when lambda > 0");
  CMat M = ahat.adjoint() * ahat;
  M.diagonal() += (lambda * eigvals.array().inverse()).matrix().cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMat> es(M, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

ReconstructionResult reconstruct(const CrossGram& A, const EigenModel& model,
                                 const MeasurementSet& b, const SolverConfig& cfg,
                                 const BasisSpec& rec_spec, const Grid& grid) {
  auto [ahat, rhs] = reduced_system(A, model, b);

  ReconstructionResult result;
  switch (cfg.method) {
    case SolverMethod::kLeastSquares: {
      const double smin = sigma_min(ahat);
      if (smin <= kIllPosedThreshold)
        throw IllPosedError("reconstruct: reduced system ill-posed, sigma_min = " +
                                std::to_string(smin),
                            smin);
      result.alpha = solve_ls(ahat, rhs);
      result.diagnostics.sigma_min_reduced = smin;
      break;
    }
    case SolverMethod::kRidge: {
      RVec weights = cfg.weights;
      if (!weights.size()) {
        if ((model.eigvals.array() <= 0).any())
          throw std::invalid_argument(
              "reconstruct: nonpositive eigenvalue; cannot form ridge weights");
        weights = model.eigvals.array().inverse();
      }
      const double smin = regularized_sigma_min(ahat, cfg.lambda, model.eigvals);
      if (smin <= kIllPosedThreshold)
        throw IllPosedError("reconstruct: regularized system ill-posed, sigma_min = " +
                                std::to_string(smin),
                            smin);
      result.alpha = solve_ridge(ahat, rhs, cfg.lambda, weights);
      result.diagnostics.sigma_min_reduced = smin;
      break;
    }
    default:
      throw std::invalid_argument("reconstruct: unsupported solver for the reduced system");
  }

  result.diagnostics.cos_angle_estimate =
      result.diagnostics.sigma_min_reduced / std::sqrt(b.sampling_spec.riesz_hi);
  result.diagnostics.residual_norm = (ahat * result.alpha - rhs).norm();
  result.coeffs_p = model.mean + model.eigvecs * result.alpha;
  result.field = synthesize_fast(result.coeffs_p, rec_spec, grid);
  if (cfg.truncation_tau) result.field = truncate(result.field, *cfg.truncation_tau);
  return result;
}

double relative_error(const FieldSample& fhat, const FieldSample& f) {
  if (fhat.grid != f.grid) throw std::invalid_argument("relative_error: grid mismatch");
  const double nf = norm(f);
  if (nf == 0.0) throw std::invalid_argument("relative_error: zero ground truth");
  FieldSample diff = make_field(f.grid, fhat.values - f.values);
  return norm(diff) / nf;
}

}  // namespace gsfpca
