#pragma once

#include <cstdint>
#include <utility>

#include "gsfpca/basis.hpp"
#include "gsfpca/grid.hpp"

namespace gsfpca {

// n x p matrix of noisy training coefficient vectors, one observation per row.
struct TrainingSet {
  CMat Y;                  // n x p
  BasisSpec basis_spec;    // the reconstruction family the rows refer to
  double noise_sigma_tilde = 0.0;
};

// Sample mean plus the leading eigenpairs of the sample covariance.
// Eigenvector phases are canonicalized (first significant entry real
// positive) so identical data gives bit-identical models.
struct EigenModel {
  CVec mean;               // length p
  CMat eigvecs;            // p x m, orthonormal columns (nnzr-sparse for SPCA)
  RVec eigvals;            // length m, non-increasing
  double total_variance = 0.0;  // trace of the sample covariance
  std::int64_t n = 0;      // observations the model was fit on
  double noise_sigma_tilde = 0.0;
  std::int64_t m() const { return eigvals.size(); }
  std::int64_t p() const { return mean.size(); }
};

// mean = n^-1 sum y_i, covariance = n^-1 sum (y_i-mean)(y_i-mean)^* (1/n
// normalization, Hermitian PSD).
std::pair<CVec, CMat> sample_stats(const TrainingSet& t);

// Top-m eigenpairs of a Hermitian matrix, eigenvalues non-increasing,
// canonical phases. Agrees with the sequential deflation scheme.
std::pair<CMat, RVec> top_eigs(const CMat& sigma, std::int64_t m);

// Sparse PCA by truncated power iteration: power step, hard-threshold to the
// k largest-magnitude rows, renormalize; deflation between components;
// initialization from the (deflated) leading dense eigenvector restricted to
// its k largest rows. The attained Rayleigh quotient is non-decreasing
// across iterations.
std::pair<CMat, RVec> sparse_top_eigs(const CMat& sigma, std::int64_t m, std::int64_t k,
                                      int max_iters = 500, double tol = 1e-9);

// Partial eigenvalue sum over total variance.
double explained_variance(const EigenModel& model, std::int64_t m_prime);

// Fit an EigenModel from training data. Uses the n x n dual Gram route when
// n < p so the p x p covariance is never formed.
EigenModel fit_eigenmodel(const TrainingSet& t, std::int64_t m);

// Sparse variant: truncated power iteration applied matrix-free to the
// centered data (same scheme as sparse_top_eigs, never forming sigma).
EigenModel fit_eigenmodel_sparse(const TrainingSet& t, std::int64_t m, std::int64_t k,
                                 int max_iters = 500, double tol = 1e-9);

// Multiply each column by a unit phase making its first entry with
// |entry| > 1e-12 * max|column| real positive.
void canonicalize_phases(CMat& vectors);

}  // namespace gsfpca
