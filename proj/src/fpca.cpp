#include "gsfpca/fpca.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

namespace gsfpca {

void canonicalize_phases(CMat& vectors) {
  for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
    const double mx = vectors.col(j).cwiseAbs().maxCoeff();
    if (mx == 0.0) continue;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, j));
      if (a > 1e-12 * mx) {
        vectors.col(j) *= std::conj(vectors(i, j)) / a;
        break;
      }
    }
  }
}

std::pair<CVec, CMat> sample_stats(const TrainingSet& t) {
  const auto n = t.Y.rows();
  if (n < 2) throw std::invalid_argument("sample_stats: need at least 2 observations");
  const CVec mean = t.Y.colwise().mean();
  CMat centered = t.Y.rowwise() - mean.transpose();
  // sum_i v_i v_i^* with v_i the i-th row as a column vector
  CMat sigma = (centered.transpose() * centered.conjugate()) / static_cast<double>(n);
  return {mean, std::move(sigma)};
}

namespace {

void check_hermitian(const CMat& sigma) {
  if (sigma.rows() != sigma.cols())
    throw std::invalid_argument("top_eigs: matrix must be square");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  const double dev = (sigma - sigma.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-8 * scale)
    throw std::invalid_argument("top_eigs: matrix is not Hermitian (deviation " +
                                std::to_string(dev) + ")");
}

// Truncated power iteration over an abstract Hermitian operator. `apply` must
// already include deflation of previously accepted components.
struct TPowerResult {
  CVec vec;
  double value = 0.0;
};

TPowerResult truncated_power(const std::function<CVec(const CVec&)>& apply, Eigen::Index p,
                             std::int64_t k, const CVec& init, int max_iters, double tol) {
  auto threshold = [&](const CVec& z) {
    CVec out = CVec::Zero(p);
    if (k >= p) {
      out = z;
    } else {
      std::vector<Eigen::Index> idx(p);
      std::iota(idx.begin(), idx.end(), 0);
      std::nth_element(idx.begin(), idx.begin() + k, idx.end(),
                       [&](Eigen::Index a, Eigen::Index b) {
                         return std::abs(z[a]) > std::abs(z[b]);
                       });
      for (std::int64_t t = 0; t < k; ++t) out[idx[t]] = z[idx[t]];
    }
    return out;
  };

  CVec v = threshold(init);
  double nv = v.norm();
  if (nv == 0.0) return {CVec::Zero(p), 0.0};
  v /= nv;
  double prev = 0.0, rayleigh = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    const CVec z = apply(v);
    rayleigh = std::real(v.dot(z));
    CVec w = threshold(z);
    const double nw = w.norm();
    if (nw < 1e-300) break;
    v = w / nw;
    if (std::abs(rayleigh - prev) < tol * std::max(1.0, std::abs(rayleigh))) break;
    prev = rayleigh;
  }
  rayleigh = std::real(v.dot(apply(v)));
  return {v, std::max(rayleigh, 0.0)};
}

// Sequential projectors of the deflation scheme: sigma^{(j)} =
// (I - e_j e_j^*) sigma^{(j-1)} (I - e_j e_j^*), applied matrix-free.
CVec deflate_pre(const std::vector<CVec>& comps, CVec v) {
  for (auto it = comps.rbegin(); it != comps.rend(); ++it) v -= (*it) * it->dot(v);
  return v;
}

CVec deflate_post(const std::vector<CVec>& comps, CVec v) {
  for (const auto& e : comps) v -= e * e.dot(v);
  return v;
}

// Leading eigenvector of the deflated operator by plain power iterations.
// The start vector is a fixed pseudo-random draw: deterministic, and generic
// enough not to be orthogonal to any particular eigenvector.
CVec dense_leading(const std::function<CVec(const CVec&)>& apply, Eigen::Index p) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> gauss;
  CVec v(p);
  for (auto& x : v) x = Complex(gauss(rng), gauss(rng));
  v.normalize();
  for (int it = 0; it < 80; ++it) {
    CVec z = apply(v);
    const double nz = z.norm();
    if (nz < 1e-300) return v;  // start lives in the kernel; nothing to refine
    v = z / nz;
  }
  return v;
}

std::pair<CMat, RVec> sparse_eigs_operator(const std::function<CVec(const CVec&)>& base_apply,
                                           Eigen::Index p, std::int64_t m, std::int64_t k,
                                           int max_iters, double tol) {
  std::vector<CVec> comps;
  CMat vecs(p, m);
  RVec vals(m);
  for (std::int64_t j = 0; j < m; ++j) {
    auto apply = [&](const CVec& v) {
      return deflate_post(comps, base_apply(deflate_pre(comps, v)));
    };
    const CVec init = dense_leading(apply, p);
    auto res = truncated_power(apply, p, k, init, max_iters, tol);
    if (res.vec.norm() == 0.0) res.vec = CVec::Unit(p, static_cast<Eigen::Index>(j) % p);
    comps.push_back(res.vec);
    vecs.col(j) = res.vec;
    vals[j] = res.value;
  }
  canonicalize_phases(vecs);
  return {std::move(vecs), std::move(vals)};
}

}  // namespace

namespace {
// For eigenvalue ties (within 1e-10) the order of eigenvectors is arbitrary;
// fall back to lexicographic order of the phase-canonical vectors so repeated
// runs are bit-identical.
void order_ties(CMat& vecs, RVec& vals) {
  auto lex_less = [&](Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      const Complex x = vecs(i, a), y = vecs(i, b);
      if (x.real() != y.real()) return x.real() < y.real();
      if (x.imag() != y.imag()) return x.imag() < y.imag();
    }
    return false;
  };
  Eigen::Index start = 0;
  while (start < vals.size()) {
    Eigen::Index end = start + 1;
    while (end < vals.size() && std::abs(vals[end] - vals[start]) <= 1e-10) ++end;
    if (end - start > 1) {
      std::vector<Eigen::Index> idx(end - start);
      std::iota(idx.begin(), idx.end(), start);
      std::sort(idx.begin(), idx.end(), lex_less);
      CMat block(vecs.rows(), end - start);
      for (Eigen::Index t = 0; t < end - start; ++t) block.col(t) = vecs.col(idx[t]);
      vecs.middleCols(start, end - start) = block;
    }
    start = end;
  }
}
}  // namespace

std::pair<CMat, RVec> top_eigs(const CMat& sigma, std::int64_t m) {
  check_hermitian(sigma);
  const auto p = sigma.rows();
  if (m < 1 || m > p) throw std::invalid_argument("top_eigs: need 1 <= m <= p");
  Eigen::SelfAdjointEigenSolver<CMat> es(sigma);
  if (es.info() != Eigen::Success) throw std::runtime_error("top_eigs: eigensolver failed");
  CMat vecs(p, m);
  RVec vals(m);
  for (std::int64_t j = 0; j < m; ++j) {
    vecs.col(j) = es.eigenvectors().col(p - 1 - j);
    vals[j] = es.eigenvalues()[p - 1 - j];
  }
  canonicalize_phases(vecs);
  order_ties(vecs, vals);
  return {std::move(vecs), std::move(vals)};
}

std::pair<CMat, RVec> sparse_top_eigs(const CMat& sigma, std::int64_t m, std::int64_t k,
                                      int max_iters, double tol) {
  check_hermitian(sigma);
  const auto p = sigma.rows();
  if (k < 1) throw std::invalid_argument("sparse_top_eigs: k must be >= 1");
  if (m < 1 || m > p) throw std::invalid_argument("sparse_top_eigs: need 1 <= m <= p");
  auto apply = [&](const CVec& v) -> CVec { return sigma * v; };
  return sparse_eigs_operator(apply, p, m, std::min<std::int64_t>(k, p), max_iters, tol);
}

double explained_variance(const EigenModel& model, std::int64_t m_prime) {
  if (model.total_variance <= 0.0)
    throw std::invalid_argument("explained_variance: zero total variance");
  if (m_prime < 0 || m_prime > model.m())
    throw std::invalid_argument("explained_variance: m' out of range");
  return model.eigvals.head(m_prime).sum() / model.total_variance;
}

EigenModel fit_eigenmodel(const TrainingSet& t, std::int64_t m) {
  const auto n = t.Y.rows();
  const auto p = t.Y.cols();
  if (n < 2) throw std::invalid_argument("fit_eigenmodel: need at least 2 observations");
  if (m < 1 || m > p) throw std::invalid_argument("fit_eigenmodel: need 1 <= m <= p");
  EigenModel model;
  model.n = n;
  model.noise_sigma_tilde = t.noise_sigma_tilde;
  model.mean = t.Y.colwise().mean();
  CMat centered = t.Y.rowwise() - model.mean.transpose();
  model.total_variance = centered.squaredNorm() / static_cast<double>(n);
  if (n >= p) {
    CMat sigma = (centered.transpose() * centered.conjugate()) / static_cast<double>(n);
    auto [vecs, vals] = top_eigs(sigma, m);
    model.eigvecs = std::move(vecs);
    model.eigvals = std::move(vals);
    return model;
  }
  // dual route: eigенpairs of the n x n Gram matrix map to covariance
  // eigenpairs through the data matrix
  if (m > n) throw std::invalid_argument("fit_eigenmodel: m exceeds sample covariance rank");
  CMat gram = (centered.conjugate() * centered.transpose()) / static_cast<double>(n);
  auto [dual_vecs, vals] = top_eigs(gram, m);
  CMat vecs(p, m);
  for (std::int64_t j = 0; j < m; ++j) {
    vecs.col(j) = centered.transpose() * dual_vecs.col(j);
    const double nv = vecs.col(j).norm();
    if (nv > 0) vecs.col(j) /= nv;
  }
  canonicalize_phases(vecs);
  model.eigvecs = std::move(vecs);
  model.eigvals = vals.cwiseMax(0.0);
  return model;
}

EigenModel fit_eigenmodel_sparse(const TrainingSet& t, std::int64_t m, std::int64_t k,
                                 int max_iters, double tol) {
  const auto n = t.Y.rows();
  const auto p = t.Y.cols();
  if (n < 2) throw std::invalid_argument("fit_eigenmodel_sparse: need at least 2 observations");
  if (m < 1 || m > p) throw std::invalid_argument("fit_eigenmodel_sparse: need 1 <= m <= p");
  if (k < 1) throw std::invalid_argument("fit_eigenmodel_sparse: k must be >= 1");
  EigenModel model;
  model.n = n;
  model.noise_sigma_tilde = t.noise_sigma_tilde;
  model.mean = t.Y.colwise().mean();
  CMat centered = t.Y.rowwise() - model.mean.transpose();
  model.total_variance = centered.squaredNorm() / static_cast<double>(n);
  const double inv_n = 1.0 / static_cast<double>(n);
  auto apply = [&](const CVec& v) -> CVec {
    return (centered.transpose() * (centered.conjugate() * v)) * inv_n;
  };
  auto [vecs, vals] =
      sparse_eigs_operator(apply, p, m, std::min<std::int64_t>(k, p), max_iters, tol);
  model.eigvecs = std::move(vecs);
  model.eigvals = std::move(vals);
  return model;
}

}  // namespace gsfpca
