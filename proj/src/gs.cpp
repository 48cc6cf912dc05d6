#include "gsfpca/gs.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <string>

namespace gsfpca {

namespace {

Eigen::BDCSVD<CMat> svd_of(const CMat& A, unsigned options) {
  Eigen::BDCSVD<CMat> svd(A, options);
  return svd;
}

}  // namespace

CVec solve_ls(const CMat& A, const CVec& b) {
  if (A.rows() < A.cols())
    throw std::invalid_argument("solve_ls: system must have rows >= cols (got " +
                                std::to_string(A.rows()) + "x" + std::to_string(A.cols()) + ")");
  if (b.size() != A.rows()) throw std::invalid_argument("solve_ls: rhs length mismatch");
  auto svd = svd_of(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues().minCoeff();
  if (smin < kIllPosedThreshold)
    throw IllPosedError("solve_ls: ill-posed system, sigma_min = " + std::to_string(smin), smin);
  return svd.solve(b);
}

CVec solve_ls_minnorm(const CMat& A, const CVec& b) {
  if (b.size() != A.rows()) throw std::invalid_argument("solve_ls_minnorm: rhs length mismatch");
  auto svd = svd_of(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? sv(0) * 1e-12 : 0.0;
  CVec z = svd.matrixU().adjoint() * b;
  for (Eigen::Index i = 0; i < sv.size(); ++i) z[i] = (sv[i] > cutoff) ? z[i] / sv[i] : 0.0;
  return svd.matrixV() * z;
}

CVec solve_ridge(const CMat& A, const CVec& b, double lambda, const RVec& weights) {
  if (lambda < 0) throw std::invalid_argument("solve_ridge: lambda must be >= 0");
  const auto p = A.cols();
  RVec w = weights.size() ? weights : RVec::Ones(p);
  if (w.size() != p) throw std::invalid_argument("solve_ridge: weight length mismatch");
  if ((w.array() <= 0).any()) throw std::invalid_argument("solve_ridge: weights must be positive");
  if (lambda == 0.0) return A.rows() >= A.cols() ? solve_ls(A, b) : solve_ls_minnorm(A, b);
  if (A.rows() >= A.cols()) {
    CMat M = A.adjoint() * A;
    M.diagonal() += (lambda * w).cast<Complex>();
    return M.llt().solve(A.adjoint() * b);
  }
  // wide system: substitute a = W^{-1/2} c and use the q x q dual
  const RVec wis = w.array().rsqrt();
  const CMat B = A * wis.asDiagonal();
  CMat M = B * B.adjoint();
  M.diagonal().array() += lambda;
  const CVec c = B.adjoint() * M.llt().solve(b);
  return wis.asDiagonal() * c;
}

double lasso_objective(const CMat& A, const CVec& b, const CVec& a, double lambda) {
  return (A * a - b).squaredNorm() + lambda * a.cwiseAbs().sum();
}

namespace {
CVec soft_threshold(const CVec& x, double c) {
  CVec out(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double m = std::abs(x[i]);
    out[i] = (m > c) ? x[i] * ((m - c) / m) : Complex(0.0);
  }
  return out;
}
}  // namespace

CVec solve_l1(const CMat& A, const CVec& b, double lambda, int max_iters, double tol) {
  if (lambda <= 0) throw std::invalid_argument("solve_l1: lambda must be > 0");
  if (tol <= 0) throw std::invalid_argument("solve_l1: tol must be > 0");
  // Lipschitz constant of the gradient 2 A^*(Aa - b) is 2 sigma_max^2.
  const double smax = svd_of(A, 0).singularValues().maxCoeff();
  double step = (smax > 0) ? 1.0 / (2.0 * smax * smax) : 1.0;
  CVec a = CVec::Zero(A.cols());
  double obj = lasso_objective(A, b, a, lambda);
  for (int it = 0; it < max_iters; ++it) {
    const CVec grad = 2.0 * (A.adjoint() * (A * a - b));
    CVec cand = soft_threshold(a - step * grad, step * lambda);
    double cand_obj = lasso_objective(A, b, cand, lambda);
    while (cand_obj > obj * (1.0 + 1e-14)) {
      step *= 0.5;
      if (step < 1e-300)
        throw std::runtime_error("solve_l1: step size underflow without descent");
      cand = soft_threshold(a - step * grad, step * lambda);
      cand_obj = lasso_objective(A, b, cand, lambda);
    }
    a.swap(cand);
    if (obj - cand_obj < tol * std::max(1.0, obj)) {
      obj = cand_obj;
      break;
    }
    obj = cand_obj;
  }
  return a;
}

double sigma_min(const CMat& A) {
  // lambda_min(A^*A)^{1/2} over the domain: zero whenever the system is wide
  if (A.size() == 0) return 0.0;
  if (A.cols() > A.rows()) return 0.0;
  if (A.cols() <= 16) {
    Eigen::JacobiSVD<CMat> svd(A);
    return svd.singularValues().minCoeff();
  }
  return svd_of(A, 0).singularValues().minCoeff();
}

namespace {
void check_orthonormal(const CMat& S, const Grid& grid, const char* name) {
  const CMat G = (S.conjugate() * S.transpose()) * grid.cell_measure;
  const double dev = (G - CMat::Identity(S.rows(), S.rows())).cwiseAbs().maxCoeff();
  if (dev > 1e-6)
    throw std::invalid_argument(std::string("subspace angle: set ") + name +
                                " is not orthonormal (gram deviation " + std::to_string(dev) +
                                ")");
}
}  // namespace

double subspace_cos(const CMat& U, const CMat& V, const Grid& grid) {
  check_orthonormal(U, grid, "U");
  check_orthonormal(V, grid, "V");
  if (U.rows() > V.rows()) return 0.0;  // span(U) cannot embed into a smaller frame
  // M(i,j) = <u_i, v_j>
  const CMat M = (V.conjugate() * U.transpose()).transpose() * grid.cell_measure;
  Eigen::JacobiSVD<CMat> svd(M);
  return svd.singularValues().minCoeff();
}

double subspace_sin(const CMat& U, const CMat& V, const Grid& grid) {
  const double c = subspace_cos(U, V, grid);
  return std::sqrt(std::max(0.0, 1.0 - c * c));
}

CVec truncate(const CVec& values, double tau) {
  if (tau <= 0) throw std::invalid_argument("truncate: tau must be > 0");
  CVec out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double m = std::abs(values[i]);
    out[i] = (m > tau) ? values[i] * (tau / m) : values[i];
  }
  return out;
}

FieldSample truncate(const FieldSample& f, double tau) {
  return make_field(f.grid, truncate(f.values, tau));
}

}  // namespace gsfpca
