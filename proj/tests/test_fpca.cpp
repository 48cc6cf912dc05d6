#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gsfpca/fpca.hpp"

using namespace gsfpca;

namespace {

std::mt19937_64 g_rng(77);

CMat random_hermitian(Eigen::Index p) {
  std::normal_distribution<double> gauss;
  CMat m(p, p);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(gauss(g_rng), gauss(g_rng));
  return (m + m.adjoint()) / 2.0;
}

// Literal deflation oracle: repeated power iteration on
// sigma^{(j)} = (I - e e^*) sigma^{(j-1)} (I - e e^*).
std::pair<CMat, RVec> deflation_oracle(CMat sigma, std::int64_t m) {
  const auto p = sigma.rows();
  CMat vecs(p, m);
  RVec vals(m);
  for (std::int64_t j = 0; j < m; ++j) {
    CVec v = CVec::Constant(p, Complex(1.0, 0.3)).normalized();
    for (int it = 0; it < 4000; ++it) {
      // shift so the dominant eigenvalue of the PSD-shifted operator is the max
      CVec z = sigma * v + 10.0 * sigma.cwiseAbs().maxCoeff() * v;
      v = z.normalized();
    }
    vals[j] = std::real(v.dot(sigma * v));
    vecs.col(j) = v;
    const CMat proj = CMat::Identity(p, p) - v * v.adjoint();
    sigma = proj * sigma * proj;
  }
  return {vecs, vals};
}

}  // namespace

TEST_CASE("sample_stats: hand cases") {
  TrainingSet t;
  t.Y.resize(2, 2);
  t.Y << Complex(1, 0), Complex(0, 0), Complex(1, 0), Complex(0, 0);
  auto [mu, sigma] = sample_stats(t);
  CHECK(sigma.cwiseAbs().maxCoeff() < 1e-15);

  t.Y << Complex(1, 0), Complex(0, 0), Complex(-1, 0), Complex(0, 0);
  std::tie(mu, sigma) = sample_stats(t);
  CHECK(mu.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(sigma(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(sigma(1, 1)) < 1e-15);

  TrainingSet bad;
  bad.Y.resize(1, 2);
  CHECK_THROWS(sample_stats(bad));
}

TEST_CASE("sample_stats conjugation convention") {
  TrainingSet t;
  t.Y.resize(2, 2);
  t.Y << Complex(1, 0), Complex(0, 1), Complex(-1, 0), Complex(0, -1);
  auto [mu, sigma] = sample_stats(t);
  // v = (1, i): v v^* = [[1, -i], [i, 1]]
  CHECK(std::abs(sigma(0, 1) - Complex(0, -1)) < 1e-15);
  CHECK(std::abs(sigma(1, 0) - Complex(0, 1)) < 1e-15);
}

TEST_CASE("sample_stats: Hermitian PSD on random data") {
  std::normal_distribution<double> gauss;
  TrainingSet t;
  t.Y.resize(20, 4);
  for (Eigen::Index i = 0; i < t.Y.size(); ++i)
    t.Y.data()[i] = Complex(gauss(g_rng), gauss(g_rng));
  auto [mu, sigma] = sample_stats(t);
  CHECK((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::SelfAdjointEigenSolver<CMat> es(sigma, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10);
}

TEST_CASE("top_eigs: diagonal case and full reconstruction") {
  CMat d = CMat::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  auto [vecs, vals] = top_eigs(d, 1);
  CHECK(vals[0] == doctest::Approx(3.0));
  CHECK(std::abs(vecs(0, 0) - 1.0) < 1e-14);

  const CMat sigma = random_hermitian(6);
  auto [v6, l6] = top_eigs(sigma, 6);
  const CMat rebuilt = v6 * l6.asDiagonal() * v6.adjoint();
  CHECK((rebuilt - sigma).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((v6.adjoint() * v6 - CMat::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
  for (int j = 0; j + 1 < 6; ++j) CHECK(l6[j] >= l6[j + 1] - 1e-12);

  CMat nh = sigma;
  nh(0, 1) += Complex(0.1, 0.0);
  CHECK_THROWS(top_eigs(nh, 2));
}

TEST_CASE("top_eigs agrees with the literal deflation oracle") {
  // PSD matrix with distinct eigenvalues
  CMat base = random_hermitian(8);
  CMat sigma = base * base.adjoint();
  sigma.diagonal() += RVec::LinSpaced(8, 0.5, 4.0).cast<Complex>();
  auto [vecs, vals] = top_eigs(sigma, 3);
  auto [ov, ol] = deflation_oracle(sigma, 3);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(vals[j] - ol[j]) < 1e-8 * std::max(1.0, vals[0]));
    CHECK(std::abs(ov.col(j).dot(vecs.col(j))) > 1.0 - 1e-6);  // aligned up to phase
  }
}

TEST_CASE("phase canonicalization is idempotent and deterministic") {
  CMat v = random_hermitian(5);
  CMat a = v, b = v;
  canonicalize_phases(a);
  CMat a2 = a;
  canonicalize_phases(a2);
  CHECK((a - a2).cwiseAbs().maxCoeff() == 0.0);
  canonicalize_phases(b);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  // first significant entry real positive
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (std::abs(a(i, j)) > 1e-12 * a.col(j).cwiseAbs().maxCoeff()) {
        CHECK(a(i, j).imag() == doctest::Approx(0.0));
        CHECK(a(i, j).real() > 0.0);
        break;
      }
    }
  }
}

TEST_CASE("sparse_top_eigs: spiked diagonal and unconstrained limit") {
  CMat d = CMat::Zero(3, 3);
  d(0, 0) = 5.0;
  d(1, 1) = 1.0;
  d(2, 2) = 1.0;
  auto [vecs, vals] = sparse_top_eigs(d, 1, 1);
  CHECK(vals[0] == doctest::Approx(5.0));
  CHECK(std::abs(vecs(0, 0)) == doctest::Approx(1.0));

  const CMat base = random_hermitian(7);
  const CMat sigma = base * base.adjoint();
  auto [dense_v, dense_l] = top_eigs(sigma, 1);
  auto [sv, sl] = sparse_top_eigs(sigma, 1, 7);
  CHECK(std::abs(sv.col(0).dot(dense_v.col(0))) > 1.0 - 1e-6);
  CHECK_THROWS(sparse_top_eigs(sigma, 1, 0));
}

TEST_CASE("sparse_top_eigs recovers a planted support (exhaustive oracle)") {
  // spiked model sigma = 4 v v^* + I with v supported on rows {2, 5}
  const Eigen::Index p = 10;
  CVec v = CVec::Zero(p);
  v[2] = Complex(std::sqrt(0.5), 0);
  v[5] = Complex(-std::sqrt(0.5), 0);
  CMat sigma = 4.0 * v * v.adjoint() + CMat::Identity(p, p);
  auto [vecs, vals] = sparse_top_eigs(sigma, 1, 2);
  std::vector<int> support;
  for (Eigen::Index i = 0; i < p; ++i)
    if (std::abs(vecs(i, 0)) > 1e-9) support.push_back(static_cast<int>(i));
  REQUIRE(support.size() == 2);
  CHECK(support[0] == 2);
  CHECK(support[1] == 5);

  // exhaustive search over all C(10,2) supports for the best 2x2 Rayleigh value
  double best = -1.0;
  int bi = -1, bj = -1;
  for (int i = 0; i < p; ++i)
    for (int j = i + 1; j < p; ++j) {
      CMat sub(2, 2);
      sub << sigma(i, i), sigma(i, j), sigma(j, i), sigma(j, j);
      Eigen::SelfAdjointEigenSolver<CMat> es(sub, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().maxCoeff() > best) {
        best = es.eigenvalues().maxCoeff();
        bi = i;
        bj = j;
      }
    }
  CHECK(bi == 2);
  CHECK(bj == 5);
  CHECK(vals[0] == doctest::Approx(best).epsilon(1e-9));
  CHECK(std::abs(vecs.col(0).norm() - 1.0) < 1e-12);
}

TEST_CASE("sparse_top_eigs keeps at most k nonzero rows per component") {
  const CMat base = random_hermitian(12);
  const CMat sigma = base * base.adjoint();
  auto [vecs, vals] = sparse_top_eigs(sigma, 3, 4);
  for (int j = 0; j < 3; ++j) {
    int nnz = 0;
    for (Eigen::Index i = 0; i < 12; ++i)
      if (std::abs(vecs(i, j)) > 0) ++nnz;
    CHECK(nnz <= 4);
    CHECK(std::abs(vecs.col(j).norm() - 1.0) < 1e-12);
  }
  for (int j = 0; j + 1 < 3; ++j) CHECK(vals[j] >= vals[j + 1] - 1e-9);
}

TEST_CASE("explained_variance") {
  EigenModel model;
  model.mean = CVec::Zero(4);
  model.eigvals.resize(3);
  model.eigvals << 2.0, 2.0, 2.0;
  model.total_variance = 8.0;  // one more eigenvalue of 2 not retained
  CHECK(explained_variance(model, 1) == doctest::Approx(0.25));
  CHECK(explained_variance(model, 3) == doctest::Approx(0.75));
  CHECK(explained_variance(model, 3) >= explained_variance(model, 2));
  model.total_variance = 0.0;
  CHECK_THROWS(explained_variance(model, 1));
}

TEST_CASE("explained_variance is 1 for rank-1 data") {
  std::normal_distribution<double> gauss;
  TrainingSet t;
  CVec dir(6);
  for (auto& x : dir) x = Complex(gauss(g_rng), gauss(g_rng));
  t.Y.resize(12, 6);
  for (int i = 0; i < 12; ++i) t.Y.row(i) = gauss(g_rng) * dir.transpose();
  const EigenModel model = fit_eigenmodel(t, 1);
  CHECK(explained_variance(model, 1) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("fit_eigenmodel: dual route equals the direct route") {
  std::normal_distribution<double> gauss;
  TrainingSet t;
  t.Y.resize(6, 10);  // n < p forces the dual path
  for (Eigen::Index i = 0; i < t.Y.size(); ++i)
    t.Y.data()[i] = Complex(gauss(g_rng), gauss(g_rng));
  const EigenModel dual = fit_eigenmodel(t, 4);

  auto [mu, sigma] = sample_stats(t);
  auto [vecs, vals] = top_eigs(sigma, 4);
  CHECK((dual.mean - mu).cwiseAbs().maxCoeff() < 1e-12);
  for (int j = 0; j < 4; ++j) {
    CHECK(dual.eigvals[j] == doctest::Approx(vals[j]).epsilon(1e-8));
    CHECK(std::abs(vecs.col(j).dot(dual.eigvecs.col(j))) > 1.0 - 1e-8);
  }
  CHECK(dual.total_variance == doctest::Approx(sigma.trace().real()).epsilon(1e-10));
  CHECK((dual.eigvecs.adjoint() * dual.eigvecs - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("fit_eigenmodel_sparse matches sparse_top_eigs on the covariance") {
  std::normal_distribution<double> gauss;
  TrainingSet t;
  t.Y.resize(30, 8);
  for (Eigen::Index i = 0; i < t.Y.size(); ++i)
    t.Y.data()[i] = Complex(gauss(g_rng), gauss(g_rng));
  const EigenModel mf = fit_eigenmodel_sparse(t, 2, 3);
  auto [mu, sigma] = sample_stats(t);
  auto [vecs, vals] = sparse_top_eigs(sigma, 2, 3);
  for (int j = 0; j < 2; ++j) {
    CHECK(mf.eigvals[j] == doctest::Approx(vals[j]).epsilon(1e-6));
    CHECK(std::abs(mf.eigvecs.col(j).dot(vecs.col(j))) > 1.0 - 1e-6);
  }
}

TEST_CASE("repeated fits on identical data are bit-identical") {
  std::normal_distribution<double> gauss;
  TrainingSet t;
  t.Y.resize(16, 12);
  for (Eigen::Index i = 0; i < t.Y.size(); ++i)
    t.Y.data()[i] = Complex(gauss(g_rng), gauss(g_rng));
  const EigenModel a = fit_eigenmodel(t, 5);
  const EigenModel b = fit_eigenmodel(t, 5);
  CHECK((a.eigvecs - b.eigvecs).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.eigvals - b.eigvals).cwiseAbs().maxCoeff() == 0.0);
}
