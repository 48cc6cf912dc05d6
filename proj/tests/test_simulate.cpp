#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gsfpca/basis.hpp"
#include "gsfpca/grid.hpp"
#include "gsfpca/gs.hpp"
#include "gsfpca/simulate.hpp"

using namespace gsfpca;

TEST_CASE("1D model: orthonormal components and decreasing spectrum") {
  const Grid g = make_grid(1, 2048);
  const GenerativeModel1D model = make_model_1d(g);
  REQUIRE(model.m0() == 10);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double dot = model.fpcs.row(i).dot(model.fpcs.row(j)) * g.cell_measure;
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-8);
    }
    if (i + 1 < 10) CHECK(model.eigvals[i] > model.eigvals[i + 1]);
  }
}

TEST_CASE("draw_1d: forced factors") {
  const Grid g = make_grid(1, 1024);
  const GenerativeModel1D model = make_model_1d(g);
  CHECK(norm(synth_1d(model, RVec::Zero(10))) == 0.0);
  RVec e1 = RVec::Zero(10);
  e1[0] = 1.0;
  const FieldSample f = synth_1d(model, e1);
  // equals sqrt(m0) * fpc_0
  const double scale = std::sqrt(10.0);
  for (std::int64_t t = 0; t < g.resolution; t += 97)
    CHECK(f.values[t].real() == doctest::Approx(scale * model.fpcs(0, t)));
}

TEST_CASE("draw_1d: empirical factor covariance matches the spectrum") {
  const Grid g = make_grid(1, 512);
  const GenerativeModel1D model = make_model_1d(g);
  const int draws = 20000;
  RMat cov = RMat::Zero(10, 10);
  for (int i = 0; i < draws; ++i) {
    auto rng = substream(6, static_cast<std::uint64_t>(i));
    const FieldSample f = draw_1d(model, rng);
    RVec coef(10);
    for (int j = 0; j < 10; ++j)
      coef[j] = (model.fpcs.row(j) * f.values.real()).value() * g.cell_measure;
    cov += coef * coef.transpose();
  }
  cov /= draws;
  for (int j = 0; j < 10; ++j)
    CHECK(cov(j, j) == doctest::Approx(model.eigvals[j]).epsilon(0.05));
}

TEST_CASE("draws live exactly in the model span") {
  const Grid g = make_grid(1, 1024);
  const GenerativeModel1D model = make_model_1d(g);
  auto rng = substream(3, 0);
  const FieldSample f = draw_1d(model, rng);
  // residual after projecting on the 10 components
  CVec proj = CVec::Zero(g.resolution);
  for (int j = 0; j < 10; ++j) {
    const double c = (model.fpcs.row(j) * f.values.real()).value() * g.cell_measure;
    proj += c * model.fpcs.row(j).transpose().cast<Complex>();
  }
  FieldSample resid = make_field(g, f.values - proj);
  CHECK(norm(resid) < 1e-10);
}

TEST_CASE("phantom: zero table, analytic disc area, serial/parallel identity") {
  EllipseMatrix zero(1, 6);
  zero << 0.0, 0.5, 0.5, 0.0, 0.0, 0.0;
  CHECK(norm(phantom(zero, 64 * 64)) == 0.0);

  // unit disc of radius 1/2 in the [-1,1]^2 frame: quadrature integral over
  // the unit square equals pi a b / 4 (the frame-to-domain Jacobian)
  EllipseMatrix disc(1, 6);
  disc << 1.0, 0.5, 0.5, 0.0, 0.0, 0.0;
  const FieldSample img = phantom(disc, 256 * 256);
  const double integral = img.values.real().sum() * img.grid.cell_measure;
  CHECK(std::abs(integral - std::numbers::pi / 16.0) < 1e-3);

  const FieldSample a = phantom(default_ellipses(), 128 * 128);
  const FieldSample b = phantom_serial(default_ellipses(), 128 * 128);
  CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("phantom matches an independent point-in-rotated-ellipse oracle") {
  const EllipseMatrix& e = default_ellipses();
  const FieldSample img = phantom(e, 256 * 256);
  const Grid& g = img.grid;
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<std::int64_t> pick(0, g.resolution - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::int64_t t = pick(rng);
    const double x = 2.0 * g.node_u(t) - 1.0;
    const double y = 1.0 - 2.0 * g.node_v(t);
    double expect = 0.0;
    for (Eigen::Index r = 0; r < e.rows(); ++r) {
      // rotate the offset into the ellipse frame (independent formulation
      // via the inverse rotation matrix applied to column vectors)
      const double th = -e(r, 5) * std::numbers::pi / 180.0;
      const double dx = x - e(r, 3), dy = y - e(r, 4);
      const double xr = std::cos(th) * dx - std::sin(th) * dy;
      const double yr = std::sin(th) * dx + std::cos(th) * dy;
      const double lhs = (xr * xr) / (e(r, 1) * e(r, 1)) + (yr * yr) / (e(r, 2) * e(r, 2));
      if (lhs <= 1.0) expect += e(r, 0);
    }
    CHECK(img.values[t].real() == doctest::Approx(expect));
  }
}

TEST_CASE("perturb_ellipses: identity at tiny scale, nondegenerate across seeds") {
  auto rng1 = substream(5, 1);
  const EllipseMatrix e1 = perturb_ellipses(default_ellipses(), rng1, 1e-12);
  CHECK((e1 - default_ellipses()).cwiseAbs().maxCoeff() < 1e-9);

  auto rng2 = substream(5, 2);
  auto rng3 = substream(5, 3);
  const EllipseMatrix a = perturb_ellipses(default_ellipses(), rng2, 0.05);
  const EllipseMatrix b = perturb_ellipses(default_ellipses(), rng3, 0.05);
  CHECK((a - b).cwiseAbs().maxCoeff() > 1e-6);
  CHECK((a.col(1).array() > 0).all());
  CHECK((a.col(2).array() > 0).all());
  CHECK_THROWS(perturb_ellipses(default_ellipses(), rng2, 0.0));
}

TEST_CASE("measure: noiseless equals analyze; constant function case") {
  const Grid g = make_grid(1, 256);
  CVec ones = CVec::Ones(g.resolution);
  const FieldSample f = make_field(g, ones);
  const BasisSpec samp = fourier_spec(3, 1);
  NoiseSpec quiet;
  auto rng = substream(1, 0);
  const MeasurementSet m = measure(f, samp, quiet, rng);
  CHECK(std::abs(m.values[0]) < 1e-13);
  CHECK(std::abs(m.values[1] - 1.0) < 1e-13);
  CHECK(std::abs(m.values[2]) < 1e-13);
  CHECK(m.noise_sigma == 0.0);
}

TEST_CASE("measure: noise power matches sigma^2 (chi-square oracle)") {
  const Grid g = make_grid(1, 256);
  const FieldSample f = make_field(g, CVec::Zero(g.resolution));
  const BasisSpec samp = fourier_spec(12, 1);
  NoiseSpec noise;
  noise.sigma = 0.02 * std::numbers::sqrt2;
  double acc = 0.0;
  const int reps = 100;
  for (int r = 0; r < reps; ++r) {
    auto rng = substream(42, static_cast<std::uint64_t>(r));
    const MeasurementSet m = measure(f, samp, noise, rng);
    acc += m.values.squaredNorm() / 12.0;
  }
  acc /= reps;
  CHECK(std::abs(acc - noise.sigma * noise.sigma) < 0.3 * noise.sigma * noise.sigma);
}

TEST_CASE("make_training_set: determinism and span membership") {
  const Grid g = make_grid(1, 1024);
  const GenerativeModel1D model = make_model_1d(g);
  const BasisSpec rec = wavelet_spec(64, 1, 4);
  NoiseSpec noise;
  noise.seed = 31;
  auto gen = [&](std::mt19937_64& rng) { return draw_1d(model, rng); };
  const TrainingSet a = make_training_set(gen, 8, rec, g, noise);
  const TrainingSet b = make_training_set(gen, 8, rec, g, noise);
  CHECK((a.Y - b.Y).cwiseAbs().maxCoeff() == 0.0);

  // noiseless rows live in the span of the component coefficient vectors up
  // to the wavelet projection residual of each component
  CMat comp_coeffs(10, 64);
  double max_resid = 0.0;
  for (int j = 0; j < 10; ++j) {
    const FieldSample phi = make_field(g, model.fpcs.row(j).transpose().cast<Complex>());
    comp_coeffs.row(j) = analyze_fast(phi, rec).transpose();
    const FieldSample back = synthesize_fast(CVec(comp_coeffs.row(j).transpose()), rec, g);
    FieldSample r = make_field(g, phi.values - back.values);
    max_resid = std::max(max_resid, norm(r));
  }
  // project row 0 onto the span of comp_coeffs rows
  Eigen::CompleteOrthogonalDecomposition<CMat> cod(comp_coeffs.transpose());
  const CVec row0 = a.Y.row(0).transpose();
  const CVec fitc = cod.solve(row0);
  const double resid = (comp_coeffs.transpose() * fitc - row0).norm();
  CHECK(resid <= 10 * std::sqrt(10.0) * max_resid + 1e-10);

  // real training noise only perturbs real parts
  NoiseSpec noisy = noise;
  noisy.sigma_tilde = 0.5;
  const TrainingSet c = make_training_set(gen, 4, rec, g, noisy);
  CHECK(c.Y.imag().cwiseAbs().maxCoeff() < 1e-12);
  CHECK((c.Y - a.Y.topRows(4)).cwiseAbs().maxCoeff() > 0.01);
}

TEST_CASE("substreams are order-independent and distinct") {
  auto r1 = substream(9, 4);
  auto r2 = substream(9, 5);
  auto r1b = substream(9, 4);
  CHECK(r1() == r1b());
  CHECK(r1() != r2());
}

TEST_CASE("2D training SNR sits near the documented level") {
  // reduced-size version of the phantom training protocol
  const Grid g = make_grid(2, 128 * 128);
  const BasisSpec rec = wavelet_spec(1024, 2, 4);
  NoiseSpec noise;
  noise.sigma_tilde = 0.0001;
  noise.seed = 11;
  const auto& e0 = default_ellipses();
  const TrainingSet t = make_training_set(
      [&](std::mt19937_64& rng) {
        return phantom_serial(perturb_ellipses(e0, rng, 0.035), 128 * 128);
      },
      6, rec, g, noise);
  // per-row SNR ||x|| / ||z|| with ||z|| ~ sigma_tilde sqrt(p)
  const double z = noise.sigma_tilde * std::sqrt(1024.0);
  for (int i = 0; i < 6; ++i) {
    const double snr = t.Y.row(i).norm() / z;
    CHECK(snr > 15.0);
    CHECK(snr < 80.0);
  }
}
