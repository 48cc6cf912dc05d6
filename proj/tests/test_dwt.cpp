#include <doctest.h>

#include <cmath>
#include <random>

#include "gsfpca/dwt.hpp"
#include "gsfpca/grid.hpp"

using namespace gsfpca;

TEST_CASE("daubechies filters satisfy the QMF conditions") {
  for (int s = 1; s <= 10; ++s) {
    const auto& h = daubechies_lowpass(s);
    REQUIRE(h.size() == static_cast<std::size_t>(2 * s));
    double sum = 0, sq = 0;
    for (double c : h) {
      sum += c;
      sq += c * c;
    }
    CHECK(sum == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(sq == doctest::Approx(1.0).epsilon(1e-14));
    for (int k = 1; k < s; ++k) {
      double dot = 0;
      for (std::size_t j = 0; j + 2 * k < h.size(); ++j) dot += h[j] * h[j + 2 * k];
      CHECK(std::abs(dot) < 1e-14);
    }
  }
  CHECK_THROWS(daubechies_lowpass(0));
  CHECK_THROWS(daubechies_lowpass(11));
}

TEST_CASE("periodic DWT is orthogonal (round trip + energy)") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  for (int s : {1, 2, 4, 7, 10}) {
    CVec x(64);
    for (auto& v : x) v = Complex(gauss(rng), gauss(rng));
    const CVec c = dwt_forward_1d(x, s);
    CHECK(std::abs(c.squaredNorm() - x.squaredNorm()) < 1e-12 * x.squaredNorm());
    const CVec back = dwt_inverse_1d(c, s);
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("haar transform layout is coarsest-first") {
  CVec x(4);
  x << 1.0, 1.0, 1.0, 1.0;
  const CVec c = dwt_forward_1d(x, 1);
  CHECK(c[0].real() == doctest::Approx(2.0));  // single approx carries all mass
  CHECK(c.tail(3).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("2D square transform is orthogonal") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss;
  for (int s : {1, 4}) {
    CMat x(16, 16);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = Complex(gauss(rng), gauss(rng));
    const CMat c = dwt_forward_2d(x, s);
    CHECK(std::abs(c.squaredNorm() - x.squaredNorm()) < 1e-12 * x.squaredNorm());
    const CMat back = dwt_inverse_2d(c, s);
    CHECK((back - x).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("corner linearization covers each level block once") {
  std::int64_t r = 0, c = 0;
  corner_coords_2d(16, 0, &r, &c);
  CHECK((r == 0 && c == 0));
  // level 0: HL (0,1), LH (1,0), HH (1,1)
  corner_coords_2d(16, 1, &r, &c);
  CHECK((r == 0 && c == 1));
  corner_coords_2d(16, 2, &r, &c);
  CHECK((r == 1 && c == 0));
  corner_coords_2d(16, 3, &r, &c);
  CHECK((r == 1 && c == 1));
  // all 16 indices hit distinct cells of the 4x4 corner
  bool seen[4][4] = {};
  for (std::int64_t t = 0; t < 16; ++t) {
    corner_coords_2d(16, t, &r, &c);
    REQUIRE(r < 4);
    REQUIRE(c < 4);
    CHECK(!seen[r][c]);
    seen[r][c] = true;
  }
}

TEST_CASE("wavelet analyze/synthesize round trip on the grid") {
  const Grid g = make_grid(1, 512);
  std::mt19937_64 rng(8);
  std::normal_distribution<double> gauss;
  CVec coeffs(32);
  for (auto& v : coeffs) v = Complex(gauss(rng), gauss(rng));
  for (int s : {1, 3, 8}) {
    const FieldSample f = wavelet_synthesize(coeffs, s, g);
    const CVec back = wavelet_analyze(f, 32, s);
    CHECK((back - coeffs).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("wavelet atoms are unit-norm under quadrature") {
  const Grid g = make_grid(1, 256);
  for (int s : {1, 5}) {
    for (std::int64_t j : {0, 1, 7, 15}) {
      const CVec a = wavelet_atom(j, 16, s, g);
      const double nrm = std::sqrt(a.squaredNorm() * g.cell_measure);
      CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("2D wavelet synthesis matches coefficient embedding") {
  const Grid g = make_grid(2, 64 * 64);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  CVec coeffs(16);
  for (auto& v : coeffs) v = Complex(gauss(rng), 0.0);
  const FieldSample f = wavelet_synthesize(coeffs, 2, g);
  const CVec back = wavelet_analyze(f, 16, 2);
  CHECK((back - coeffs).cwiseAbs().maxCoeff() < 1e-10);
}
