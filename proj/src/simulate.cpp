#include "gsfpca/simulate.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsfpca/parallel.hpp"

namespace gsfpca {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ (0x517cc1b727220a95ULL * (index + 1))));
}

namespace {

struct Bump {
  double center, width, weight;
};

// Ten bump mixtures with distinct supports; narrow widths keep the mixtures
// numerically periodic on [0,1] so the periodized wavelet families see no
// boundary jump. Orthonormalized by Gram-Schmidt under grid quadrature.
const std::vector<std::vector<Bump>> kBumpTable = {
    {{0.22, 0.0040, 1.0}},
    {{0.50, 0.0050, 1.0}},
    {{0.78, 0.0040, 1.0}},
    {{0.33, 0.0016, 1.0}, {0.67, 0.0016, -1.0}},
    {{0.25, 0.0010, 1.0}, {0.75, 0.0010, 1.0}},
    {{0.42, 0.0008, 1.0}, {0.58, 0.0008, -0.8}},
    {{0.30, 0.0030, 1.0}, {0.52, 0.0012, -0.6}, {0.72, 0.0030, 0.8}},
    {{0.38, 0.0006, 1.0}, {0.46, 0.0006, -1.0}, {0.62, 0.0006, 0.7}},
    {{0.27, 0.0005, 1.0}, {0.35, 0.0020, -0.5}, {0.80, 0.0008, 0.6}},
    {{0.55, 0.0004, 1.0}, {0.48, 0.0015, 0.5}, {0.70, 0.0005, -0.9}},
};

}  // namespace

GenerativeModel1D make_model_1d(const Grid& grid) {
  if (grid.dim != 1) throw std::invalid_argument("make_model_1d: 1D grid required");
  const auto m0 = static_cast<std::int64_t>(kBumpTable.size());
  const auto n = grid.resolution;
  GenerativeModel1D model;
  model.grid = grid;
  model.fpcs.resize(m0, n);
  for (std::int64_t j = 0; j < m0; ++j)
    for (std::int64_t t = 0; t < n; ++t) {
      const double u = grid.node_u(t);
      double v = 0.0;
      for (const auto& b : kBumpTable[j])
        v += b.weight * std::exp(-(u - b.center) * (u - b.center) / b.width);
      model.fpcs(j, t) = v;
    }
  // Gram-Schmidt under the quadrature inner product
  for (std::int64_t j = 0; j < m0; ++j) {
    for (std::int64_t i = 0; i < j; ++i) {
      const double c = model.fpcs.row(j).dot(model.fpcs.row(i)) * grid.cell_measure;
      model.fpcs.row(j) -= c * model.fpcs.row(i);
    }
    const double nj = model.fpcs.row(j).norm() * std::sqrt(grid.cell_measure);
    if (nj < 1e-12) throw std::runtime_error("make_model_1d: degenerate bump table");
    model.fpcs.row(j) /= nj;
  }
  model.eigvals.resize(m0);
  for (std::int64_t j = 0; j < m0; ++j) model.eigvals[j] = static_cast<double>(m0 - j);
  return model;
}

FieldSample synth_1d(const GenerativeModel1D& model, const RVec& factors) {
  if (factors.size() != model.m0())
    throw std::invalid_argument("synth_1d: factor count mismatch");
  const RVec scaled = factors.array() * model.eigvals.array().sqrt();
  const RVec values = model.fpcs.transpose() * scaled;
  return make_field(model.grid, values.cast<Complex>());
}

FieldSample draw_1d(const GenerativeModel1D& model, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  RVec xi(model.m0());
  for (std::int64_t j = 0; j < model.m0(); ++j) xi[j] = gauss(rng);
  return synth_1d(model, xi);
}

const EllipseMatrix& default_ellipses() {
  // the standard modified Shepp-Logan ten-ellipse table
  static const EllipseMatrix e = [] {
    EllipseMatrix m(10, 6);
    m << 1.0, 0.69, 0.92, 0.0, 0.0, 0.0,
        -0.8, 0.6624, 0.8740, 0.0, -0.0184, 0.0,
        -0.2, 0.1100, 0.3100, 0.22, 0.0, -18.0,
        -0.2, 0.1600, 0.4100, -0.22, 0.0, 18.0,
        0.1, 0.2100, 0.2500, 0.0, 0.35, 0.0,
        0.1, 0.0460, 0.0460, 0.0, 0.1, 0.0,
        0.1, 0.0460, 0.0460, 0.0, -0.1, 0.0,
        0.1, 0.0460, 0.0230, -0.08, -0.605, 0.0,
        0.1, 0.0230, 0.0230, 0.0, -0.606, 0.0,
        0.1, 0.0230, 0.0460, 0.06, -0.605, 0.0;
    return m;
  }();
  return e;
}

const Eigen::Matrix<double, 1, 6>& perturbation_deviations() {
  static const Eigen::Matrix<double, 1, 6> d =
      (Eigen::Matrix<double, 1, 6>() << 0.4, 0.2, 0.2, 0.2, 0.2, 20.0).finished();
  return d;
}

EllipseMatrix perturb_ellipses(const EllipseMatrix& e0, std::mt19937_64& rng, double scale) {
  if (scale <= 0) throw std::invalid_argument("perturb_ellipses: scale must be > 0");
  std::normal_distribution<double> gauss(0.0, 1.0);
  EllipseMatrix e = e0;
  const auto& dev = perturbation_deviations();
  for (Eigen::Index r = 0; r < e.rows(); ++r)
    for (Eigen::Index c = 0; c < 6; ++c) e(r, c) += gauss(rng) * scale * dev[c];
  // re-enforce the invariants by clamping
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    e(r, 1) = std::max(e(r, 1), 0.005);
    e(r, 2) = std::max(e(r, 2), 0.005);
    e(r, 3) = std::clamp(e(r, 3), -1.0, 1.0);
    e(r, 4) = std::clamp(e(r, 4), -1.0, 1.0);
  }
  return e;
}

namespace {

// Additive intensity of all ellipses containing the point (x, y) of the
// [-1,1]^2 frame.
double ellipse_sum(const EllipseMatrix& e, double x, double y) {
  double v = 0.0;
  for (Eigen::Index r = 0; r < e.rows(); ++r) {
    const double a = e(r, 1), b = e(r, 2);
    const double t = e(r, 5) * std::numbers::pi / 180.0;
    const double ct = std::cos(t), st = std::sin(t);
    const double dx = x - e(r, 3), dy = y - e(r, 4);
    const double xr = ct * dx + st * dy;
    const double yr = -st * dx + ct * dy;
    if ((xr / a) * (xr / a) + (yr / b) * (yr / b) <= 1.0) v += e(r, 0);
  }
  return v;
}

template <typename ForEach>
FieldSample phantom_impl(const EllipseMatrix& e, std::int64_t resolution, ForEach&& loop) {
  const Grid grid = make_grid(2, resolution);
  CVec values(grid.resolution);
  const auto na = grid.axis_points;
  loop(na, [&](std::int64_t iy) {
    const double y = 1.0 - 2.0 * ((static_cast<double>(iy) + 0.5) / static_cast<double>(na));
    for (std::int64_t ix = 0; ix < na; ++ix) {
      const double x = 2.0 * ((static_cast<double>(ix) + 0.5) / static_cast<double>(na)) - 1.0;
      values[iy * na + ix] = ellipse_sum(e, x, y);
    }
  });
  return make_field(grid, std::move(values));
}

}  // namespace

FieldSample phantom(const EllipseMatrix& e, std::int64_t resolution) {
  return phantom_impl(e, resolution,
                      [](std::int64_t n, auto&& body) { parallel_for(n, body); });
}

FieldSample phantom_serial(const EllipseMatrix& e, std::int64_t resolution) {
  return phantom_impl(e, resolution,
                      [](std::int64_t n, auto&& body) { serial_for(n, body); });
}

MeasurementSet measure(const FieldSample& f, const BasisSpec& sampling_spec,
                       const NoiseSpec& noise, std::mt19937_64& rng) {
  if (noise.sigma < 0) throw std::invalid_argument("measure: sigma must be >= 0");
  MeasurementSet m;
  m.sampling_spec = sampling_spec;
  m.noise_sigma = noise.sigma;
  m.values = analyze_fast(f, sampling_spec);
  if (noise.sigma > 0) {
    std::normal_distribution<double> gauss(0.0, noise.sigma / std::numbers::sqrt2);
    for (Eigen::Index k = 0; k < m.values.size(); ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      m.values[k] += Complex(re, im);
    }
  }
  return m;
}

TrainingSet make_training_set(const std::function<FieldSample(std::mt19937_64&)>& generator,
                              std::int64_t n, const BasisSpec& rec_spec, const Grid& grid,
                              const NoiseSpec& noise, std::uint64_t seed_offset) {
  if (n < 2) throw std::invalid_argument("make_training_set: need n >= 2");
  if (noise.sigma_tilde < 0) throw std::invalid_argument("make_training_set: bad sigma_tilde");
  TrainingSet t;
  t.basis_spec = rec_spec;
  t.noise_sigma_tilde = noise.sigma_tilde;
  t.Y.resize(n, rec_spec.count);
  // Exceptions must not escape the parallel region; collect and rethrow.
  std::atomic<bool> failed{false};
  std::string error;
  std::mutex error_mutex;
  parallel_for(n, [&](std::int64_t i) {
    if (failed.load(std::memory_order_relaxed)) return;
    try {
      auto rng = substream(noise.seed, seed_offset + static_cast<std::uint64_t>(i));
      const FieldSample f = generator(rng);
      if (f.grid != grid) throw std::invalid_argument("generator grid mismatch");
      CVec row = analyze_fast(f, rec_spec);
      if (noise.sigma_tilde > 0) {
        std::normal_distribution<double> gauss(0.0, noise.sigma_tilde);
        for (Eigen::Index l = 0; l < row.size(); ++l) row[l] += gauss(rng);
      }
      t.Y.row(i) = row.transpose();
    } catch (const std::exception& e) {
      std::lock_guard<std::mutex> lock(error_mutex);
      failed = true;
      if (error.empty()) error = e.what();
    }
  });
  if (failed) throw std::runtime_error("make_training_set: " + error);
  return t;
}

}  // namespace gsfpca
