#include "gsfpca/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gsfpca/dwt.hpp"
#include "gsfpca/fft.hpp"
#include "gsfpca/parallel.hpp"

namespace gsfpca {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::int64_t isqrt_checked(std::int64_t n, const char* what) {
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  if (r * r != n) throw std::invalid_argument(std::string(what) + " must be a perfect square");
  return r;
}

std::int64_t per_axis_count(const BasisSpec& spec) {
  if (spec.dim == 1) return spec.count;
  return isqrt_checked(spec.count, "2D basis count");
}

void check_capacity(const BasisSpec& spec, const Grid& grid) {
  if (spec.dim != grid.dim) throw std::invalid_argument("basis/grid dimension mismatch");
  const auto per_axis = per_axis_count(spec);
  if (grid.axis_points < 4 * per_axis)
    throw std::invalid_argument("basis count exceeds grid capacity (need >= 4x atoms per axis)");
  if (spec.family == BasisFamily::kPixel && grid.axis_points % per_axis != 0)
    throw std::invalid_argument("pixel basis needs cell-aligned grid (axis divisible by cells)");
}

}  // namespace

std::string family_name(BasisFamily f) {
  switch (f) {
    case BasisFamily::kFourier: return "fourier";
    case BasisFamily::kWavelet: return "wavelet";
    default: return "pixel";
  }
}

BasisSpec fourier_spec(std::int64_t count, int dim) {
  if (count < 1) throw std::invalid_argument("fourier count must be positive");
  BasisSpec s;
  s.family = BasisFamily::kFourier;
  s.count = count;
  s.dim = dim;
  if (dim == 2) isqrt_checked(count, "2D fourier count");
  return s;
}

BasisSpec wavelet_spec(std::int64_t count, int dim, int order) {
  if (order < 1 || order > 10) throw std::invalid_argument("unsupported wavelet order");
  BasisSpec s;
  s.family = BasisFamily::kWavelet;
  s.count = count;
  s.dim = dim;
  s.wavelet_order = order;
  if (dim == 1 && !is_power_of_two(count))
    throw std::invalid_argument("1D wavelet count must be a power of 2");
  if (dim == 2 && !is_power_of_four(count))
    throw std::invalid_argument("2D wavelet count must be a power of 4");
  return s;
}

BasisSpec pixel_spec(std::int64_t count, int dim) {
  if (count < 1) throw std::invalid_argument("pixel count must be positive");
  BasisSpec s;
  s.family = BasisFamily::kPixel;
  s.count = count;
  s.dim = dim;
  if (dim == 2) isqrt_checked(count, "2D pixel count");
  // raw indicators: squared Riesz constants equal the cell measure
  s.riesz_lo = s.riesz_hi = 1.0 / static_cast<double>(count);
  return s;
}

CVec basis_atom(const BasisSpec& spec, const Grid& grid, std::int64_t index) {
  if (index < 0 || index >= spec.count) throw std::invalid_argument("basis_atom: bad index");
  check_capacity(spec, grid);
  const auto n = grid.resolution;
  CVec v(n);
  switch (spec.family) {
    case BasisFamily::kFourier: {
      if (spec.dim == 1) {
        const double freq = static_cast<double>(index - spec.count / 2);
        for (std::int64_t t = 0; t < n; ++t) {
          const double ph = kTwoPi * freq * grid.node_u(t);
          v[t] = Complex(std::cos(ph), std::sin(ph));
        }
      } else {
        const auto qa = per_axis_count(spec);
        const double fu = static_cast<double>(index % qa - qa / 2);
        const double fv = static_cast<double>(index / qa - qa / 2);
        for (std::int64_t t = 0; t < n; ++t) {
          const double ph = kTwoPi * (fu * grid.node_u(t) + fv * grid.node_v(t));
          v[t] = Complex(std::cos(ph), std::sin(ph));
        }
      }
      return v;
    }
    case BasisFamily::kWavelet:
      return wavelet_atom(index, spec.count, spec.wavelet_order, grid);
    default: {  // pixel
      v.setZero();
      const auto qa = per_axis_count(spec);
      const auto cell = grid.axis_points / qa;
      if (spec.dim == 1) {
        v.segment(index * cell, cell).setOnes();
      } else {
        const auto jc = index % qa, jr = index / qa;
        for (std::int64_t y = jr * cell; y < (jr + 1) * cell; ++y)
          v.segment(y * grid.axis_points + jc * cell, cell).setOnes();
      }
      return v;
    }
  }
}

BasisMatrix build_basis(const BasisSpec& spec, const Grid& grid) {
  check_capacity(spec, grid);
  BasisMatrix B;
  B.spec = spec;
  B.grid = grid;
  B.atoms.resize(spec.count, grid.resolution);
  parallel_for(spec.count, [&](std::int64_t j) {
    B.atoms.row(j) = basis_atom(spec, grid, j).transpose();
  });
  return B;
}

CVec analyze(const FieldSample& f, const BasisMatrix& B) {
  if (f.grid != B.grid) throw std::invalid_argument("analyze: grid mismatch");
  // entry j = <f, atom_j> = (1/N) sum f conj(atom_j)
  return (B.atoms.conjugate() * f.values) * f.grid.cell_measure;
}

FieldSample synthesize(const CVec& coeffs, const BasisMatrix& B) {
  if (coeffs.size() != B.spec.count)
    throw std::invalid_argument("synthesize: coefficient count mismatch");
  return make_field(B.grid, B.atoms.transpose() * coeffs);
}

CVec analyze_fast(const FieldSample& f, const BasisSpec& spec) {
  check_capacity(spec, f.grid);
  const Grid& grid = f.grid;
  switch (spec.family) {
    case BasisFamily::kWavelet:
      return wavelet_analyze(f, spec.count, spec.wavelet_order);
    case BasisFamily::kFourier: {
      const auto na = grid.axis_points;
      if (spec.dim == 1) {
        CVec spec_vals = f.values;
        fft_radix2(spec_vals, -1);
        CVec out(spec.count);
        for (std::int64_t k = 0; k < spec.count; ++k) {
          const auto freq = k - spec.count / 2;
          const double ph = -std::numbers::pi * static_cast<double>(freq) / static_cast<double>(na);
          const auto slot = ((freq % na) + na) % na;
          out[k] = spec_vals[slot] * Complex(std::cos(ph), std::sin(ph)) * grid.cell_measure;
        }
        return out;
      }
      CMat img(na, na);
      for (std::int64_t y = 0; y < na; ++y)
        img.row(y) = f.values.segment(y * na, na).transpose();
      fft2_forward(img);  // rows <-> v axis, cols <-> u axis
      const auto qa = per_axis_count(spec);
      CVec out(spec.count);
      for (std::int64_t k = 0; k < spec.count; ++k) {
        const auto fu = k % qa - qa / 2;
        const auto fv = k / qa - qa / 2;
        const double ph =
            -std::numbers::pi * static_cast<double>(fu + fv) / static_cast<double>(na);
        const auto su = ((fu % na) + na) % na;
        const auto sv = ((fv % na) + na) % na;
        out[k] = img(sv, su) * Complex(std::cos(ph), std::sin(ph)) * grid.cell_measure;
      }
      return out;
    }
    default: {  // pixel: block sums times the node weight
      const auto qa = per_axis_count(spec);
      const auto cell = grid.axis_points / qa;
      CVec out = CVec::Zero(spec.count);
      if (spec.dim == 1) {
        for (std::int64_t k = 0; k < spec.count; ++k)
          out[k] = f.values.segment(k * cell, cell).sum() * grid.cell_measure;
      } else {
        for (std::int64_t k = 0; k < spec.count; ++k) {
          const auto jc = k % qa, jr = k / qa;
          Complex s = 0.0;
          for (std::int64_t y = jr * cell; y < (jr + 1) * cell; ++y)
            s += f.values.segment(y * grid.axis_points + jc * cell, cell).sum();
          out[k] = s * grid.cell_measure;
        }
      }
      return out;
    }
  }
}

FieldSample synthesize_fast(const CVec& coeffs, const BasisSpec& spec, const Grid& grid) {
  if (coeffs.size() != spec.count)
    throw std::invalid_argument("synthesize_fast: coefficient count mismatch");
  check_capacity(spec, grid);
  switch (spec.family) {
    case BasisFamily::kWavelet:
      return wavelet_synthesize(coeffs, spec.wavelet_order, grid);
    case BasisFamily::kFourier: {
      const auto na = grid.axis_points;
      if (spec.dim == 1) {
        CVec spec_vals = CVec::Zero(na);
        for (std::int64_t k = 0; k < spec.count; ++k) {
          const auto freq = k - spec.count / 2;
          const double ph = std::numbers::pi * static_cast<double>(freq) / static_cast<double>(na);
          spec_vals[((freq % na) + na) % na] += coeffs[k] * Complex(std::cos(ph), std::sin(ph));
        }
        fft_radix2(spec_vals, +1);
        return make_field(grid, spec_vals);
      }
      const auto qa = per_axis_count(spec);
      CMat img = CMat::Zero(na, na);
      for (std::int64_t k = 0; k < spec.count; ++k) {
        const auto fu = k % qa - qa / 2;
        const auto fv = k / qa - qa / 2;
        const double ph =
            std::numbers::pi * static_cast<double>(fu + fv) / static_cast<double>(na);
        img(((fv % na) + na) % na, ((fu % na) + na) % na) +=
            coeffs[k] * Complex(std::cos(ph), std::sin(ph));
      }
      // unscaled inverse FFT along both axes
      CVec buf(na);
      for (std::int64_t r = 0; r < na; ++r) {
        buf = img.row(r).transpose();
        fft_radix2(buf, +1);
        img.row(r) = buf.transpose();
      }
      for (std::int64_t c = 0; c < na; ++c) {
        buf = img.col(c);
        fft_radix2(buf, +1);
        img.col(c) = buf;
      }
      CVec out(grid.resolution);
      for (std::int64_t y = 0; y < na; ++y) out.segment(y * na, na) = img.row(y).transpose();
      return make_field(grid, out);
    }
    default: {
      CVec out = CVec::Zero(grid.resolution);
      const auto qa = per_axis_count(spec);
      const auto cell = grid.axis_points / qa;
      if (spec.dim == 1) {
        for (std::int64_t k = 0; k < spec.count; ++k)
          out.segment(k * cell, cell).array() += coeffs[k];
      } else {
        for (std::int64_t k = 0; k < spec.count; ++k) {
          const auto jc = k % qa, jr = k / qa;
          for (std::int64_t y = jr * cell; y < (jr + 1) * cell; ++y)
            out.segment(y * grid.axis_points + jc * cell, cell).array() += coeffs[k];
        }
      }
      return make_field(grid, out);
    }
  }
}

CrossGram cross_gram(const BasisMatrix& rec, const BasisMatrix& samp) {
  if (rec.grid != samp.grid) throw std::invalid_argument("cross_gram: grid mismatch");
  CrossGram A;
  A.rows = samp.spec.count;
  A.cols = rec.spec.count;
  // (k,l) = <rec_l, samp_k> = (1/N) sum rec_l conj(samp_k)
  A.entries = (samp.atoms.conjugate() * rec.atoms.transpose()) * rec.grid.cell_measure;
  return A;
}

CrossGram cross_gram_fft(const BasisMatrix& rec, const BasisSpec& samp_spec) {
  if (samp_spec.family != BasisFamily::kFourier)
    throw std::invalid_argument("cross_gram_fft: sampling spec must be fourier");
  check_capacity(samp_spec, rec.grid);
  CrossGram A;
  A.rows = samp_spec.count;
  A.cols = rec.spec.count;
  A.entries.resize(A.rows, A.cols);
  parallel_for(A.cols, [&](std::int64_t l) {
    const FieldSample atom = make_field(rec.grid, rec.atoms.row(l).transpose());
    A.entries.col(l) = analyze_fast(atom, samp_spec);
  });
  return A;
}

CrossGram cross_gram_fast(const BasisSpec& rec_spec, const BasisSpec& samp_spec,
                          const Grid& grid) {
  check_capacity(rec_spec, grid);
  check_capacity(samp_spec, grid);
  CrossGram A;
  A.rows = samp_spec.count;
  A.cols = rec_spec.count;
  A.entries.resize(A.rows, A.cols);
  parallel_for(A.cols, [&](std::int64_t l) {
    const FieldSample atom = make_field(grid, basis_atom(rec_spec, grid, l));
    A.entries.col(l) = analyze_fast(atom, samp_spec);
  });
  return A;
}

}  // namespace gsfpca
