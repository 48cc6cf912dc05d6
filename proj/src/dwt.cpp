#include "gsfpca/dwt.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsfpca {

namespace {

// Daubechies orthonormal lowpass filters, synthesis order (db2 starts with
// 0.4829...). Obtained by spectral factorization of the binomial half-band
// polynomial; each filter satisfies sum h = sqrt(2), sum h^2 = 1 and
// sum_j h_j h_{j+2k} = 0 to better than 1e-18.
const std::vector<std::vector<double>> kDaub = {
    // db1 (Haar)
    {0.7071067811865475244, 0.7071067811865475244},
    // db2
    {0.4829629131445341434, 0.8365163037378079056, 0.2241438680420133810,
     -0.1294095225512603812},
    // db3
    {0.3326705529500826160, 0.8068915093110925765, 0.4598775021184915701,
     -0.1350110200102545887, -0.08544127388202666169, 0.03522629188570953660},
    // db4
    {0.2303778133088965009, 0.7148465705529156471, 0.6308807679298589079,
     -0.02798376941685985421, -0.1870348117190930841, 0.03084138183556076363,
     0.03288301166688519974, -0.01059740178506903210},
    // db5
    {0.1601023979741929145, 0.6038292697971896705, 0.7243085284377729277,
     0.1384281459013207315, -0.2422948870663820319, -0.03224486958463837465,
     0.07757149384004571352, -0.006241490212798274274, -0.01258075199908199947,
     0.003335725285473771278},
    // db6
    {0.1115407433501094636, 0.4946238903984530857, 0.7511339080210953507,
     0.3152503517091976291, -0.2262646939654398201, -0.1297668675672619356,
     0.09750160558732304910, 0.02752286553030572863, -0.03158203931748602957,
     0.0005538422011614961393, 0.004777257510945510640, -0.001077301085308479565},
    // db7
    {0.07785205408500917902, 0.3965393194819173065, 0.7291320908462351199,
     0.4697822874051931225, -0.1439060039285649754, -0.2240361849938749826,
     0.07130921926683026475, 0.08061260915108307191, -0.03802993693501441358,
     -0.01657454163066688065, 0.01255099855609984061, 0.0004295779729213665211,
     -0.001801640704047490915, 0.0003537137999745202484},
    // db8
    {0.05441584224310400996, 0.3128715909142999707, 0.6756307362972898068,
     0.5853546836542067128, -0.01582910525634930567, -0.2840155429615469265,
     0.0004724845739132827704, 0.1287474266204784589, -0.01736930100180754617,
     -0.04408825393079475151, 0.01398102791739828165, 0.008746094047405776716,
     -0.004870352993451574310, -0.0003917403733769470463, 0.0006754494064505693664,
     -0.0001174767841247695337},
    // db9
    {0.03807794736387834659, 0.2438346746125903537, 0.6048231236901111119,
     0.6572880780513005381, 0.1331973858250075762, -0.2932737832791749088,
     -0.09684078322297646051, 0.1485407493381063801, 0.03072568147933337921,
     -0.06763282906132997368, 0.0002509471148314519576, 0.02236166212367909721,
     -0.004723204757751397278, -0.004281503682463429834, 0.001847646883056226477,
     0.0002303857635231959672, -0.0002519631889427101370, 0.00003934732031627159948},
    // db10
    {0.02667005790055555359, 0.1881768000776914890, 0.5272011889317255865,
     0.6884590394536035657, 0.2811723436605774607, -0.2498464243273153794,
     -0.1959462743773770435, 0.1273693403357932601, 0.09305736460357235116,
     -0.07139414716639708715, -0.02945753682187581286, 0.03321267405934100174,
     0.003606553566956169655, -0.01073317548333057504, 0.001395351747052901166,
     0.001992405295185056117, -0.0006858566949597116266, -0.0001164668551292854510,
     0.00009358867032006959133, -0.00001326420289452124481},
};

void check_order(int order) {
  if (order < 1 || order > 10)
    throw std::invalid_argument("wavelet order must be in 1..10, got " + std::to_string(order));
}

// One periodic analysis step: x (even length n) -> approx, detail (n/2 each).
void step_forward(const CVec& x, const std::vector<double>& h, const std::vector<double>& g,
                  CVec& a, CVec& d) {
  const auto n = x.size();
  const auto L = static_cast<std::int64_t>(h.size());
  a.resize(n / 2);
  d.resize(n / 2);
  for (std::int64_t k = 0; k < n / 2; ++k) {
    Complex sa = 0.0, sd = 0.0;
    for (std::int64_t j = 0; j < L; ++j) {
      const Complex v = x[(2 * k + j) % n];
      sa += h[j] * v;
      sd += g[j] * v;
    }
    a[k] = sa;
    d[k] = sd;
  }
}

// Adjoint of step_forward (exact inverse, the filter bank being orthogonal).
void step_inverse(const CVec& a, const CVec& d, const std::vector<double>& h,
                  const std::vector<double>& g, CVec& x) {
  const auto half = a.size();
  const auto n = 2 * half;
  const auto L = static_cast<std::int64_t>(h.size());
  x = CVec::Zero(n);
  for (std::int64_t k = 0; k < half; ++k) {
    for (std::int64_t j = 0; j < L; ++j) {
      const auto i = (2 * k + j) % n;
      x[i] += h[j] * a[k] + g[j] * d[k];
    }
  }
}

}  // namespace

const std::vector<double>& daubechies_lowpass(int order) {
  check_order(order);
  return kDaub[order - 1];
}

std::vector<double> qmf_highpass(const std::vector<double>& h) {
  const auto L = h.size();
  std::vector<double> g(L);
  for (std::size_t j = 0; j < L; ++j) g[j] = ((j % 2) ? -1.0 : 1.0) * h[L - 1 - j];
  return g;
}

bool is_power_of_two(std::int64_t n) { return n > 0 && (n & (n - 1)) == 0; }

bool is_power_of_four(std::int64_t n) {
  if (!is_power_of_two(n)) return false;
  while (n > 1) n >>= 2;
  return n == 1;
}

CVec dwt_forward_1d(const CVec& x, int order) {
  check_order(order);
  if (!is_power_of_two(x.size()))
    throw std::invalid_argument("dwt_forward_1d: length must be a power of two");
  const auto& h = daubechies_lowpass(order);
  const auto g = qmf_highpass(h);
  CVec out(x.size());
  CVec a = x, na, d;
  std::int64_t end = x.size();
  while (a.size() > 1) {
    step_forward(a, h, g, na, d);
    out.segment(end - d.size(), d.size()) = d;
    end -= d.size();
    a.swap(na);
  }
  out[0] = a[0];
  return out;
}

CVec dwt_inverse_1d(const CVec& coeffs, int order) {
  check_order(order);
  const auto n = coeffs.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("dwt_inverse_1d: length must be a power of two");
  const auto& h = daubechies_lowpass(order);
  const auto g = qmf_highpass(h);
  CVec a = coeffs.head(1), x;
  std::int64_t pos = 1;
  while (pos < n) {
    const CVec d = coeffs.segment(pos, a.size());
    step_inverse(a, d, h, g, x);
    a.swap(x);
    pos += a.size() / 2;
  }
  return a;
}

CMat dwt_forward_2d(const CMat& x, int order) {
  check_order(order);
  const auto n = x.rows();
  if (n != x.cols() || !is_power_of_two(n))
    throw std::invalid_argument("dwt_forward_2d: array must be square with power-of-two side");
  const auto& h = daubechies_lowpass(order);
  const auto g = qmf_highpass(h);
  CMat c = x;
  CVec a, d, row;
  for (std::int64_t m = n; m > 1; m /= 2) {
    // rows of the current approx block
    for (std::int64_t r = 0; r < m; ++r) {
      row = c.row(r).head(m).transpose();
      step_forward(row, h, g, a, d);
      c.row(r).head(m / 2) = a.transpose();
      c.row(r).segment(m / 2, m / 2) = d.transpose();
    }
    // columns
    for (std::int64_t q = 0; q < m; ++q) {
      row = c.col(q).head(m);
      step_forward(row, h, g, a, d);
      c.col(q).head(m / 2) = a;
      c.col(q).segment(m / 2, m / 2) = d;
    }
  }
  return c;
}

CMat dwt_inverse_2d(const CMat& coeffs, int order) {
  check_order(order);
  const auto n = coeffs.rows();
  if (n != coeffs.cols() || !is_power_of_two(n))
    throw std::invalid_argument("dwt_inverse_2d: array must be square with power-of-two side");
  const auto& h = daubechies_lowpass(order);
  const auto g = qmf_highpass(h);
  CMat c = coeffs;
  CVec a, d, x;
  for (std::int64_t m = 2; m <= n; m *= 2) {
    for (std::int64_t q = 0; q < m; ++q) {
      a = c.col(q).head(m / 2);
      d = c.col(q).segment(m / 2, m / 2);
      step_inverse(a, d, h, g, x);
      c.col(q).head(m) = x;
    }
    for (std::int64_t r = 0; r < m; ++r) {
      a = c.row(r).head(m / 2).transpose();
      d = c.row(r).segment(m / 2, m / 2).transpose();
      step_inverse(a, d, h, g, x);
      c.row(r).head(m) = x.transpose();
    }
  }
  return c;
}

void corner_coords_2d(std::int64_t count, std::int64_t index, std::int64_t* row,
                      std::int64_t* col) {
  if (!is_power_of_four(count))
    throw std::invalid_argument("corner_coords_2d: count must be a power of 4");
  if (index < 0 || index >= count) throw std::invalid_argument("corner_coords_2d: bad index");
  if (index == 0) {
    *row = 0;
    *col = 0;
    return;
  }
  // level j holds indices [4^j, 4^{j+1}) split into HL, LH, HH blocks of 4^j each
  std::int64_t j = 0, base = 1;
  while (index >= 4 * base) {
    base *= 4;
    ++j;
  }
  const std::int64_t side = std::int64_t(1) << j;  // 2^j
  const std::int64_t off = index - base;
  const std::int64_t block = off / base;  // 0=HL, 1=LH, 2=HH
  const std::int64_t within = off % base;
  const std::int64_t r = within / side, c = within % side;
  switch (block) {
    case 0: *row = r; *col = side + c; break;
    case 1: *row = side + r; *col = c; break;
    default: *row = side + r; *col = side + c; break;
  }
}

namespace {
void check_wavelet_args(const Grid& grid, std::int64_t count, int order) {
  check_order(order);
  if (grid.dim == 1) {
    if (!is_power_of_two(count))
      throw std::invalid_argument("wavelet count must be a power of 2 in 1D");
  } else {
    if (!is_power_of_four(count))
      throw std::invalid_argument("wavelet count must be a power of 4 in 2D");
  }
  if (!is_power_of_two(grid.axis_points))
    throw std::invalid_argument("wavelet transforms need a power-of-two grid axis");
  if (count > grid.resolution)
    throw std::invalid_argument("wavelet count exceeds grid capacity");
}
}  // namespace

CVec wavelet_analyze(const FieldSample& f, std::int64_t count, int order) {
  check_wavelet_args(f.grid, count, order);
  const double scale = std::sqrt(f.grid.cell_measure);  // 1/sqrt(N)
  if (f.grid.dim == 1) {
    CVec all = dwt_forward_1d(f.values, order);
    return all.head(count) * scale;
  }
  const auto na = f.grid.axis_points;
  CMat img = Eigen::Map<const CMat>(f.values.data(), na, na).transpose();  // row-major view
  CMat c = dwt_forward_2d(img, order);
  CVec out(count);
  for (std::int64_t t = 0; t < count; ++t) {
    std::int64_t r, q;
    corner_coords_2d(count, t, &r, &q);
    out[t] = c(r, q) * scale;
  }
  return out;
}

FieldSample wavelet_synthesize(const CVec& coeffs, int order, const Grid& grid) {
  check_wavelet_args(grid, coeffs.size(), order);
  const double scale = 1.0 / std::sqrt(grid.cell_measure);  // sqrt(N)
  if (grid.dim == 1) {
    CVec full = CVec::Zero(grid.resolution);
    full.head(coeffs.size()) = coeffs;
    return make_field(grid, dwt_inverse_1d(full, order) * scale);
  }
  const auto na = grid.axis_points;
  CMat c = CMat::Zero(na, na);
  for (std::int64_t t = 0; t < coeffs.size(); ++t) {
    std::int64_t r, q;
    corner_coords_2d(coeffs.size(), t, &r, &q);
    c(r, q) = coeffs[t];
  }
  CMat img = dwt_inverse_2d(c, order) * scale;
  CMat tr = img.transpose();  // back to row-major node order
  return make_field(grid, Eigen::Map<const CVec>(tr.data(), grid.resolution));
}

CVec wavelet_atom(std::int64_t index, std::int64_t count, int order, const Grid& grid) {
  CVec e = CVec::Zero(count);
  if (index < 0 || index >= count) throw std::invalid_argument("wavelet_atom: bad index");
  e[index] = 1.0;
  return wavelet_synthesize(e, order, grid).values;
}

}  // namespace gsfpca
