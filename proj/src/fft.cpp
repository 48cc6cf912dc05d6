#include "gsfpca/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gsfpca/dwt.hpp"

namespace gsfpca {

void fft_radix2(CVec& data, int sign) {
  const auto n = data.size();
  if (!is_power_of_two(n)) throw std::invalid_argument("fft_radix2: length must be a power of two");
  // bit reversal
  for (std::int64_t i = 1, j = 0; i < n; ++i) {
    std::int64_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  for (std::int64_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex wl(std::cos(ang), std::sin(ang));
    for (std::int64_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::int64_t k = 0; k < len / 2; ++k) {
        const Complex u = data[i + k];
        const Complex v = data[i + k + len / 2] * w;
        data[i + k] = u + v;
        data[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

void fft2_forward(CMat& data) {
  const auto n = data.rows();
  if (n != data.cols()) throw std::invalid_argument("fft2_forward: array must be square");
  CVec buf(n);
  for (std::int64_t r = 0; r < n; ++r) {
    buf = data.row(r).transpose();
    fft_radix2(buf, -1);
    data.row(r) = buf.transpose();
  }
  for (std::int64_t c = 0; c < n; ++c) {
    buf = data.col(c);
    fft_radix2(buf, -1);
    data.col(c) = buf;
  }
}

}  // namespace gsfpca
