#include "gsfpca/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gsfpca {

namespace {
std::int64_t isqrt_exact(std::int64_t n) {
  auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(n))));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return (r * r == n) ? r : -1;
}
}  // namespace

Grid make_grid(int dim, std::int64_t resolution) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("make_grid: dim must be 1 or 2");
  if (resolution < 2)
    throw std::invalid_argument("make_grid: resolution must be at least 2, got " +
                                std::to_string(resolution));
  Grid g;
  g.dim = dim;
  g.resolution = resolution;
  if (dim == 1) {
    g.axis_points = resolution;
  } else {
    std::int64_t r = isqrt_exact(resolution);
    if (r < 0)
      throw std::invalid_argument("make_grid: 2D resolution must be a perfect square, got " +
                                  std::to_string(resolution));
    g.axis_points = r;
  }
  g.cell_measure = 1.0 / static_cast<double>(resolution);
  return g;
}

FieldSample make_field(const Grid& grid) {
  return FieldSample{grid, CVec::Zero(grid.resolution)};
}

FieldSample make_field(const Grid& grid, CVec values) {
  if (values.size() != grid.resolution)
    throw std::invalid_argument("make_field: value count does not match grid resolution");
  return FieldSample{grid, std::move(values)};
}

Complex inner(const FieldSample& f, const FieldSample& g) {
  if (f.grid != g.grid) throw std::invalid_argument("inner: fields live on different grids");
  // Eigen's dot conjugates its left operand: g.dot(f) = sum conj(g) f.
  return Complex(g.values.dot(f.values)) * f.grid.cell_measure;
}

double norm(const FieldSample& f) {
  return f.values.norm() * std::sqrt(f.grid.cell_measure);
}

}  // namespace gsfpca
