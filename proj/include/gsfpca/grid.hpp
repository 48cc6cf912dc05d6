#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>

namespace gsfpca {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Uniform midpoint-rule discretization of [0,1]^dim. `resolution` is the
// total node count N, so the quadrature weight of every node is 1/N and the
// weights sum to the measure of the domain. In 2D the lattice has sqrt(N)
// nodes per axis and nodes are stored row-major: node t = (iy, ix) with
// u = (ix+0.5)/axis_points (first axis), v = (iy+0.5)/axis_points.
struct Grid {
  int dim = 1;
  std::int64_t resolution = 0;   // total node count, 1/du
  std::int64_t axis_points = 0;  // nodes per axis
  double cell_measure = 0.0;     // du = 1/resolution

  bool operator==(const Grid& o) const {
    return dim == o.dim && resolution == o.resolution;
  }
  bool operator!=(const Grid& o) const { return !(*this == o); }

  double node_u(std::int64_t t) const {
    std::int64_t ix = (dim == 1) ? t : t % axis_points;
    return (static_cast<double>(ix) + 0.5) / static_cast<double>(axis_points);
  }
  double node_v(std::int64_t t) const {
    std::int64_t iy = t / axis_points;
    return (static_cast<double>(iy) + 0.5) / static_cast<double>(axis_points);
  }
};

Grid make_grid(int dim, std::int64_t resolution);

// Complex scalar field sampled at the nodes of a grid.
struct FieldSample {
  Grid grid;
  CVec values;
};

FieldSample make_field(const Grid& grid);
FieldSample make_field(const Grid& grid, CVec values);

// Midpoint quadrature approximation of the L2 inner product
// <f,g> = int f conj(g); linear in f, conjugate-linear in g.
Complex inner(const FieldSample& f, const FieldSample& g);

double norm(const FieldSample& f);

}  // namespace gsfpca
