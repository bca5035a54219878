#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <utility>

#include "wnl/errors.hpp"

namespace wnl {

using Complex = std::complex<double>;

template <typename Scalar>
using Array2 = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Uniform node-centered 2D grid with physical extents.
/// Node (ix, iy) sits at (xmin + ix*dx, ymin + iy*dy) with
/// dx = (xmax-xmin)/(nx-1) and the same formula in y.
struct Grid2D {
  int nx = 0;
  int ny = 0;
  double xmin = 0.0, xmax = 0.0;
  double ymin = 0.0, ymax = 0.0;

  Grid2D() = default;
  Grid2D(int nx_, int ny_, double xmin_, double xmax_, double ymin_, double ymax_)
      : nx(nx_), ny(ny_), xmin(xmin_), xmax(xmax_), ymin(ymin_), ymax(ymax_) {
    if (nx < 2 || ny < 2) throw ConfigError("Grid2D: nx, ny must be >= 2");
    if (!(xmax > xmin) || !(ymax > ymin))
      throw ConfigError("Grid2D: extents must satisfy xmax > xmin, ymax > ymin");
  }

  /// Square grid helper: n x n nodes on [-half, half]^2.
  static Grid2D square(int n, double half) { return Grid2D(n, n, -half, half, -half, half); }

  double dx() const { return (xmax - xmin) / (nx - 1); }
  double dy() const { return (ymax - ymin) / (ny - 1); }
  double x(int ix) const { return xmin + ix * dx(); }
  double y(int iy) const { return ymin + iy * dy(); }
  bool square_extents() const { return std::abs((xmax - xmin) - (ymax - ymin)) < 1e-12; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.nx == b.nx && a.ny == b.ny && a.xmin == b.xmin && a.xmax == b.xmax &&
           a.ymin == b.ymin && a.ymax == b.ymax;
  }
};

/// Sampled scalar field on a Grid2D. values(ix, iy) is the sample at
/// (grid.x(ix), grid.y(iy)). Immutable by convention once built.
template <typename Scalar>
struct Field {
  Grid2D grid;
  Array2<Scalar> values;

  Field() = default;
  explicit Field(const Grid2D& g) : grid(g), values(Array2<Scalar>::Zero(g.nx, g.ny)) {}
  Field(const Grid2D& g, Array2<Scalar> v) : grid(g), values(std::move(v)) {
    if (values.rows() != grid.nx || values.cols() != grid.ny)
      throw ConfigError("Field: value array does not match grid");
  }

  Scalar operator()(int ix, int iy) const { return values(ix, iy); }
  Scalar& operator()(int ix, int iy) { return values(ix, iy); }

  double max_abs() const { return values.abs().maxCoeff(); }

  /// Bilinear sample at a physical point; zero outside the grid.
  Scalar bilinear(double x, double y) const {
    const double fx = (x - grid.xmin) / grid.dx();
    const double fy = (y - grid.ymin) / grid.dy();
    if (fx < 0.0 || fy < 0.0 || fx > grid.nx - 1 || fy > grid.ny - 1) return Scalar(0);
    int ix = static_cast<int>(fx);
    int iy = static_cast<int>(fy);
    if (ix == grid.nx - 1) --ix;
    if (iy == grid.ny - 1) --iy;
    const double tx = fx - ix;
    const double ty = fy - iy;
    return values(ix, iy) * Scalar((1 - tx) * (1 - ty)) +
           values(ix + 1, iy) * Scalar(tx * (1 - ty)) +
           values(ix, iy + 1) * Scalar((1 - tx) * ty) +
           values(ix + 1, iy + 1) * Scalar(tx * ty);
  }
};

using RealField = Field<double>;
using ComplexField = Field<Complex>;

/// Relative L2 distance ||a-b|| / ||b|| over the whole grid.
template <typename Scalar>
double rel_l2_distance(const Field<Scalar>& a, const Field<Scalar>& b) {
  if (!(a.grid == b.grid)) throw ConfigError("rel_l2_distance: grids differ");
  const double nb = std::sqrt(b.values.abs2().sum());
  const double nd = std::sqrt((a.values - b.values).abs2().sum());
  return nb > 0.0 ? nd / nb : nd;
}

}  // namespace wnl
