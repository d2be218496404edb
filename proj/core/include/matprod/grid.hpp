#pragma once

#include <array>
#include <map>
#include <vector>

#include "matprod/geometry.hpp"

namespace matprod {

/// Quadrature grid on the positive part of the unit sphere.
///
/// d = 2: uniform angles on [0, pi/2] with trapezoid weights. d > 2: regular
/// lattice on the probability simplex (resolution = subdivisions per edge)
/// mapped radially to the sphere, equal weights. Either way the weights are
/// normalized to sum to 1.
class ProjGrid {
 public:
  static constexpr int kMaxStencil = 8;

  /// Interpolation stencil: convex weights on grid points. Linear in angle
  /// for d = 2, barycentric on the Freudenthal subdivision for d > 2; the
  /// weights always sum to 1, which keeps the s = 0 operator stochastic.
  struct Stencil {
    std::array<int, kMaxStencil> index;
    std::array<double, kMaxStencil> weight;
    int count = 0;
  };

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<ProjPoint>& points() const { return points_; }
  const ProjPoint& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& quad_weights() const { return weights_; }
  const std::vector<double>& angles() const { return angles_; }  // d == 2 only

  Stencil stencil_for(const ProjPoint& y) const;
  Stencil stencil_for(const double* y) const;

  /// Linear/barycentric interpolation of grid values at x.
  double interpolate(const std::vector<double>& values, const ProjPoint& x) const;

  friend ProjGrid build_grid(int dim, int resolution);

 private:
  int dim_ = 0;
  int lattice_m_ = 0;  // d > 2: subdivisions per simplex edge
  std::vector<ProjPoint> points_;
  std::vector<double> weights_;
  std::vector<double> angles_;
  std::map<std::vector<int>, int> lattice_index_;
};

/// resolution >= 8: the number of grid points for d = 2, the edge subdivision
/// count for d > 2.
ProjGrid build_grid(int dim, int resolution);

}  // namespace matprod
