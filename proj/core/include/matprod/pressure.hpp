#pragma once

#include <array>
#include <vector>

#include "matprod/transfer_operator.hpp"

namespace matprod {

/// log of the dominant transfer-operator eigenvalue per tilt parameter s.
/// Convex in s; Lambda'(0) is the top Lyapunov exponent and Lambda''(0) the
/// asymptotic variance of the norm cocycle.
struct PressureCurve {
  std::vector<double> s;
  std::vector<double> lambda;        // log kappa(s)
  std::vector<double> kappa;
  std::vector<double> residual;      // eigensolver residual per point
  std::vector<double> refine_delta;  // |kappa - kappa at half resolution|
  int resolution = 0;

  /// Second divided differences (times 2), the discrete convexity check.
  std::vector<double> second_differences() const;
};

/// Chebyshev-Lobatto points on [-s_max, s_max], ascending; count odd keeps 0
/// on the grid.
std::vector<double> chebyshev_s_grid(double s_max, int count);

/// Evaluates log kappa(s) over s_grid at the given grid resolution and again
/// at half resolution for the refinement estimate.
PressureCurve pressure_curve(const MatrixLaw& law, const std::vector<double>& s_grid,
                             const ProjGrid& grid, double tol = 1e-12);

/// First five derivatives of the pressure at 0 from a degree-6 least-squares
/// fit, plus the fitted polynomial itself so callers can evaluate Lambda,
/// Lambda', Lambda'' away from 0.
struct CumulantSet {
  std::array<double, 5> gamma{};  // gamma[k-1] = Lambda^(k)(0)
  double fit_residual = 0.0;      // max |fit - data| over the grid
  double s_max = 0.0;
  std::array<double, 7> coeff{};  // fit coefficients in u = s / s_max

  double lambda() const { return gamma[0]; }
  double sigma2() const { return gamma[1]; }

  double pressure(double s) const;
  double pressure_d1(double s) const;
  double pressure_d2(double s) const;
  /// sigma_t^2 = Lambda''(t), the tilted variance.
  double sigma_t2(double t) const { return pressure_d2(t); }
};

/// Requires an s-grid symmetric about 0 with at least 13 points.
CumulantSet cumulants_from_pressure(const PressureCurve& curve);

/// The three stored coefficients of the series correcting the normal tail:
///   zeta(t) = c0 + c1 t + c2 t^2
///   c0 = g3 / (6 g2^{3/2})
///   c1 = (g4 g2 - 3 g3^2) / (24 g2^3)
///   c2 = (g5 g2^2 - 10 g4 g3 g2 + 15 g3^3) / (120 g2^{9/2})
struct CramerSeries {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  double radius_hint = 0.0;
};

CramerSeries cramer_series(const CumulantSet& cum);

/// Refuses |t| beyond the radius hint rather than extrapolating.
double cramer_zeta(const CramerSeries& z, double t);

struct LegendreResult {
  double value = 0.0;
  double s_arg = 0.0;
  /// q fell outside the secant-derivative range of the curve; the value is
  /// the boundary evaluation.
  bool boundary = false;
};

/// Lambda*(q) = max over the grid (with local quadratic refinement) of
/// s q - Lambda(s).
LegendreResult legendre_transform(const PressureCurve& curve, double q);

}  // namespace matprod
