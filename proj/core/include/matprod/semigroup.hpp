#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "matprod/geometry.hpp"
#include "matprod/matrix.hpp"

namespace matprod {

struct ProjectedAction {
  ProjPoint point;   // g . x = gx / |gx|
  double log_gain;   // log |gx|
};

/// Projective action of an allowable matrix. Throws DegenerateActionError when
/// |gx| = 0 (non-allowable g meeting a boundary direction).
ProjectedAction project_act(const PositiveMatrix& g, const ProjPoint& x);

struct MatrixFunctionals {
  double op_norm;    // sup_{|x|=1, x>=0} |gx|
  double iota;       // inf_{|x|=1, x>=0} |gx|
  double big_n;      // max(op_norm, 1/iota)
  bool degenerate;   // iota == 0 (non-allowable matrix)
};

/// Extremal gains of x -> |gx| over the positive part of the unit sphere.
/// d = 2 uses the closed form |gx|^2 = A + B cos 2t + C sin 2t on the quarter
/// circle; d > 2 uses the top singular value for the sup and multistart
/// projected gradient for the inf (numeric, 8 starts, tol 1e-10).
MatrixFunctionals matrix_functionals(const PositiveMatrix& g);

/// Operator norm alone (same evaluation rules as matrix_functionals).
double operator_norm(const PositiveMatrix& g);

struct PowerIterationResult {
  double rho;
  ProjPoint direction;
  int iterations;
  double bracket_lo;  // final Collatz-Wielandt bounds
  double bracket_hi;
};

/// Dominant eigenvalue and direction by power iteration with per-step
/// normalization. Convergence is declared on the Collatz-Wielandt bracket
/// width; reducible or periodic matrices that never tighten the bracket throw
/// ConvergenceError carrying the last bracket.
PowerIterationResult spectral_radius(const PositiveMatrix& g, double tol = 1e-12,
                                     int max_iter = 100000);

/// (min_i (gx)_i / x_i, max_i (gx)_i / x_i) for strictly positive x; the pair
/// always brackets the spectral radius.
std::pair<double, double> collatz_wielandt_bounds(const PositiveMatrix& g,
                                                  const ProjPoint& x);

struct ConditionReportMatrix {
  bool allowable;
  bool strictly_positive;
  /// max over columns j of (max_i g_ij) / (min_i g_ij); present only when all
  /// entries are strictly positive. Always >= 1.
  std::optional<double> column_constant;
};

/// Reports, never throws.
ConditionReportMatrix check_matrix_conditions(const PositiveMatrix& g);

/// Interior margin guaranteed by a column-ratio bound C: eps = 1/(C*d).
/// One-sided sufficient bound; not the inverse of the conversion below.
double epsilon_from_column_constant(double c, int dim);

/// Column-ratio bound implied by an interior margin eps in (0, sqrt(2)/2):
/// C = sqrt((1/eps^2 - 1)/(d - 1)). One-sided sufficient bound as well.
double column_constant_from_epsilon(double eps, int dim);

/// min over the supplied matrices of |gx| / ||g||, an upper estimate of
/// tau(x) = inf over the generated semigroup. x must be strictly positive.
double tau_over_set(const std::vector<PositiveMatrix>& gs, const ProjPoint& x);

}  // namespace matprod
