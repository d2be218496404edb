#include "matprod/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matprod/errors.hpp"

namespace matprod {

std::vector<double> PressureCurve::second_differences() const {
  std::vector<double> out;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    double h0 = s[i] - s[i - 1];
    double h1 = s[i + 1] - s[i];
    double d0 = (lambda[i] - lambda[i - 1]) / h0;
    double d1 = (lambda[i + 1] - lambda[i]) / h1;
    out.push_back(2.0 * (d1 - d0) / (h0 + h1));
  }
  return out;
}

std::vector<double> chebyshev_s_grid(double s_max, int count) {
  if (!(s_max > 0.0) || count < 3) throw PreconditionError("chebyshev_s_grid: bad arguments");
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    s[static_cast<std::size_t>(j)] = -s_max * std::cos(M_PI * j / (count - 1));
  }
  // Symmetrize away rounding: pair j with count-1-j.
  for (int j = 0; j < count / 2; ++j) {
    double v = 0.5 * (s[static_cast<std::size_t>(count - 1 - j)] - s[static_cast<std::size_t>(j)]);
    s[static_cast<std::size_t>(j)] = -v;
    s[static_cast<std::size_t>(count - 1 - j)] = v;
  }
  if (count % 2 == 1) s[static_cast<std::size_t>(count / 2)] = 0.0;
  return s;
}

PressureCurve pressure_curve(const MatrixLaw& law, const std::vector<double>& s_grid,
                             const ProjGrid& grid, double tol) {
  if (s_grid.empty()) throw PreconditionError("pressure_curve: empty s grid");
  PressureCurve out;
  out.s = s_grid;
  out.resolution = grid.dim() == 2 ? grid.size() : 0;

  int coarse_res = grid.dim() == 2 ? std::max(8, (grid.size() + 1) / 2) : 0;
  ProjGrid coarse = grid.dim() == 2 ? build_grid(2, coarse_res) : ProjGrid{};

  for (double s : s_grid) {
    SpectralTriple t = leading_triple(assemble_transfer(law, s, grid), tol);
    out.kappa.push_back(t.kappa);
    out.lambda.push_back(std::log(t.kappa));
    out.residual.push_back(t.residual);
    if (grid.dim() == 2) {
      SpectralTriple tc = leading_triple(assemble_transfer(law, s, coarse), tol);
      out.refine_delta.push_back(std::abs(t.kappa - tc.kappa));
    } else {
      out.refine_delta.push_back(std::nan(""));
    }
  }
  return out;
}

namespace {

// Least squares via Householder QR on the m x n design matrix (column-major).
std::vector<double> solve_least_squares(std::vector<double> a, int m, int n,
                                        std::vector<double> b) {
  for (int k = 0; k < n; ++k) {
    double norm = 0.0;
    for (int i = k; i < m; ++i) norm += a[static_cast<std::size_t>(k * m + i)] * a[static_cast<std::size_t>(k * m + i)];
    norm = std::sqrt(norm);
    if (norm < 1e-13) throw NumericError("least squares: ill-conditioned design");
    double akk = a[static_cast<std::size_t>(k * m + k)];
    double alpha = akk > 0.0 ? -norm : norm;
    double vkk = akk - alpha;
    std::vector<double> v(static_cast<std::size_t>(m - k), 0.0);
    v[0] = vkk;
    for (int i = k + 1; i < m; ++i) v[static_cast<std::size_t>(i - k)] = a[static_cast<std::size_t>(k * m + i)];
    double vtv = 0.0;
    for (double x : v) vtv += x * x;
    if (vtv < 1e-300) continue;
    for (int j = k; j < n; ++j) {
      double dot = 0.0;
      for (int i = k; i < m; ++i) dot += v[static_cast<std::size_t>(i - k)] * a[static_cast<std::size_t>(j * m + i)];
      double f = 2.0 * dot / vtv;
      for (int i = k; i < m; ++i) a[static_cast<std::size_t>(j * m + i)] -= f * v[static_cast<std::size_t>(i - k)];
    }
    double dot = 0.0;
    for (int i = k; i < m; ++i) dot += v[static_cast<std::size_t>(i - k)] * b[static_cast<std::size_t>(i)];
    double f = 2.0 * dot / vtv;
    for (int i = k; i < m; ++i) b[static_cast<std::size_t>(i)] -= f * v[static_cast<std::size_t>(i - k)];
  }
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= a[static_cast<std::size_t>(j * m + i)] * x[static_cast<std::size_t>(j)];
    double diag = a[static_cast<std::size_t>(i * m + i)];
    if (std::abs(diag) < 1e-13) throw NumericError("least squares: ill-conditioned design");
    x[static_cast<std::size_t>(i)] = s / diag;
  }
  return x;
}

}  // namespace

CumulantSet cumulants_from_pressure(const PressureCurve& curve) {
  const int m = static_cast<int>(curve.s.size());
  if (m < 13) throw PreconditionError("cumulants_from_pressure: need >= 13 s points");
  double s_max = 0.0;
  for (double s : curve.s) s_max = std::max(s_max, std::abs(s));
  if (!(s_max > 0.0)) throw PreconditionError("cumulants_from_pressure: degenerate s grid");
  for (int j = 0; j < m; ++j) {
    double mirror = -curve.s[static_cast<std::size_t>(j)];
    bool found = false;
    for (int i = 0; i < m; ++i) {
      if (std::abs(curve.s[static_cast<std::size_t>(i)] - mirror) <= 1e-9 * s_max) {
        found = true;
        break;
      }
    }
    if (!found) throw PreconditionError("cumulants_from_pressure: s grid must be symmetric about 0");
  }

  constexpr int kDeg = 7;  // degree 6 => 7 coefficients
  std::vector<double> design(static_cast<std::size_t>(kDeg) * m);
  for (int i = 0; i < m; ++i) {
    double u = curve.s[static_cast<std::size_t>(i)] / s_max;
    double p = 1.0;
    for (int k = 0; k < kDeg; ++k) {
      design[static_cast<std::size_t>(k * m + i)] = p;
      p *= u;
    }
  }
  std::vector<double> coeff = solve_least_squares(design, m, kDeg, curve.lambda);

  CumulantSet cum;
  cum.s_max = s_max;
  for (int k = 0; k < kDeg; ++k) cum.coeff[static_cast<std::size_t>(k)] = coeff[static_cast<std::size_t>(k)];

  double factorial = 1.0;
  double scale = 1.0;
  for (int k = 1; k <= 5; ++k) {
    factorial *= k;
    scale *= s_max;
    cum.gamma[static_cast<std::size_t>(k - 1)] = factorial * coeff[static_cast<std::size_t>(k)] / scale;
  }

  double resid = 0.0;
  for (int i = 0; i < m; ++i) {
    resid = std::max(resid, std::abs(cum.pressure(curve.s[static_cast<std::size_t>(i)]) -
                                     curve.lambda[static_cast<std::size_t>(i)]));
  }
  cum.fit_residual = resid;
  return cum;
}

double CumulantSet::pressure(double s) const {
  double u = s / s_max, p = 1.0, acc = 0.0;
  for (int k = 0; k < 7; ++k) {
    acc += coeff[static_cast<std::size_t>(k)] * p;
    p *= u;
  }
  return acc;
}

double CumulantSet::pressure_d1(double s) const {
  double u = s / s_max, p = 1.0, acc = 0.0;
  for (int k = 1; k < 7; ++k) {
    acc += k * coeff[static_cast<std::size_t>(k)] * p;
    p *= u;
  }
  return acc / s_max;
}

double CumulantSet::pressure_d2(double s) const {
  double u = s / s_max, p = 1.0, acc = 0.0;
  for (int k = 2; k < 7; ++k) {
    acc += k * (k - 1) * coeff[static_cast<std::size_t>(k)] * p;
    p *= u;
  }
  return acc / (s_max * s_max);
}

CramerSeries cramer_series(const CumulantSet& cum) {
  double g2 = cum.gamma[1], g3 = cum.gamma[2], g4 = cum.gamma[3], g5 = cum.gamma[4];
  if (!(g2 > 1e-12)) throw NumericError("cramer_series: sigma^2 <= 0 (degenerate law)");
  CramerSeries z;
  z.c0 = g3 / (6.0 * std::pow(g2, 1.5));
  z.c1 = (g4 * g2 - 3.0 * g3 * g3) / (24.0 * std::pow(g2, 3.0));
  z.c2 = (g5 * g2 * g2 - 10.0 * g4 * g3 * g2 + 15.0 * g3 * g3 * g3) /
         (120.0 * std::pow(g2, 4.5));
  z.radius_hint = cum.s_max / 2.0;
  return z;
}

double cramer_zeta(const CramerSeries& z, double t) {
  if (std::abs(t) > z.radius_hint) {
    throw PreconditionError("cramer_zeta: |t| beyond the radius hint");
  }
  return z.c0 + t * (z.c1 + t * z.c2);
}

LegendreResult legendre_transform(const PressureCurve& curve, double q) {
  const int m = static_cast<int>(curve.s.size());
  if (m < 3) throw PreconditionError("legendre_transform: need >= 3 s points");

  double d_lo = (curve.lambda[1] - curve.lambda[0]) / (curve.s[1] - curve.s[0]);
  double d_hi = (curve.lambda[static_cast<std::size_t>(m - 1)] - curve.lambda[static_cast<std::size_t>(m - 2)]) /
                (curve.s[static_cast<std::size_t>(m - 1)] - curve.s[static_cast<std::size_t>(m - 2)]);
  double tol_q = 1e-6 * std::max(1.0, std::abs(q));

  LegendreResult res;
  res.boundary = q < d_lo - tol_q || q > d_hi + tol_q;

  int best = 0;
  double best_v = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    double v = curve.s[static_cast<std::size_t>(i)] * q - curve.lambda[static_cast<std::size_t>(i)];
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  res.value = best_v;
  res.s_arg = curve.s[static_cast<std::size_t>(best)];

  if (best > 0 && best < m - 1) {
    // Quadratic refinement through the three bracketing points.
    double x0 = curve.s[static_cast<std::size_t>(best - 1)], x1 = curve.s[static_cast<std::size_t>(best)],
           x2 = curve.s[static_cast<std::size_t>(best + 1)];
    double y0 = x0 * q - curve.lambda[static_cast<std::size_t>(best - 1)];
    double y1 = best_v;
    double y2 = x2 * q - curve.lambda[static_cast<std::size_t>(best + 1)];
    double d1 = (y1 - y0) / (x1 - x0);
    double d2 = (y2 - y1) / (x2 - x1);
    double c2 = (d2 - d1) / (x2 - x0);
    if (c2 < -1e-14) {
      double xv = 0.5 * (x0 + x1 - d1 / c2);
      if (xv > x0 && xv < x2) {
        double yv = y0 + d1 * (xv - x0) + c2 * (xv - x0) * (xv - x1);
        if (yv > res.value) {
          res.value = yv;
          res.s_arg = xv;
        }
      }
    }
  }
  return res;
}

}  // namespace matprod
