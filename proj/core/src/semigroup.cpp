#include "matprod/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matprod/detail/kernels.hpp"
#include "matprod/rng.hpp"

namespace matprod {

ProjectedAction project_act(const PositiveMatrix& g, const ProjPoint& x) {
  if (g.dim() != x.dim()) throw DimensionError("project_act: dimension mismatch");
  std::vector<double> y(static_cast<std::size_t>(g.dim()));
  g.apply(x.data(), y.data());
  double nrm = detail::vec_norm_flat(y.data(), g.dim());
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw DegenerateActionError("project_act: |gx| = 0, degenerate action");
  }
  for (double& v : y) v /= nrm;
  return ProjectedAction{unit_unchecked(std::move(y)), std::log(nrm)};
}

namespace {

// Projected gradient descent for min |gx|^2 over the unit sphere cut to the
// positive quadrant. Multistart because the constrained minimizer can sit on
// a face. Documented numeric for d > 2.
double iota_multistart(const PositiveMatrix& g) {
  const int d = g.dim();
  const int starts = 8;
  const int max_iter = 400;
  RandomStream rng(0x1057a5ull, 17);

  std::vector<double> x(static_cast<std::size_t>(d)), y(x.size()), grad(x.size()),
      trial(x.size());
  double best = std::numeric_limits<double>::infinity();

  auto value = [&](const std::vector<double>& p) {
    g.apply(p.data(), y.data());
    double s = 0.0;
    for (double v : y) s += v * v;
    return s;
  };
  auto project = [&](std::vector<double>& p) {
    double n = 0.0;
    for (double& v : p) {
      if (v < 0.0) v = 0.0;
      n += v * v;
    }
    n = std::sqrt(n);
    if (!(n > 0.0)) {
      p.assign(p.size(), 1.0 / std::sqrt(static_cast<double>(d)));
      return;
    }
    for (double& v : p) v /= n;
  };

  for (int s0 = 0; s0 < starts; ++s0) {
    if (s0 < std::min(starts, d)) {
      x.assign(x.size(), 0.02);
      x[static_cast<std::size_t>(s0)] = 1.0;
    } else {
      for (double& v : x) v = 0.05 + rng.next_unit();
    }
    project(x);
    double f = value(x);
    double step = 0.5;
    for (int it = 0; it < max_iter; ++it) {
      // grad of |gx|^2 is 2 g^T g x
      g.apply(x.data(), y.data());
      for (int j = 0; j < d; ++j) {
        double sum = 0.0;
        for (int i = 0; i < d; ++i) sum += g(i, j) * y[static_cast<std::size_t>(i)];
        grad[static_cast<std::size_t>(j)] = 2.0 * sum;
      }
      bool improved = false;
      while (step > 1e-14) {
        for (std::size_t j = 0; j < x.size(); ++j) trial[j] = x[j] - step * grad[j];
        project(trial);
        double ft = value(trial);
        if (ft < f - 1e-18) {
          x = trial;
          f = ft;
          improved = true;
          step *= 1.3;
          break;
        }
        step *= 0.5;
      }
      if (!improved && step <= 1e-14) break;
      if (improved && std::abs(step * detail::vec_norm_flat(grad.data(), d)) < 1e-12) break;
    }
    best = std::min(best, f);
  }
  return std::sqrt(best);
}

}  // namespace

MatrixFunctionals matrix_functionals(const PositiveMatrix& g) {
  MatrixFunctionals out{};
  if (g.dim() == 2) {
    out.op_norm = detail::op_norm_2x2(g.data());
    out.iota = detail::iota_2x2(g.data());
  } else {
    std::vector<double> scratch;
    out.op_norm = detail::op_norm_flat(g.data(), g.dim(), scratch);
    out.iota = iota_multistart(g);
  }
  if (!g.allowable()) {
    // A zero row or column forces the inf to 0 on some boundary direction.
    out.iota = 0.0;
  }
  out.degenerate = !(out.iota > 0.0);
  out.big_n = out.degenerate ? std::numeric_limits<double>::infinity()
                             : std::max(out.op_norm, 1.0 / out.iota);
  return out;
}

double operator_norm(const PositiveMatrix& g) {
  if (g.dim() == 2) return detail::op_norm_2x2(g.data());
  std::vector<double> scratch;
  return detail::op_norm_flat(g.data(), g.dim(), scratch);
}

PowerIterationResult spectral_radius(const PositiveMatrix& g, double tol, int max_iter) {
  const int d = g.dim();
  if (!g.allowable()) {
    throw PreconditionError("spectral_radius: matrix must be allowable");
  }
  std::vector<double> v(static_cast<std::size_t>(d),
                        1.0 / std::sqrt(static_cast<double>(d)));
  std::vector<double> w(v.size());
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= max_iter; ++it) {
    g.apply(v.data(), w.data());
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    for (int i = 0; i < d; ++i) {
      double r = w[static_cast<std::size_t>(i)] / v[static_cast<std::size_t>(i)];
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    double nrm = detail::vec_norm_flat(w.data(), d);
    if (!(nrm > 0.0)) {
      throw ConvergenceError("spectral_radius: iterate collapsed to zero", lo, hi);
    }
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = w[i] / nrm;
    double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol * std::max(mid, std::numeric_limits<double>::min())) {
      return PowerIterationResult{mid, unit_unchecked(std::move(v)), it, lo, hi};
    }
  }
  throw ConvergenceError("spectral_radius: no convergence (reducible or periodic?)", lo, hi);
}

std::pair<double, double> collatz_wielandt_bounds(const PositiveMatrix& g,
                                                  const ProjPoint& x) {
  if (g.dim() != x.dim()) throw DimensionError("collatz_wielandt_bounds: dimension mismatch");
  if (!(x.min_coord() > 0.0)) {
    throw PreconditionError("collatz_wielandt_bounds: x must be strictly positive");
  }
  std::vector<double> y(static_cast<std::size_t>(g.dim()));
  g.apply(x.data(), y.data());
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int i = 0; i < g.dim(); ++i) {
    double r = y[static_cast<std::size_t>(i)] / x[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return {lo, hi};
}

ConditionReportMatrix check_matrix_conditions(const PositiveMatrix& g) {
  ConditionReportMatrix rep{};
  rep.allowable = g.allowable();
  rep.strictly_positive = g.strictly_positive();
  if (rep.strictly_positive) {
    double worst = 1.0;
    for (int j = 0; j < g.dim(); ++j) {
      double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
      for (int i = 0; i < g.dim(); ++i) {
        mn = std::min(mn, g(i, j));
        mx = std::max(mx, g(i, j));
      }
      worst = std::max(worst, mx / mn);
    }
    rep.column_constant = worst;
  }
  return rep;
}

double epsilon_from_column_constant(double c, int dim) {
  if (!(c >= 1.0)) throw PreconditionError("epsilon_from_column_constant: need C >= 1");
  if (dim < 2) throw DimensionError("epsilon_from_column_constant: need dim >= 2");
  return 1.0 / (c * static_cast<double>(dim));
}

double column_constant_from_epsilon(double eps, int dim) {
  if (!(eps > 0.0) || !(eps < std::sqrt(2.0) / 2.0)) {
    throw PreconditionError("column_constant_from_epsilon: need 0 < eps < sqrt(2)/2");
  }
  if (dim < 2) throw DimensionError("column_constant_from_epsilon: need dim >= 2");
  return std::sqrt((1.0 / (eps * eps) - 1.0) / static_cast<double>(dim - 1));
}

double tau_over_set(const std::vector<PositiveMatrix>& gs, const ProjPoint& x) {
  if (gs.empty()) throw PreconditionError("tau_over_set: empty matrix set");
  if (!(x.min_coord() > 0.0)) {
    throw PreconditionError("tau_over_set: x must be strictly positive");
  }
  double tau = std::numeric_limits<double>::infinity();
  std::vector<double> y(static_cast<std::size_t>(x.dim()));
  for (const auto& g : gs) {
    if (g.dim() != x.dim()) throw DimensionError("tau_over_set: dimension mismatch");
    if (!g.allowable()) throw PreconditionError("tau_over_set: matrices must be allowable");
    g.apply(x.data(), y.data());
    double ratio = detail::vec_norm_flat(y.data(), x.dim()) / operator_norm(g);
    tau = std::min(tau, ratio);
  }
  return tau;
}

}  // namespace matprod
