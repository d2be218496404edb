#include "matprod/geometry.hpp"

#include <cmath>
#include <limits>

namespace matprod {

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_nonneg(const std::vector<double>& v) {
  if (v.size() < 2) throw DimensionError("ProjPoint needs dim >= 2");
  for (double x : v) {
    if (!(x >= 0.0)) throw PreconditionError("ProjPoint coordinates must be non-negative");
  }
}

}  // namespace

ProjPoint::ProjPoint(std::vector<double> coords) : c_(std::move(coords)) {
  check_nonneg(c_);
  double n = norm2(c_);
  if (std::abs(n - 1.0) > 1e-6) {
    throw PreconditionError("ProjPoint norm deviates from 1 by more than 1e-6");
  }
  if (std::abs(n - 1.0) > 1e-12) {
    for (double& x : c_) x /= n;
  }
}

ProjPoint ProjPoint::direction(std::vector<double> coords) {
  check_nonneg(coords);
  double n = norm2(coords);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw PreconditionError("direction(): vector must be non-zero and finite");
  }
  for (double& x : coords) x /= n;
  return ProjPoint(unchecked_t{}, std::move(coords));
}

ProjPoint ProjPoint::axis(int dim, int index) {
  if (index < 0 || index >= dim) throw PreconditionError("axis index out of range");
  std::vector<double> c(static_cast<std::size_t>(dim), 0.0);
  c[static_cast<std::size_t>(index)] = 1.0;
  return ProjPoint(unchecked_t{}, std::move(c));
}

ProjPoint ProjPoint::uniform(int dim) {
  if (dim < 2) throw DimensionError("ProjPoint needs dim >= 2");
  std::vector<double> c(static_cast<std::size_t>(dim),
                        1.0 / std::sqrt(static_cast<double>(dim)));
  return ProjPoint(unchecked_t{}, std::move(c));
}

double ProjPoint::min_coord() const {
  double m = std::numeric_limits<double>::infinity();
  for (double x : c_) m = x < m ? x : m;
  return m;
}

ProjPoint unit_unchecked(std::vector<double>&& c) {
  return ProjPoint(ProjPoint::unchecked_t{}, std::move(c));
}

double scalar_product(const ProjPoint& f, const ProjPoint& x) {
  if (f.dim() != x.dim()) throw DimensionError("scalar_product: dimension mismatch");
  double s = 0.0;
  for (int i = 0; i < f.dim(); ++i) s += f[i] * x[i];
  return s;
}

namespace {

// m(x,y) = min over {i : y_i > 0} of x_i / y_i.
double cone_gauge(const ProjPoint& x, const ProjPoint& y) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < x.dim(); ++i) {
    if (y[i] > 0.0) {
      double r = x[i] / y[i];
      m = r < m ? r : m;
    }
  }
  return m;
}

}  // namespace

double hilbert_distance(const ProjPoint& x, const ProjPoint& y) {
  if (x.dim() != y.dim()) throw DimensionError("hilbert_distance: dimension mismatch");
  double p = cone_gauge(x, y) * cone_gauge(y, x);
  return (1.0 - p) / (1.0 + p);
}

}  // namespace matprod
