#pragma once

#include <vector>

#include "matprod/errors.hpp"

namespace matprod {

/// A direction in the closed positive quadrant: non-negative coordinates with
/// Euclidean norm 1. Construction renormalizes inputs whose norm is within
/// 1e-6 of 1 and rejects anything further off; use direction() to project an
/// arbitrary non-negative vector.
class ProjPoint {
 public:
  explicit ProjPoint(std::vector<double> coords);

  /// Normalizes an arbitrary non-negative, non-zero vector.
  static ProjPoint direction(std::vector<double> coords);
  static ProjPoint axis(int dim, int index);
  /// The uniform direction (1, ..., 1)/sqrt(d).
  static ProjPoint uniform(int dim);

  int dim() const { return static_cast<int>(c_.size()); }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& coords() const { return c_; }
  const double* data() const { return c_.data(); }

  double min_coord() const;
  bool strictly_positive() const { return min_coord() > 0.0; }

 private:
  struct unchecked_t {};
  ProjPoint(unchecked_t, std::vector<double>&& c) : c_(std::move(c)) {}
  friend ProjPoint unit_unchecked(std::vector<double>&& c);

  std::vector<double> c_;
};

/// Internal: wraps coordinates already known to be unit-norm and non-negative.
ProjPoint unit_unchecked(std::vector<double>&& c);

double scalar_product(const ProjPoint& f, const ProjPoint& x);

/// Cross-ratio metric d(x,y) = (1 - m(x,y)m(y,x)) / (1 + m(x,y)m(y,x)) with
/// m(x,y) = sup{a > 0 : a*y_i <= x_i for all i}. Values in [0,1]; positive
/// matrices act as contractions for it. Indices where both coordinates vanish
/// are skipped; m = 0 as soon as some y_i > 0 meets x_i = 0.
double hilbert_distance(const ProjPoint& x, const ProjPoint& y);

}  // namespace matprod
