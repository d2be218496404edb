#pragma once

#include <vector>

#include "matprod/errors.hpp"

namespace matprod {

/// Square matrix with non-negative entries, row-major. Allowability (a
/// strictly positive entry in every row and every column) is checked on
/// demand, not enforced at construction.
class PositiveMatrix {
 public:
  PositiveMatrix(int dim, std::vector<double> entries);

  static PositiveMatrix identity(int dim);
  /// The all-ones matrix J (rank one, J x proportional to (1,...,1)).
  static PositiveMatrix all_ones(int dim);

  int dim() const { return dim_; }
  double operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i * dim_ + j)];
  }
  const std::vector<double>& entries() const { return e_; }
  const double* data() const { return e_.data(); }

  bool allowable() const;
  bool strictly_positive() const;

  PositiveMatrix operator*(const PositiveMatrix& rhs) const;
  PositiveMatrix scaled(double a) const;

  /// y = g x for raw length-dim buffers.
  void apply(const double* x, double* y) const;

 private:
  int dim_;
  std::vector<double> e_;
};

}  // namespace matprod
