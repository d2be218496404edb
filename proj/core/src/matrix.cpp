#include "matprod/matrix.hpp"

#include <cmath>

namespace matprod {

PositiveMatrix::PositiveMatrix(int dim, std::vector<double> entries)
    : dim_(dim), e_(std::move(entries)) {
  if (dim_ < 2) throw DimensionError("PositiveMatrix needs dim >= 2");
  if (e_.size() != static_cast<std::size_t>(dim_) * static_cast<std::size_t>(dim_)) {
    throw DimensionError("PositiveMatrix: entry count != dim*dim");
  }
  for (double x : e_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw PreconditionError("PositiveMatrix entries must be finite and >= 0");
    }
  }
}

PositiveMatrix PositiveMatrix::identity(int dim) {
  std::vector<double> e(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) e[static_cast<std::size_t>(i * dim + i)] = 1.0;
  return PositiveMatrix(dim, std::move(e));
}

PositiveMatrix PositiveMatrix::all_ones(int dim) {
  return PositiveMatrix(dim, std::vector<double>(static_cast<std::size_t>(dim) * dim, 1.0));
}

bool PositiveMatrix::allowable() const {
  for (int i = 0; i < dim_; ++i) {
    bool row = false, col = false;
    for (int j = 0; j < dim_; ++j) {
      row = row || (*this)(i, j) > 0.0;
      col = col || (*this)(j, i) > 0.0;
    }
    if (!row || !col) return false;
  }
  return true;
}

bool PositiveMatrix::strictly_positive() const {
  for (double x : e_) {
    if (!(x > 0.0)) return false;
  }
  return true;
}

PositiveMatrix PositiveMatrix::operator*(const PositiveMatrix& rhs) const {
  if (dim_ != rhs.dim_) throw DimensionError("matrix product: dimension mismatch");
  std::vector<double> out(e_.size(), 0.0);
  for (int i = 0; i < dim_; ++i) {
    for (int k = 0; k < dim_; ++k) {
      double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (int j = 0; j < dim_; ++j) {
        out[static_cast<std::size_t>(i * dim_ + j)] += a * rhs(k, j);
      }
    }
  }
  return PositiveMatrix(dim_, std::move(out));
}

PositiveMatrix PositiveMatrix::scaled(double a) const {
  if (!(a >= 0.0)) throw PreconditionError("scaled(): factor must be >= 0");
  std::vector<double> out(e_);
  for (double& x : out) x *= a;
  return PositiveMatrix(dim_, std::move(out));
}

void PositiveMatrix::apply(const double* x, double* y) const {
  for (int i = 0; i < dim_; ++i) {
    double s = 0.0;
    const double* row = e_.data() + static_cast<std::size_t>(i) * dim_;
    for (int j = 0; j < dim_; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

}  // namespace matprod
