#pragma once

#include <vector>

#include "matprod/grid.hpp"
#include "matprod/law.hpp"

namespace matprod {

/// Discretization of the weighted Markov operator
///   (P_s phi)(x) = sum_atoms weight * |g x|^s * phi(g . x)
/// on a ProjGrid: row x_i collects |g x_i|^s times the interpolation stencil
/// of g . x_i. Rows are sparse (atoms * stencil entries each).
class TransferOperator {
 public:
  struct Entry {
    int col;
    double value;
  };

  int size() const { return static_cast<int>(rows_.size()); }
  double s() const { return s_; }
  const std::vector<std::vector<Entry>>& rows() const { return rows_; }

  /// out = P v (values of P applied to the grid function v).
  void apply(const std::vector<double>& v, std::vector<double>& out) const;
  /// out = P^T w (adjoint action on point masses).
  void apply_adjoint(const std::vector<double>& w, std::vector<double>& out) const;

  double row_sum(int i) const;

  friend TransferOperator assemble_transfer(const MatrixLaw& law, double s,
                                            const ProjGrid& grid);

 private:
  double s_ = 0.0;
  std::vector<std::vector<Entry>> rows_;
};

TransferOperator assemble_transfer(const MatrixLaw& law, double s, const ProjGrid& grid);

/// Dominant eigen-data of a discretized transfer operator: eigenvalue kappa,
/// strictly positive right eigenfunction r on the grid, and probability
/// weights nu with nu P = kappa nu. Normalized so that sum(nu) = 1 and
/// <nu, r> = 1.
struct SpectralTriple {
  double s = 0.0;
  double kappa = 0.0;
  std::vector<double> r;
  std::vector<double> nu;
  double residual = 0.0;  // ||P r - kappa r||_inf / kappa
  int iterations = 0;
};

/// Power iteration on the operator and its adjoint; kappa from the Rayleigh
/// ratio <nu, P r> / <nu, r>. Throws ConvergenceError with the last bracket
/// if the Collatz-Wielandt width never tightens.
SpectralTriple leading_triple(const TransferOperator& op, double tol = 1e-12,
                              int max_iter = 50000);

}  // namespace matprod
