#include "matprod/transfer_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matprod/detail/kernels.hpp"
#include "matprod/errors.hpp"

namespace matprod {

void TransferOperator::apply(const std::vector<double>& v, std::vector<double>& out) const {
  out.assign(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double s = 0.0;
    for (const Entry& e : rows_[i]) s += e.value * v[static_cast<std::size_t>(e.col)];
    out[i] = s;
  }
}

void TransferOperator::apply_adjoint(const std::vector<double>& w,
                                     std::vector<double>& out) const {
  out.assign(rows_.size(), 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double wi = w[i];
    if (wi == 0.0) continue;
    for (const Entry& e : rows_[i]) out[static_cast<std::size_t>(e.col)] += wi * e.value;
  }
}

double TransferOperator::row_sum(int i) const {
  double s = 0.0;
  for (const Entry& e : rows_[static_cast<std::size_t>(i)]) s += e.value;
  return s;
}

TransferOperator assemble_transfer(const MatrixLaw& law, double s, const ProjGrid& grid) {
  if (law.dim() != grid.dim()) throw DimensionError("assemble_transfer: dimension mismatch");
  TransferOperator op;
  op.s_ = s;
  op.rows_.resize(static_cast<std::size_t>(grid.size()));

  const int d = law.dim();
  std::vector<double> y(static_cast<std::size_t>(d));
  for (int i = 0; i < grid.size(); ++i) {
    auto& row = op.rows_[static_cast<std::size_t>(i)];
    for (int a = 0; a < law.atom_count(); ++a) {
      const PositiveMatrix& g = law.atom(a);
      g.apply(grid.point(i).data(), y.data());
      double nrm = detail::vec_norm_flat(y.data(), d);
      if (!(nrm > 0.0)) {
        throw DegenerateActionError("assemble_transfer: degenerate action at a grid point");
      }
      double coef = law.weight(a) * std::pow(nrm, s);
      ProjGrid::Stencil st = grid.stencil_for(y.data());
      for (int k = 0; k < st.count; ++k) {
        int col = st.index[static_cast<std::size_t>(k)];
        double val = coef * st.weight[static_cast<std::size_t>(k)];
        auto it = std::find_if(row.begin(), row.end(),
                               [col](const TransferOperator::Entry& e) { return e.col == col; });
        if (it == row.end()) {
          row.push_back({col, val});
        } else {
          it->value += val;
        }
      }
    }
  }
  return op;
}

SpectralTriple leading_triple(const TransferOperator& op, double tol, int max_iter) {
  const int n = op.size();
  if (n == 0) throw PreconditionError("leading_triple: empty operator");

  SpectralTriple triple;
  triple.s = op.s();

  // Right vector: the Collatz-Wielandt bracket tightens because the iterate
  // stays strictly positive (every row carries stencil mass).
  std::vector<double> r(static_cast<std::size_t>(n), 1.0), rw(r.size());
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  double kappa = 0.0;
  int iters = 0;
  for (int it = 1;; ++it) {
    op.apply(r, rw);
    lo = std::numeric_limits<double>::infinity();
    hi = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      double ratio = rw[i] / r[i];
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      sum += rw[i];
    }
    if (!(sum > 0.0)) throw ConvergenceError("leading_triple: iterate collapsed", lo, hi);
    double scale = static_cast<double>(n) / sum;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rw[i] * scale;
    kappa = 0.5 * (lo + hi);
    iters = it;
    if (hi - lo <= tol * std::max(kappa, 1e-300)) break;
    if (it >= max_iter) {
      throw ConvergenceError("leading_triple: right iteration did not converge", lo, hi);
    }
  }
  triple.iterations = iters;

  // Adjoint vector: entries off the support of the eigenmeasure only decay
  // towards 0, so ratio brackets never close there. Converge on the residual
  // against the right iteration's kappa instead.
  std::vector<double> nu(static_cast<std::size_t>(n), 1.0 / static_cast<double>(n)),
      nw(nu.size());
  for (int jt = 1;; ++jt) {
    op.apply_adjoint(nu, nw);
    double sum = 0.0;
    for (double v : nw) sum += v;
    if (!(sum > 0.0)) {
      throw ConvergenceError("leading_triple: adjoint collapsed", 0.0, 0.0);
    }
    double err = 0.0;  // L1 change of the normalized iterate
    for (std::size_t i = 0; i < nu.size(); ++i) {
      double next = nw[i] / sum;
      err += std::abs(next - nu[i]);
      nu[i] = next;
    }
    if (err <= tol) break;
    if (jt >= max_iter) {
      throw ConvergenceError("leading_triple: adjoint iteration did not converge", err, err);
    }
  }

  // Rayleigh ratio from the converged pair, then the normalization pair
  // sum(nu) = 1 (already true) and <nu, r> = 1.
  op.apply(r, rw);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    num += nu[i] * rw[i];
    den += nu[i] * r[i];
  }
  kappa = num / den;
  triple.kappa = kappa;

  double resid = 0.0, rmax = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    resid = std::max(resid, std::abs(rw[i] - kappa * r[i]));
    rmax = std::max(rmax, r[i]);
  }
  triple.residual = resid / (kappa * rmax);

  for (double& v : r) v /= den;
  triple.r = std::move(r);
  triple.nu = std::move(nu);
  return triple;
}

}  // namespace matprod
