#include "matprod/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "matprod/errors.hpp"

namespace matprod {

namespace {

void compositions(int dim, int total, std::vector<int>& head,
                  std::vector<std::vector<int>>& out) {
  if (dim == 1) {
    head.push_back(total);
    out.push_back(head);
    head.pop_back();
    return;
  }
  for (int v = 0; v <= total; ++v) {
    head.push_back(v);
    compositions(dim - 1, total - v, head, out);
    head.pop_back();
  }
}

}  // namespace

ProjGrid build_grid(int dim, int resolution) {
  if (dim < 2) throw DimensionError("build_grid: dim >= 2");
  if (resolution < 8) throw PreconditionError("build_grid: resolution >= 8");

  ProjGrid g;
  g.dim_ = dim;
  if (dim == 2) {
    int n = resolution;
    double h = (M_PI / 2.0) / (n - 1);
    g.points_.reserve(static_cast<std::size_t>(n));
    g.angles_.reserve(static_cast<std::size_t>(n));
    g.weights_.assign(static_cast<std::size_t>(n), 1.0 / (n - 1));
    g.weights_.front() *= 0.5;
    g.weights_.back() *= 0.5;
    for (int i = 0; i < n; ++i) {
      double theta = i == n - 1 ? M_PI / 2.0 : i * h;
      g.angles_.push_back(theta);
      g.points_.push_back(unit_unchecked({std::cos(theta), std::sin(theta)}));
    }
    // cos(pi/2) is not exactly 0 in floating point; pin the endpoints.
    g.points_.front() = ProjPoint::axis(2, 0);
    g.points_.back() = ProjPoint::axis(2, 1);
  } else {
    g.lattice_m_ = resolution;
    std::vector<std::vector<int>> comps;
    std::vector<int> head;
    compositions(dim, resolution, head, comps);
    g.points_.reserve(comps.size());
    for (std::size_t k = 0; k < comps.size(); ++k) {
      g.lattice_index_[comps[k]] = static_cast<int>(k);
      std::vector<double> c(static_cast<std::size_t>(dim));
      for (int i = 0; i < dim; ++i) c[static_cast<std::size_t>(i)] = comps[k][static_cast<std::size_t>(i)];
      g.points_.push_back(ProjPoint::direction(std::move(c)));
    }
    g.weights_.assign(g.points_.size(), 1.0 / static_cast<double>(g.points_.size()));
  }
  return g;
}

ProjGrid::Stencil ProjGrid::stencil_for(const ProjPoint& y) const {
  if (y.dim() != dim_) throw DimensionError("stencil_for: dimension mismatch");
  return stencil_for(y.data());
}

ProjGrid::Stencil ProjGrid::stencil_for(const double* y) const {
  Stencil st;
  if (dim_ == 2) {
    int n = size();
    double h = (M_PI / 2.0) / (n - 1);
    double theta = std::atan2(y[1], y[0]);
    theta = std::clamp(theta, 0.0, M_PI / 2.0);
    double pos = theta / h;
    // Snap to the node when within rounding noise of it, so grid points map
    // to themselves exactly.
    double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-9) pos = nearest;
    int i0 = static_cast<int>(pos);
    if (i0 >= n - 1) {
      st.index[0] = n - 1;
      st.weight[0] = 1.0;
      st.count = 1;
      return st;
    }
    double frac = pos - i0;
    if (frac == 0.0) {
      st.index[0] = i0;
      st.weight[0] = 1.0;
      st.count = 1;
      return st;
    }
    st.index[0] = i0;
    st.weight[0] = 1.0 - frac;
    st.index[1] = i0 + 1;
    st.weight[1] = frac;
    st.count = 2;
    return st;
  }

  // Simplex interpolation in ascending partial-sum coordinates
  // Q_i = m (t_1 + ... + t_i), i = 1..d-1. The Kuhn (sorted-fraction) walk on
  // these coordinates preserves the ascending order -- when two partial sums
  // share a floor the later one has the larger fraction and is stepped first
  // -- so every produced vertex is a valid lattice composition.
  const int d = dim_;
  const int m = lattice_m_;
  double sum = 0.0;
  for (int i = 0; i < d; ++i) sum += y[i];
  if (!(sum > 0.0)) throw PreconditionError("stencil_for: zero direction");

  const int nq = d - 1;
  std::vector<int> base(static_cast<std::size_t>(nq));
  std::vector<std::pair<double, int>> fracs;
  fracs.reserve(static_cast<std::size_t>(nq));
  double acc = 0.0;
  for (int i = 0; i < nq; ++i) {
    acc += y[i] / sum;
    double q = std::clamp(m * acc, 0.0, static_cast<double>(m));
    double nearest = std::round(q);
    if (std::abs(q - nearest) < 1e-9) q = nearest;
    int b = static_cast<int>(std::floor(q));
    if (b >= m) b = m;
    base[static_cast<std::size_t>(i)] = b;
    double f = q - b;
    if (f > 0.0) fracs.emplace_back(f, i);
  }
  std::sort(fracs.begin(), fracs.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  });

  auto emit = [&](const std::vector<int>& partial, double w) {
    if (w <= 0.0) return;
    std::vector<int> comp(static_cast<std::size_t>(d));
    int prev_sum = 0;
    for (int i = 0; i < nq; ++i) {
      comp[static_cast<std::size_t>(i)] = partial[static_cast<std::size_t>(i)] - prev_sum;
      prev_sum = partial[static_cast<std::size_t>(i)];
    }
    comp[static_cast<std::size_t>(d - 1)] = m - prev_sum;
    auto it = lattice_index_.find(comp);
    if (it == lattice_index_.end()) throw NumericError("stencil_for: lattice point missing");
    st.index[static_cast<std::size_t>(st.count)] = it->second;
    st.weight[static_cast<std::size_t>(st.count)] = w;
    ++st.count;
  };

  std::vector<int> vertex = base;
  double prev = 1.0;
  for (const auto& [f, idx] : fracs) {
    emit(vertex, prev - f);
    vertex[static_cast<std::size_t>(idx)] += 1;
    prev = f;
  }
  emit(vertex, prev);

  // Normalize away accumulated rounding so stencils stay stochastic.
  double total = 0.0;
  for (int k = 0; k < st.count; ++k) total += st.weight[static_cast<std::size_t>(k)];
  for (int k = 0; k < st.count; ++k) st.weight[static_cast<std::size_t>(k)] /= total;
  return st;
}

double ProjGrid::interpolate(const std::vector<double>& values, const ProjPoint& x) const {
  if (values.size() != points_.size()) {
    throw DimensionError("interpolate: values size != grid size");
  }
  Stencil st = stencil_for(x);
  double s = 0.0;
  for (int k = 0; k < st.count; ++k) {
    s += st.weight[static_cast<std::size_t>(k)] * values[static_cast<std::size_t>(st.index[static_cast<std::size_t>(k)])];
  }
  return s;
}

}  // namespace matprod
