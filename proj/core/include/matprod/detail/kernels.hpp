#pragma once

// Flat-buffer kernels shared by the semigroup operations and the simulation
// hot loop. All take row-major matrices of size d*d.

#include <cmath>
#include <vector>

namespace matprod::detail {

inline void mat_apply_flat(const double* g, const double* x, double* y, int d) {
  if (d == 2) {
    y[0] = g[0] * x[0] + g[1] * x[1];
    y[1] = g[2] * x[0] + g[3] * x[1];
    return;
  }
  for (int i = 0; i < d; ++i) {
    double s = 0.0;
    const double* row = g + i * d;
    for (int j = 0; j < d; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

inline void mat_mul_flat(const double* a, const double* b, double* c, int d) {
  if (d == 2) {
    c[0] = a[0] * b[0] + a[1] * b[2];
    c[1] = a[0] * b[1] + a[1] * b[3];
    c[2] = a[2] * b[0] + a[3] * b[2];
    c[3] = a[2] * b[1] + a[3] * b[3];
    return;
  }
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) c[i * d + j] = 0.0;
    for (int k = 0; k < d; ++k) {
      double aik = a[i * d + k];
      if (aik == 0.0) continue;
      const double* brow = b + k * d;
      for (int j = 0; j < d; ++j) c[i * d + j] += aik * brow[j];
    }
  }
}

inline double vec_norm_flat(const double* x, int d) {
  if (d == 2) return std::sqrt(x[0] * x[0] + x[1] * x[1]);
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += x[i] * x[i];
  return std::sqrt(s);
}

/// Operator norm of a 2x2 non-negative matrix. On the quarter circle
/// |gx|^2 = A + B cos 2t + C sin 2t with C >= 0, so the sup is A + R.
inline double op_norm_2x2(const double* m) {
  double a = m[0], b = m[1], c = m[2], d = m[3];
  double sa = a * a + c * c;  // column sums of g^T g
  double sb = b * b + d * d;
  double A = 0.5 * (sa + sb);
  double B = 0.5 * (sa - sb);
  double C = a * b + c * d;
  return std::sqrt(A + std::hypot(B, C));
}

/// Smallest gain of a 2x2 non-negative matrix over the quarter circle: with
/// C >= 0 the interior extremum is the max, so the inf sits at an endpoint
/// and equals sqrt(A - |B|).
inline double iota_2x2(const double* m) {
  double a = m[0], b = m[1], c = m[2], d = m[3];
  double sa = a * a + c * c;
  double sb = b * b + d * d;
  double A = 0.5 * (sa + sb);
  double B = 0.5 * (sa - sb);
  double v = A - std::abs(B);
  return v > 0.0 ? std::sqrt(v) : 0.0;
}

/// Top singular value by power iteration on g^T g; exact operator norm for
/// any d (the dominant eigenvector of the non-negative matrix g^T g lies in
/// the positive quadrant, so the positive-quadrant sup is the global sup).
/// `work` must hold 3*d doubles; a warm start can be passed in work[0..d).
inline double op_norm_power(const double* g, int d, double* work,
                            bool warm_start = false, double tol = 1e-13,
                            int max_iter = 10000) {
  double* v = work;
  double* gv = work + d;
  double* w = work + 2 * d;
  if (!warm_start) {
    for (int i = 0; i < d; ++i) v[i] = 1.0;
  }
  double prev = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    // w = g^T (g v)
    mat_apply_flat(g, v, gv, d);
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += g[i * d + j] * gv[i];
      w[j] = s;
    }
    double nrm = vec_norm_flat(w, d);
    if (!(nrm > 0.0)) return 0.0;
    for (int i = 0; i < d; ++i) v[i] = w[i] / nrm;
    if (it > 0 && std::abs(nrm - prev) <= tol * nrm) {
      return std::sqrt(nrm);
    }
    prev = nrm;
  }
  return std::sqrt(prev);
}

inline double op_norm_flat(const double* g, int d, std::vector<double>& scratch,
                           bool warm_start = false) {
  if (d == 2) return op_norm_2x2(g);
  if (scratch.size() < static_cast<std::size_t>(3 * d)) scratch.resize(3 * d);
  return op_norm_power(g, d, scratch.data(), warm_start);
}

}  // namespace matprod::detail
