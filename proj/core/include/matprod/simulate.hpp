#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matprod/geometry.hpp"
#include "matprod/law.hpp"
#include "matprod/rng.hpp"

namespace matprod {

/// One realization of the product chain, all observables in log scale.
struct Trajectory {
  Trajectory(long n_, ProjPoint x0_, ProjPoint f_)
      : n(n_), x0(std::move(x0_)), f(std::move(f_)), x_final(x0) {}

  long n = 0;
  ProjPoint x0;
  ProjPoint f;
  double log_vec_norm = 0.0;   // log |G_n x0|
  double log_op_norm = 0.0;    // log ||G_n||
  double log_entry = 0.0;      // log <f, G_n x0>
  double log_spec_rad = 0.0;  // log rho(G_n)
  ProjPoint x_final;          // X_n = G_n . x0
  /// <f, G_n x0> underflowed to zero; log_entry is -inf and downstream
  /// statistics exclude the row.
  bool entry_underflow = false;
  /// Width of the Collatz-Wielandt bracket when power iteration on the
  /// renormalized product did not converge and the midpoint was used.
  double spec_rad_bracket = 0.0;
  std::vector<double> per_step_log_gains;  // log |g_k X_{k-1}|, when requested
};

/// Which observables the stepping kernel maintains. The projective chain and
/// log |G_n x| are always tracked; the renormalized-product chain (operator
/// norm, spectral radius) can be switched off for tail-sampling workloads.
struct ObservableSet {
  bool op_norm = true;
  bool entry = true;
  bool spec_rad = true;
};

struct SimConfig {
  MatrixLaw law;
  long n = 100;
  long replicates = 1;
  ProjPoint x0;
  ProjPoint f;
  std::uint64_t seed = 0;
  bool keep_gains = false;
  int threads = 1;
  ObservableSet observables{};

  explicit SimConfig(MatrixLaw law_)
      : law(std::move(law_)),
        x0(ProjPoint::uniform(law.dim())),
        f(ProjPoint::uniform(law.dim())) {}
};

/// Simulates G_n = g_n ... g_1 keeping the running product renormalized by
/// its operator norm each step, so entries never overflow; accumulated log
/// norms carry the scale.
Trajectory run_trajectory(const MatrixLaw& law, const ProjPoint& x0, const ProjPoint& f,
                          long n, RandomStream& rng, bool keep_gains = false,
                          const ObservableSet& obs = {});

/// Column-oriented batch output, replicate-indexed. Replicate i always uses
/// stream (seed, i), so results are byte-stable across thread counts.
/// Per-step gains are a single-trajectory feature (run_trajectory with
/// keep_gains); batches keep the end-of-run observables only.
struct BatchResult {
  long n = 0;
  int dim = 0;
  std::vector<double> log_vec_norm;
  std::vector<double> log_op_norm;
  std::vector<double> log_entry;
  std::vector<double> log_spec_rad;
  std::vector<double> x_final;  // replicates * dim, row-major
  std::vector<std::uint8_t> entry_underflow;
  long underflow_count = 0;
  long error_count = 0;
  std::string first_error;

  long replicates() const { return static_cast<long>(log_vec_norm.size()); }
  ProjPoint x_final_point(long i) const;
};

BatchResult run_batch(const SimConfig& cfg);

/// Draws from the projective chain: uniform interior start, burn_in discarded
/// steps, then `count` states spaced by `stride` steps.
std::vector<ProjPoint> stationary_sample(const MatrixLaw& law, int burn_in, int count,
                                         RandomStream& rng, int stride = 1);

}  // namespace matprod
