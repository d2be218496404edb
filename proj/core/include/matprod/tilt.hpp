#pragma once

#include <cstdint>
#include <vector>

#include "matprod/pressure.hpp"
#include "matprod/simulate.hpp"

namespace matprod {

/// Exponentially tilted one-step distribution at a state x: atom i gets
/// probability proportional to weight_i * |g_i x|^s * r_s(g_i . x) /
/// (kappa(s) * r_s(x)). The raw masses integrate to 1 only up to the grid
/// discretization of r_s; the defect is recorded and the importance ratios
/// below absorb it, so reweighted expectations stay exactly unbiased.
struct TiltedStepDistribution {
  std::vector<double> prob;   // renormalized, sums to 1
  std::vector<double> ratio;  // original weight / prob, the per-step IS factor
  double defect = 0.0;        // raw mass - 1
};

TiltedStepDistribution tilt_step_distribution(const MatrixLaw& law,
                                              const SpectralTriple& triple,
                                              const ProjGrid& grid, const ProjPoint& x);

struct TiltedRun {
  explicit TiltedRun(Trajectory t) : trajectory(std::move(t)) {}

  Trajectory trajectory;
  double weight = 0.0;      // importance weight, E_tilted[weight * phi] = E[phi]
  double log_weight = 0.0;  // accumulated in log scale
};

/// Samples every step from the tilted distribution at the current state.
TiltedRun run_tilted_trajectory(const MatrixLaw& law, const SpectralTriple& triple,
                                const ProjGrid& grid, const ProjPoint& x0, long n,
                                RandomStream& rng, const ObservableSet& obs = {});

enum class TailSide { upper, lower };

struct TailEstimate {
  double probability = 0.0;
  double std_error = 0.0;
  long n = 0;
  double threshold = 0.0;
  double s_used = 0.0;
  double y = 0.0;
  double mean_weight = 0.0;
  long replicates = 0;
  long hit_count = 0;  // replicates with a non-zero indicator contribution
  std::uint64_t seed = 0;

  /// 3-sigma interval clamped into [0, 1].
  double ci_lo() const;
  double ci_hi() const;
};

/// Tail weight of a value against a threshold: survival estimates that are
/// compared with continuous predictions average the two one-sided indicators
/// delta apart, so laws whose cocycle lives on a lattice grade the atom at
/// the threshold with half mass instead of flipping a whole lattice cell.
double tail_indicator(double value, double threshold, double delta, TailSide side);

/// Plain Monte Carlo estimate of P(log|G_n x| >=/<= threshold) from batch
/// samples, using the smoothed indicator above.
TailEstimate plain_tail_estimate(const std::vector<double>& samples, double threshold,
                                 double delta, TailSide side);

/// Exact-tilt importance sampling estimate of the same tail probability.
/// Runs `replicates` tilted trajectories at tilt parameter s.
TailEstimate tilted_tail_estimate(const MatrixLaw& law, const SpectralTriple& triple,
                                  const ProjGrid& grid, const ProjPoint& x0, long n,
                                  double threshold, double delta, TailSide side,
                                  long replicates, std::uint64_t seed, int threads = 1);

/// Saddle-point driver: solves Lambda'(s*) = lambda + sigma y / sqrt(n) by
/// bisection on the fitted pressure derivative, builds the spectral triple at
/// s*, and estimates P(log|G_n x| - n lambda >= sigma sqrt(n) y). Refuses
/// with a range report when s* falls outside the fitted s range.
TailEstimate estimate_tail_probability(const MatrixLaw& law, const ProjGrid& grid,
                                       const CumulantSet& cum, const ProjPoint& x0,
                                       long n, double y, long replicates,
                                       std::uint64_t seed, int threads = 1,
                                       TailSide side = TailSide::upper,
                                       double smoothing = 1e-3);

/// Bisection solve of Lambda'(s) = q on [-s_max, s_max].
double solve_tilt_parameter(const CumulantSet& cum, double q, double tol = 1e-8);

}  // namespace matprod
