#include "matprod/tilt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "matprod/detail/kernels.hpp"
#include "matprod/parallel.hpp"
#include "matprod/semigroup.hpp"

namespace matprod {

namespace {

// Flat-buffer core of the tilted step distribution; y_out receives g_i x for
// the chosen atom when sampling.
struct TiltContext {
  const MatrixLaw* law;
  const SpectralTriple* triple;
  const ProjGrid* grid;
  std::vector<double> raw;
  std::vector<double> prob;
  std::vector<double> gains;  // |g_i x| per atom
  std::vector<double> y;

  void compute(const double* x) {
    const int d = law->dim();
    const int a = law->atom_count();
    raw.resize(static_cast<std::size_t>(a));
    prob.resize(static_cast<std::size_t>(a));
    gains.resize(static_cast<std::size_t>(a));
    y.resize(static_cast<std::size_t>(d));
    double rx = grid->dim() == 2 ? interp_flat(x) : interp_point(x);
    if (!(rx > 1e-300)) throw NumericError("tilt: r_s(x) underflowed");
    double z = 0.0;
    for (int i = 0; i < a; ++i) {
      const PositiveMatrix& g = law->atom(i);
      detail::mat_apply_flat(g.data(), x, y.data(), d);
      double nrm = detail::vec_norm_flat(y.data(), d);
      if (!(nrm > 0.0)) throw DegenerateActionError("tilt: degenerate action");
      gains[static_cast<std::size_t>(i)] = nrm;
      double r_img = interp_dir(y.data());
      raw[static_cast<std::size_t>(i)] = law->weight(i) * std::pow(nrm, triple->s) * r_img /
                                         (triple->kappa * rx);
      z += raw[static_cast<std::size_t>(i)];
    }
    defect = z - 1.0;
    for (int i = 0; i < a; ++i) prob[static_cast<std::size_t>(i)] = raw[static_cast<std::size_t>(i)] / z;
  }

  double interp_flat(const double* x) const { return interp_dir(x); }
  double interp_point(const double* x) const { return interp_dir(x); }
  double interp_dir(const double* v) const {
    ProjGrid::Stencil st = grid->stencil_for(v);
    double s = 0.0;
    for (int k = 0; k < st.count; ++k) {
      s += st.weight[static_cast<std::size_t>(k)] *
           triple->r[static_cast<std::size_t>(st.index[static_cast<std::size_t>(k)])];
    }
    return s;
  }

  int sample(double u) const {
    double acc = 0.0;
    int a = static_cast<int>(prob.size());
    for (int i = 0; i + 1 < a; ++i) {
      acc += prob[static_cast<std::size_t>(i)];
      if (u < acc) return i;
    }
    return a - 1;
  }

  double defect = 0.0;
};

struct TiltedVecResult {
  double log_vec = 0.0;
  double log_weight = 0.0;
};

// Vec-norm-only tilted chain; the hot path for tail estimation.
TiltedVecResult tilted_chain(TiltContext& ctx, const double* x0, long n, RandomStream& rng,
                             std::vector<double>& x, std::vector<double>& yv) {
  const int d = ctx.law->dim();
  x.assign(x0, x0 + d);
  yv.resize(static_cast<std::size_t>(d));
  double log_vec = 0.0, log_w = 0.0;
  double prod = 1.0;
  for (long k = 0; k < n; ++k) {
    ctx.compute(x.data());
    int idx = ctx.sample(rng.next_unit());
    log_w += std::log(ctx.law->weight(idx) / ctx.prob[static_cast<std::size_t>(idx)]);
    const PositiveMatrix& g = ctx.law->atom(idx);
    detail::mat_apply_flat(g.data(), x.data(), yv.data(), d);
    double nrm = detail::vec_norm_flat(yv.data(), d);
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = yv[static_cast<std::size_t>(i)] / nrm;
    prod *= nrm;
    if (prod > 1e280 || prod < 1e-280) {
      log_vec += std::log(prod);
      prod = 1.0;
    }
  }
  log_vec += std::log(prod);
  return {log_vec, log_w};
}

}  // namespace

TiltedStepDistribution tilt_step_distribution(const MatrixLaw& law,
                                              const SpectralTriple& triple,
                                              const ProjGrid& grid, const ProjPoint& x) {
  TiltContext ctx{&law, &triple, &grid, {}, {}, {}, {}};
  ctx.compute(x.data());
  TiltedStepDistribution out;
  out.prob = ctx.prob;
  out.defect = ctx.defect;
  out.ratio.resize(out.prob.size());
  for (std::size_t i = 0; i < out.prob.size(); ++i) {
    out.ratio[i] = law.weight(static_cast<int>(i)) / out.prob[i];
  }
  double check = 0.0;
  for (double p : out.prob) check += p;
  if (std::abs(check - 1.0) > 1e-10) throw NumericError("tilt: renormalization failed");
  return out;
}

TiltedRun run_tilted_trajectory(const MatrixLaw& law, const SpectralTriple& triple,
                                const ProjGrid& grid, const ProjPoint& x0, long n,
                                RandomStream& rng, const ObservableSet& obs) {
  if (n < 1) throw PreconditionError("run_tilted_trajectory: n >= 1");
  const int d = law.dim();
  TiltContext ctx{&law, &triple, &grid, {}, {}, {}, {}};

  // Tilted sampling drives the chain; the full observable set is replayed
  // through the renormalized-product recursion on the chosen atoms.
  std::vector<double> x(x0.coords()), yv(static_cast<std::size_t>(d));
  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0), m2(m.size());
  std::vector<double> opn;
  const bool track_product = obs.op_norm || obs.spec_rad;
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i * d + i)] = 1.0;

  double log_vec = 0.0, log_w = 0.0, op_log = 0.0;
  for (long k = 0; k < n; ++k) {
    ctx.compute(x.data());
    int idx = ctx.sample(rng.next_unit());
    log_w += std::log(law.weight(idx) / ctx.prob[static_cast<std::size_t>(idx)]);
    const PositiveMatrix& g = law.atom(idx);
    detail::mat_apply_flat(g.data(), x.data(), yv.data(), d);
    double nrm = detail::vec_norm_flat(yv.data(), d);
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = yv[static_cast<std::size_t>(i)] / nrm;
    log_vec += std::log(nrm);
    if (track_product) {
      detail::mat_mul_flat(g.data(), m.data(), m2.data(), d);
      double on = detail::op_norm_flat(m2.data(), d, opn, k > 0);
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = m2[i] / on;
      op_log += std::log(on);
    }
  }

  TiltedRun run(Trajectory(n, x0, ProjPoint::uniform(d)));
  run.trajectory.log_vec_norm = log_vec;
  run.trajectory.x_final = unit_unchecked(std::vector<double>(x));
  run.trajectory.log_op_norm = std::numeric_limits<double>::quiet_NaN();
  run.trajectory.log_spec_rad = std::numeric_limits<double>::quiet_NaN();
  run.trajectory.log_entry = std::numeric_limits<double>::quiet_NaN();
  if (track_product) {
    if (obs.op_norm) run.trajectory.log_op_norm = op_log;
    if (obs.spec_rad) {
      PositiveMatrix mn(d, std::vector<double>(m));
      try {
        run.trajectory.log_spec_rad = std::log(spectral_radius(mn, 1e-10).rho) + op_log;
      } catch (const ConvergenceError&) {
        auto [lo, hi] = collatz_wielandt_bounds(mn, ProjPoint::uniform(d));
        run.trajectory.log_spec_rad = std::log(0.5 * (lo + hi)) + op_log;
        run.trajectory.spec_rad_bracket = hi - lo;
      }
    }
  }
  if (obs.entry) {
    double sdot = 0.0;
    for (int i = 0; i < d; ++i) sdot += run.trajectory.f[i] * x[static_cast<std::size_t>(i)];
    run.trajectory.log_entry = sdot > 0.0 ? std::log(sdot) + log_vec
                                          : -std::numeric_limits<double>::infinity();
    run.trajectory.entry_underflow = !(sdot > 0.0);
  }
  run.log_weight = log_w;
  run.weight = std::exp(log_w);
  return run;
}

double TailEstimate::ci_lo() const { return std::max(0.0, probability - 3.0 * std_error); }
double TailEstimate::ci_hi() const { return std::min(1.0, probability + 3.0 * std_error); }

double tail_indicator(double value, double threshold, double delta, TailSide side) {
  if (side == TailSide::lower) {
    return 0.5 * ((value <= threshold - delta ? 1.0 : 0.0) +
                  (value <= threshold + delta ? 1.0 : 0.0));
  }
  return 0.5 * ((value >= threshold - delta ? 1.0 : 0.0) +
                (value >= threshold + delta ? 1.0 : 0.0));
}

TailEstimate plain_tail_estimate(const std::vector<double>& samples, double threshold,
                                 double delta, TailSide side) {
  if (samples.empty()) throw PreconditionError("plain_tail_estimate: no samples");
  std::vector<double> hits(samples.size());
  long hit_count = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    hits[i] = tail_indicator(samples[i], threshold, delta, side);
    hit_count += hits[i] > 0.0 ? 1 : 0;
  }
  double mean = pairwise_mean(hits);
  double var = 0.0;
  for (double h : hits) var += (h - mean) * (h - mean);
  var /= hits.size() > 1 ? static_cast<double>(hits.size() - 1) : 1.0;

  TailEstimate est;
  est.probability = std::min(1.0, std::max(0.0, mean));
  est.std_error = std::sqrt(var / static_cast<double>(hits.size()));
  est.threshold = threshold;
  est.replicates = static_cast<long>(samples.size());
  est.hit_count = hit_count;
  est.mean_weight = 1.0;
  return est;
}

TailEstimate tilted_tail_estimate(const MatrixLaw& law, const SpectralTriple& triple,
                                  const ProjGrid& grid, const ProjPoint& x0, long n,
                                  double threshold, double delta, TailSide side,
                                  long replicates, std::uint64_t seed, int threads) {
  if (replicates < 2) throw PreconditionError("tilted_tail_estimate: replicates >= 2");
  std::vector<double> contrib(static_cast<std::size_t>(replicates));
  std::vector<double> weights(static_cast<std::size_t>(replicates));

  std::mutex err_mutex;
  std::string first_error;
  parallel_blocks(replicates, threads, [&](long begin, long end) {
    TiltContext ctx{&law, &triple, &grid, {}, {}, {}, {}};
    std::vector<double> x, yv;
    for (long i = begin; i < end; ++i) {
      RandomStream rng(seed, static_cast<std::uint64_t>(i));
      try {
        TiltedVecResult res = tilted_chain(ctx, x0.data(), n, rng, x, yv);
        double w = std::exp(res.log_weight);
        weights[static_cast<std::size_t>(i)] = w;
        contrib[static_cast<std::size_t>(i)] =
            w * tail_indicator(res.log_vec, threshold, delta, side);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
        weights[static_cast<std::size_t>(i)] = std::nan("");
        contrib[static_cast<std::size_t>(i)] = std::nan("");
      }
    }
  });
  if (!first_error.empty()) throw NumericError("tilted_tail_estimate: " + first_error);

  double mean = pairwise_mean(contrib);
  double var = 0.0;
  long hit_count = 0;
  for (double c : contrib) {
    var += (c - mean) * (c - mean);
    hit_count += c > 0.0 ? 1 : 0;
  }
  var /= static_cast<double>(replicates - 1);

  TailEstimate est;
  est.probability = std::min(1.0, std::max(0.0, mean));
  est.std_error = std::sqrt(var / static_cast<double>(replicates));
  est.n = n;
  est.threshold = threshold;
  est.s_used = triple.s;
  est.mean_weight = pairwise_mean(weights);
  est.replicates = replicates;
  est.hit_count = hit_count;
  est.seed = seed;
  return est;
}

double solve_tilt_parameter(const CumulantSet& cum, double q, double tol) {
  double lo = -cum.s_max, hi = cum.s_max;
  double dlo = cum.pressure_d1(lo), dhi = cum.pressure_d1(hi);
  if (q < dlo || q > dhi) {
    throw PreconditionError("solve_tilt_parameter: target drift " + std::to_string(q) +
                            " outside fitted range [" + std::to_string(dlo) + ", " +
                            std::to_string(dhi) + "]");
  }
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (cum.pressure_d1(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

TailEstimate estimate_tail_probability(const MatrixLaw& law, const ProjGrid& grid,
                                       const CumulantSet& cum, const ProjPoint& x0,
                                       long n, double y, long replicates,
                                       std::uint64_t seed, int threads, TailSide side,
                                       double smoothing) {
  if (y < 0.0) throw PreconditionError("estimate_tail_probability: y >= 0");
  double sigma = std::sqrt(cum.sigma2());
  double lambda = cum.lambda();
  double sqn = std::sqrt(static_cast<double>(n));
  double signed_y = side == TailSide::upper ? y : -y;
  double threshold = n * lambda + sigma * sqn * signed_y;
  double s_star = solve_tilt_parameter(cum, lambda + sigma * signed_y / sqn);
  double delta = smoothing * sigma * sqn;

  SpectralTriple triple = leading_triple(assemble_transfer(law, s_star, grid));
  TailEstimate est = tilted_tail_estimate(law, triple, grid, x0, n, threshold, delta,
                                          side, replicates, seed, threads);
  est.y = y;
  est.s_used = s_star;
  return est;
}

}  // namespace matprod
