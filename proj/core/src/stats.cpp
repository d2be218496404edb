#include "matprod/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matprod/parallel.hpp"

namespace matprod {

double normal_cdf(double y) { return 0.5 * std::erfc(-y / std::sqrt(2.0)); }
double normal_sf(double y) { return 0.5 * std::erfc(y / std::sqrt(2.0)); }

TargetFunction make_target_function(std::function<double(const ProjPoint&)> f,
                                    double gamma, const ProjGrid& grid) {
  TargetFunction tf;
  tf.gamma = gamma;
  double sup = 0.0, semi = 0.0;
  const auto& pts = grid.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double vi = f(pts[i]);
    sup = std::max(sup, std::abs(vi));
    std::size_t stride = pts.size() > 64 ? pts.size() / 64 : 1;
    for (std::size_t j = i + 1; j < pts.size(); j += stride) {
      double dij = hilbert_distance(pts[i], pts[j]);
      if (dij > 1e-14) {
        semi = std::max(semi, std::abs(vi - f(pts[j])) / std::pow(dij, gamma));
      }
    }
  }
  tf.holder_norm_estimate = sup + semi;
  tf.value = std::move(f);
  return tf;
}

double sup_gap_to_normal(std::vector<double> samples, double center, double scale) {
  if (samples.empty()) throw PreconditionError("sup_gap_to_normal: no samples");
  if (!(scale > 0.0)) throw PreconditionError("sup_gap_to_normal: scale must be > 0");
  for (double& v : samples) v = (v - center) / scale;
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double gap = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double phi = normal_cdf(samples[i]);
    double above = (static_cast<double>(i) + 1.0) / m - phi;
    double below = phi - static_cast<double>(i) / m;
    gap = std::max(gap, std::max(above, below));
  }
  return gap;
}

const char* observable_name(ObservableKind k) {
  switch (k) {
    case ObservableKind::vec_norm: return "vec_norm";
    case ObservableKind::op_norm: return "op_norm";
    case ObservableKind::entry: return "entry";
    case ObservableKind::spec_rad: return "spec_rad";
  }
  return "?";
}

std::vector<double> observable_column(const BatchResult& batch, ObservableKind kind) {
  const std::vector<double>* src = nullptr;
  switch (kind) {
    case ObservableKind::vec_norm: src = &batch.log_vec_norm; break;
    case ObservableKind::op_norm: src = &batch.log_op_norm; break;
    case ObservableKind::entry: src = &batch.log_entry; break;
    case ObservableKind::spec_rad: src = &batch.log_spec_rad; break;
  }
  std::vector<double> out;
  out.reserve(src->size());
  for (std::size_t i = 0; i < src->size(); ++i) {
    double v = (*src)[i];
    if (std::isnan(v)) continue;
    if (kind == ObservableKind::entry && batch.entry_underflow[i]) continue;
    out.push_back(v);
  }
  return out;
}

namespace {

constexpr std::array<ObservableKind, 4> kAllObservables = {
    ObservableKind::vec_norm, ObservableKind::op_norm, ObservableKind::entry,
    ObservableKind::spec_rad};

void fit_log_log(const std::vector<long>& n, const std::vector<double>& gap, double* c,
                 double* beta) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(gap[i] > 0.0)) continue;
    double x = std::log(static_cast<double>(n[i]));
    double y = std::log(gap[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) {
    *c = 0.0;
    *beta = 0.0;
    return;
  }
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double intercept = (sy - slope * sx) / m;
  *beta = -slope;
  *c = std::exp(intercept);
}

}  // namespace

BerryEsseenReport berry_esseen_rate_fit(const MatrixLaw& law, const ProjPoint& x0,
                                        const ProjPoint& f, const std::vector<long>& n_ladder,
                                        long replicates, std::uint64_t seed, int threads,
                                        const CumulantSet& cum, const std::string& provenance) {
  if (!(cum.sigma2() > 1e-12)) {
    throw NumericError("berry_esseen_rate_fit: sigma^2 is degenerate (law violates A5)");
  }
  BerryEsseenReport rep;
  rep.n_ladder = n_ladder;
  rep.lambda_used = cum.lambda();
  rep.sigma_used = std::sqrt(cum.sigma2());
  rep.provenance = provenance;
  rep.replicates = replicates;

  for (std::size_t rung = 0; rung < n_ladder.size(); ++rung) {
    SimConfig cfg(law);
    cfg.n = n_ladder[rung];
    cfg.replicates = replicates;
    cfg.x0 = x0;
    cfg.f = f;
    cfg.seed = seed + rung;  // independent rungs
    cfg.threads = threads;
    BatchResult batch = run_batch(cfg);
    double scale = rep.sigma_used * std::sqrt(static_cast<double>(cfg.n));
    double center = rep.lambda_used * static_cast<double>(cfg.n);
    for (ObservableKind k : kAllObservables) {
      rep.gap[static_cast<std::size_t>(k)].push_back(
          sup_gap_to_normal(observable_column(batch, k), center, scale));
    }
  }
  for (ObservableKind k : kAllObservables) {
    fit_log_log(n_ladder, rep.gap[static_cast<std::size_t>(k)],
                &rep.fit_c[static_cast<std::size_t>(k)],
                &rep.fit_beta[static_cast<std::size_t>(k)]);
  }
  return rep;
}

MDRReport moderate_deviation_ratio(const MatrixLaw& law, const ProjGrid& grid, long n,
                                   const std::vector<double>& ys, const CumulantSet& cum,
                                   bool tilted, long replicates, const ProjPoint& x0,
                                   const ProjPoint& f, std::uint64_t seed, int threads,
                                   long count_floor, double smoothing) {
  double y_cap = std::pow(static_cast<double>(n), 1.0 / 6.0);
  for (double y : ys) {
    if (y < 0.0 || y > y_cap) {
      throw PreconditionError("moderate_deviation_ratio: y outside [0, n^(1/6)]");
    }
  }
  CramerSeries zeta = cramer_series(cum);
  double sigma = std::sqrt(cum.sigma2());
  double lambda = cum.lambda();
  double sqn = std::sqrt(static_cast<double>(n));
  double delta = smoothing * sigma * sqn;

  MDRReport rep;
  rep.replicates = replicates;
  rep.method = tilted ? "tilted" : "plain";

  auto predicted = [&](double y, TailSide side) {
    double t = y / sqn;
    double factor = (y * y * y / sqn) * cramer_zeta(zeta, side == TailSide::upper ? t : -t);
    return side == TailSide::upper ? std::exp(factor) : std::exp(-factor);
  };
  auto push_row = [&](ObservableKind kind, double y, TailSide side, double prob, double se,
                      long events) {
    MDRRow row;
    row.y = y;
    row.observable = kind;
    row.side = side;
    row.probability = prob;
    row.std_error = se;
    row.event_count = events;
    double tail = side == TailSide::upper ? normal_sf(y) : normal_cdf(-y);
    row.measured_ratio = prob / tail;
    row.predicted_factor = predicted(y, side);
    row.relative_error = row.measured_ratio / row.predicted_factor - 1.0;
    row.flagged = events < count_floor;
    rep.rows.push_back(row);
  };

  if (!tilted) {
    SimConfig cfg(law);
    cfg.n = n;
    cfg.replicates = replicates;
    cfg.x0 = x0;
    cfg.f = f;
    cfg.seed = seed;
    cfg.threads = threads;
    BatchResult batch = run_batch(cfg);
    for (ObservableKind kind : kAllObservables) {
      std::vector<double> col = observable_column(batch, kind);
      for (double y : ys) {
        for (TailSide side : {TailSide::upper, TailSide::lower}) {
          double thr = n * lambda + (side == TailSide::upper ? 1.0 : -1.0) * sigma * sqn * y;
          TailEstimate est = plain_tail_estimate(col, thr, delta, side);
          push_row(kind, y, side, est.probability, est.std_error, est.hit_count);
        }
      }
    }
  } else {
    // Tilting targets the norm cocycle; the other observables are bracketed
    // through it and are not tilted directly.
    for (double y : ys) {
      for (TailSide side : {TailSide::upper, TailSide::lower}) {
        TailEstimate est = estimate_tail_probability(law, grid, cum, x0, n, y, replicates,
                                                     seed, threads, side, smoothing);
        push_row(ObservableKind::vec_norm, y, side, est.probability, est.std_error,
                 est.hit_count);
      }
    }
  }
  return rep;
}

WeightedExpectation weighted_indicator_expectation(
    const BatchResult& batch, const std::function<double(const ProjPoint&)>& phi,
    const std::function<bool(long)>& event) {
  const long r = batch.replicates();
  if (r == 0) return {};
  std::vector<double> terms(static_cast<std::size_t>(r), 0.0);
  long count = 0;
  for (long i = 0; i < r; ++i) {
    if (event(i)) {
      terms[static_cast<std::size_t>(i)] = phi(batch.x_final_point(i));
      ++count;
    }
  }
  double mean = pairwise_mean(terms);
  double var = 0.0;
  for (double t : terms) var += (t - mean) * (t - mean);
  var /= r > 1 ? static_cast<double>(r - 1) : 1.0;
  return {mean, std::sqrt(var / static_cast<double>(r)), count};
}

namespace {

// (1/n) * centered second moment with an exact-zero fast path for
// bit-identical samples (deterministic laws).
void centered_moment(const std::vector<double>& samples, long n, double* value, double* se) {
  if (samples.empty()) {
    *value = std::nan("");
    *se = std::nan("");
    return;
  }
  auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  if (*mn == *mx) {
    *value = 0.0;
    *se = 0.0;
    return;
  }
  double mean = pairwise_mean(samples);
  std::vector<double> sq(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double d = samples[i] - mean;
    sq[i] = d * d / static_cast<double>(n);
  }
  double m2 = pairwise_mean(sq);
  double var = 0.0;
  for (double q : sq) var += (q - m2) * (q - m2);
  var /= sq.size() > 1 ? static_cast<double>(sq.size() - 1) : 1.0;
  *value = m2;
  *se = std::sqrt(var / static_cast<double>(sq.size()));
}

}  // namespace

VarianceTriple variance_triple(const MatrixLaw& law, long n, long replicates, double lambda,
                               const ProjPoint& x0, const ProjPoint& f, std::uint64_t seed,
                               int threads) {
  SimConfig cfg(law);
  cfg.n = n;
  cfg.replicates = replicates;
  cfg.x0 = x0;
  cfg.f = f;
  cfg.seed = seed;
  cfg.threads = threads;
  BatchResult batch = run_batch(cfg);

  VarianceTriple out;
  out.replicates = replicates;
  out.lambda_used = lambda;
  centered_moment(observable_column(batch, ObservableKind::op_norm), n, &out.op_norm,
                  &out.se_op_norm);
  centered_moment(observable_column(batch, ObservableKind::entry), n, &out.entry,
                  &out.se_entry);
  centered_moment(observable_column(batch, ObservableKind::spec_rad), n, &out.spec_rad,
                  &out.se_spec_rad);
  return out;
}

RegularityReport regularity_exponent(const std::vector<ProjPoint>& samples,
                                     const ProjPoint& f, const std::vector<double>& t_grid,
                                     long count_floor) {
  if (samples.size() < 100) throw PreconditionError("regularity_exponent: too few samples");
  RegularityReport rep;
  rep.t = t_grid;
  std::sort(rep.t.begin(), rep.t.end());

  std::vector<double> dots(samples.size());
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    dots[i] = scalar_product(f, samples[i]);
    gap = std::min(gap, dots[i]);
  }

  rep.counts.resize(rep.t.size());
  rep.tail.resize(rep.t.size());
  for (std::size_t k = 0; k < rep.t.size(); ++k) {
    long c = 0;
    for (double v : dots) c += v <= rep.t[k] ? 1 : 0;
    rep.counts[k] = c;
    rep.tail[k] = static_cast<double>(c) / static_cast<double>(samples.size());
  }

  bool any = false;
  for (long c : rep.counts) any = any || c > 0;
  if (!any) {
    rep.infinite = true;
    rep.alpha_hat = std::numeric_limits<double>::infinity();
    rep.gap = gap;
    return rep;
  }

  // Fit log tail vs log t over the points with enough mass.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t k = 0; k < rep.t.size(); ++k) {
    if (rep.counts[k] < count_floor) continue;
    double x = std::log(rep.t[k]);
    double y = std::log(rep.tail[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  rep.points_used = m;
  rep.gap = gap;
  if (m >= 2) {
    rep.alpha_hat = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  } else {
    rep.alpha_hat = std::nan("");
  }
  return rep;
}

double mdp_rate_from_probability(double probability, long n, double b_n) {
  if (probability >= 1.0) return 0.0;
  if (!(probability > 0.0)) return -std::numeric_limits<double>::infinity();
  return static_cast<double>(n) / (b_n * b_n) * std::log(probability);
}

MdpReport mdp_rate_check(const MatrixLaw& law, const ProjGrid& grid, const CumulantSet& cum,
                         double exponent, double y0, const std::vector<long>& n_ladder,
                         long replicates, const ProjPoint& x0, std::uint64_t seed,
                         int threads, double smoothing) {
  if (!(exponent > 0.5) || !(exponent < 1.0)) {
    throw PreconditionError("mdp_rate_check: need b_n = n^p with p in (1/2, 1)");
  }
  if (!(y0 > 0.0)) throw PreconditionError("mdp_rate_check: y0 > 0");

  MdpReport rep;
  rep.y0 = y0;
  rep.exponent = exponent;
  rep.target_rate = -y0 * y0 / (2.0 * cum.sigma2());

  double lambda = cum.lambda();
  double sigma = std::sqrt(cum.sigma2());
  for (std::size_t i = 0; i < n_ladder.size(); ++i) {
    long n = n_ladder[i];
    double b_n = std::pow(static_cast<double>(n), exponent);
    double threshold = n * lambda + y0 * b_n;
    double s_star = solve_tilt_parameter(cum, lambda + y0 * b_n / static_cast<double>(n));
    double delta = smoothing * sigma * std::sqrt(static_cast<double>(n));
    SpectralTriple triple = leading_triple(assemble_transfer(law, s_star, grid));
    TailEstimate est = tilted_tail_estimate(law, triple, grid, x0, n, threshold, delta,
                                            TailSide::upper, replicates, seed + i, threads);
    MdpRung rung;
    rung.n = n;
    rung.b_n = b_n;
    rung.probability = est.probability;
    rung.std_error = est.std_error;
    rung.rate = mdp_rate_from_probability(est.probability, n, b_n);
    rung.flagged = est.hit_count == 0;
    rep.rungs.push_back(rung);
  }
  return rep;
}

}  // namespace matprod
