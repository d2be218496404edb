#include "matprod/simulate.hpp"

#include <cmath>
#include <limits>
#include <mutex>

#include "matprod/detail/kernels.hpp"
#include "matprod/parallel.hpp"
#include "matprod/semigroup.hpp"

namespace matprod {

namespace {

constexpr double kRescaleHigh = 1e280;
constexpr double kRescaleLow = 1e-280;

struct Scratch {
  std::vector<double> x, y, m, m2, opn;
  void resize(int d) {
    x.resize(static_cast<std::size_t>(d));
    y.resize(static_cast<std::size_t>(d));
    m.resize(static_cast<std::size_t>(d) * d);
    m2.resize(static_cast<std::size_t>(d) * d);
  }
};

struct RawTrajectory {
  double log_vec = 0.0;
  double log_op = std::numeric_limits<double>::quiet_NaN();
  double log_entry = std::numeric_limits<double>::quiet_NaN();
  double log_spec = std::numeric_limits<double>::quiet_NaN();
  bool underflow = false;
  double bracket = 0.0;
};

RawTrajectory simulate_one(const MatrixLaw& law, const double* x0, const double* f,
                           long n, RandomStream& rng, const ObservableSet& obs,
                           Scratch& sc, double* x_out, std::vector<double>* gains) {
  const int d = law.dim();
  sc.resize(d);
  double* x = sc.x.data();
  double* y = sc.y.data();
  double* m = sc.m.data();
  double* m2 = sc.m2.data();
  const bool track_product = obs.op_norm || obs.spec_rad;

  for (int i = 0; i < d; ++i) x[i] = x0[i];
  if (track_product) {
    for (int i = 0; i < d * d; ++i) m[i] = 0.0;
    for (int i = 0; i < d; ++i) m[i * d + i] = 1.0;
  }

  double vec_log = 0.0, vec_prod = 1.0;
  double op_log = 0.0, op_prod = 1.0;

  for (long k = 0; k < n; ++k) {
    const PositiveMatrix& atom = law.atom(law.atom_index_for(rng.next_unit()));
    const double* g = atom.data();

    detail::mat_apply_flat(g, x, y, d);
    double nrm = detail::vec_norm_flat(y, d);
    if (!(nrm > 0.0)) {
      throw DegenerateActionError("run_trajectory: |g x| = 0 at step " + std::to_string(k + 1));
    }
    double inv = 1.0 / nrm;
    for (int i = 0; i < d; ++i) x[i] = y[i] * inv;
    if (gains) {
      double lg = std::log(nrm);
      gains->push_back(lg);
      vec_log += lg;
    } else {
      vec_prod *= nrm;
      if (vec_prod > kRescaleHigh || vec_prod < kRescaleLow) {
        vec_log += std::log(vec_prod);
        vec_prod = 1.0;
      }
    }

    if (track_product) {
      detail::mat_mul_flat(g, m, m2, d);
      double on = detail::op_norm_flat(m2, d, sc.opn, k > 0);
      double oinv = 1.0 / on;
      for (int i = 0; i < d * d; ++i) m[i] = m2[i] * oinv;
      op_prod *= on;
      if (op_prod > kRescaleHigh || op_prod < kRescaleLow) {
        op_log += std::log(op_prod);
        op_prod = 1.0;
      }
    }
  }

  RawTrajectory out;
  out.log_vec = vec_log + (gains ? 0.0 : std::log(vec_prod));
  for (int i = 0; i < d; ++i) x_out[i] = x[i];

  if (track_product) {
    op_log += std::log(op_prod);
    if (obs.op_norm) out.log_op = op_log;
    if (obs.spec_rad) {
      PositiveMatrix mn(d, std::vector<double>(m, m + d * d));
      double rho;
      try {
        rho = spectral_radius(mn, 1e-10).rho;
      } catch (const ConvergenceError& e) {
        auto [lo, hi] = collatz_wielandt_bounds(mn, ProjPoint::uniform(d));
        rho = 0.5 * (lo + hi);
        out.bracket = hi - lo;
      }
      out.log_spec = std::log(rho) + op_log;
    }
  }

  if (obs.entry) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += f[i] * x[i];
    if (s > 0.0) {
      out.log_entry = std::log(s) + out.log_vec;
    } else {
      out.log_entry = -std::numeric_limits<double>::infinity();
      out.underflow = true;
    }
  }
  return out;
}

}  // namespace

Trajectory run_trajectory(const MatrixLaw& law, const ProjPoint& x0, const ProjPoint& f,
                          long n, RandomStream& rng, bool keep_gains,
                          const ObservableSet& obs) {
  if (n < 1) throw PreconditionError("run_trajectory: n >= 1");
  if (x0.dim() != law.dim() || f.dim() != law.dim()) {
    throw DimensionError("run_trajectory: x0/f dimension mismatch");
  }
  Scratch sc;
  std::vector<double> xf(static_cast<std::size_t>(law.dim()));
  std::vector<double> gains;
  if (keep_gains) gains.reserve(static_cast<std::size_t>(n));

  Trajectory t(n, x0, f);
  RawTrajectory raw = simulate_one(law, x0.data(), f.data(), n, rng, obs, sc, xf.data(),
                                   keep_gains ? &gains : nullptr);
  t.log_vec_norm = raw.log_vec;
  t.log_op_norm = raw.log_op;
  t.log_entry = raw.log_entry;
  t.log_spec_rad = raw.log_spec;
  t.entry_underflow = raw.underflow;
  t.spec_rad_bracket = raw.bracket;
  t.x_final = unit_unchecked(std::move(xf));
  t.per_step_log_gains = std::move(gains);
  return t;
}

ProjPoint BatchResult::x_final_point(long i) const {
  std::vector<double> c(x_final.begin() + i * dim, x_final.begin() + (i + 1) * dim);
  return unit_unchecked(std::move(c));
}

BatchResult run_batch(const SimConfig& cfg) {
  if (cfg.n < 1 || cfg.replicates < 1) {
    throw PreconditionError("run_batch: n >= 1 and replicates >= 1");
  }
  if (cfg.replicates > (int64_t{1} << 62) / cfg.n) {
    throw PreconditionError("run_batch: replicates*n exceeds the step guard");
  }
  const int d = cfg.law.dim();
  if (cfg.x0.dim() != d || cfg.f.dim() != d) {
    throw DimensionError("run_batch: x0/f dimension mismatch");
  }

  BatchResult out;
  out.n = cfg.n;
  out.dim = d;
  const auto r = static_cast<std::size_t>(cfg.replicates);
  out.log_vec_norm.assign(r, std::numeric_limits<double>::quiet_NaN());
  out.log_op_norm.assign(r, std::numeric_limits<double>::quiet_NaN());
  out.log_entry.assign(r, std::numeric_limits<double>::quiet_NaN());
  out.log_spec_rad.assign(r, std::numeric_limits<double>::quiet_NaN());
  out.x_final.assign(r * static_cast<std::size_t>(d), 0.0);
  out.entry_underflow.assign(r, 0);

  std::mutex err_mutex;
  long underflow = 0, errors = 0;

  parallel_blocks(cfg.replicates, cfg.threads, [&](long begin, long end) {
    Scratch sc;
    long local_underflow = 0, local_errors = 0;
    std::string local_first;
    for (long i = begin; i < end; ++i) {
      RandomStream rng(cfg.seed, static_cast<std::uint64_t>(i));
      try {
        RawTrajectory raw = simulate_one(
            cfg.law, cfg.x0.data(), cfg.f.data(), cfg.n, rng, cfg.observables, sc,
            out.x_final.data() + static_cast<std::size_t>(i) * d, nullptr);
        auto ui = static_cast<std::size_t>(i);
        out.log_vec_norm[ui] = raw.log_vec;
        out.log_op_norm[ui] = raw.log_op;
        out.log_entry[ui] = raw.log_entry;
        out.log_spec_rad[ui] = raw.log_spec;
        out.entry_underflow[ui] = raw.underflow ? 1 : 0;
        if (raw.underflow) ++local_underflow;
      } catch (const std::exception& e) {
        ++local_errors;
        if (local_first.empty()) local_first = e.what();
      }
    }
    std::lock_guard<std::mutex> lock(err_mutex);
    underflow += local_underflow;
    errors += local_errors;
    if (!local_first.empty() && out.first_error.empty()) out.first_error = local_first;
  });

  out.underflow_count = underflow;
  out.error_count = errors;
  return out;
}

std::vector<ProjPoint> stationary_sample(const MatrixLaw& law, int burn_in, int count,
                                         RandomStream& rng, int stride) {
  if (burn_in < 1) throw PreconditionError("stationary_sample: burn_in >= 1");
  if (count < 0 || stride < 1) throw PreconditionError("stationary_sample: bad count/stride");
  const int d = law.dim();
  std::vector<double> x(ProjPoint::uniform(d).coords());
  std::vector<double> y(x.size());

  auto step = [&]() {
    const PositiveMatrix& g = sample_matrix(law, rng);
    detail::mat_apply_flat(g.data(), x.data(), y.data(), d);
    double nrm = detail::vec_norm_flat(y.data(), d);
    if (!(nrm > 0.0)) throw DegenerateActionError("stationary_sample: degenerate action");
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = y[i] / nrm;
  };

  for (int k = 0; k < burn_in; ++k) step();
  std::vector<ProjPoint> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    for (int s = 0; s < stride; ++s) step();
    out.push_back(unit_unchecked(std::vector<double>(x)));
  }
  return out;
}

}  // namespace matprod
