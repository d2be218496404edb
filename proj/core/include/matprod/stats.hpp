#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "matprod/pressure.hpp"
#include "matprod/simulate.hpp"
#include "matprod/tilt.hpp"

namespace matprod {

/// Standard normal CDF via erfc; accurate in both tails.
double normal_cdf(double y);
double normal_sf(double y);  // 1 - Phi(y)

/// Test function on the projective space with a Holder-seminorm estimate
/// sampled on grid pairs.
struct TargetFunction {
  std::function<double(const ProjPoint&)> value;
  double gamma = 0.5;
  double holder_norm_estimate = 0.0;
};

TargetFunction make_target_function(std::function<double(const ProjPoint&)> f,
                                    double gamma, const ProjGrid& grid);

/// Kolmogorov statistic sup_y |F_hat(y) - Phi(y)| of (samples - center)/scale,
/// evaluated exactly at the empirical jump points.
double sup_gap_to_normal(std::vector<double> samples, double center, double scale);

enum class ObservableKind { vec_norm, op_norm, entry, spec_rad };
const char* observable_name(ObservableKind k);

/// Pulls the requested observable column out of a batch; rows flagged for
/// entry underflow are skipped (count reported by the caller via the batch).
std::vector<double> observable_column(const BatchResult& batch, ObservableKind kind);

struct BerryEsseenReport {
  std::vector<long> n_ladder;
  std::array<std::vector<double>, 4> gap;  // indexed by ObservableKind
  std::array<double, 4> fit_c{};
  std::array<double, 4> fit_beta{};
  double lambda_used = 0.0;
  double sigma_used = 0.0;
  std::string provenance;  // where lambda/sigma came from
  long replicates = 0;
};

/// Sup-gaps over an n ladder with a log-log fit of gap = c * n^-beta per
/// observable. Throws NumericError when sigma^2 is degenerate.
BerryEsseenReport berry_esseen_rate_fit(const MatrixLaw& law, const ProjPoint& x0,
                                        const ProjPoint& f, const std::vector<long>& n_ladder,
                                        long replicates, std::uint64_t seed, int threads,
                                        const CumulantSet& cum,
                                        const std::string& provenance = "spectral");

struct MDRRow {
  double y = 0.0;
  ObservableKind observable = ObservableKind::vec_norm;
  TailSide side = TailSide::upper;
  double measured_ratio = 0.0;
  double predicted_factor = 0.0;
  double relative_error = 0.0;
  double probability = 0.0;
  double std_error = 0.0;
  long event_count = 0;
  bool flagged = false;  // too few events to report
};

struct MDRReport {
  std::vector<MDRRow> rows;
  long replicates = 0;
  std::string method;
};

/// Measured tail ratios P(obs - n lambda >=/<= +-sigma sqrt(n) y) over the
/// normal tail, against the predicted factor exp(+-(y^3/sqrt(n)) zeta(+-y/sqrt(n))).
/// Plain mode scans one batch across all four observables; tilted mode runs
/// the saddle-point sampler for the norm cocycle only.
MDRReport moderate_deviation_ratio(const MatrixLaw& law, const ProjGrid& grid, long n,
                                   const std::vector<double>& ys, const CumulantSet& cum,
                                   bool tilted, long replicates, const ProjPoint& x0,
                                   const ProjPoint& f, std::uint64_t seed, int threads,
                                   long count_floor = 100, double smoothing = 1e-3);

struct WeightedExpectation {
  double value = 0.0;
  double std_error = 0.0;
  long count = 0;
};

/// mean of phi(X_n) * 1{event(i)} over batch replicates; with phi == 1 this
/// reduces bit-exactly to the event probability.
WeightedExpectation weighted_indicator_expectation(
    const BatchResult& batch, const std::function<double(const ProjPoint&)>& phi,
    const std::function<bool(long)>& event);

struct VarianceTriple {
  double op_norm = 0.0, entry = 0.0, spec_rad = 0.0;
  double se_op_norm = 0.0, se_entry = 0.0, se_spec_rad = 0.0;
  long replicates = 0;
  double lambda_used = 0.0;
};

/// Normalized second moments (1/n) E[(obs - n lambda)^2] for the three matrix
/// observables. Centered at the sample mean (identical limit, smaller bias);
/// a batch of bit-identical samples reports exactly zero.
VarianceTriple variance_triple(const MatrixLaw& law, long n, long replicates,
                               double lambda, const ProjPoint& x0, const ProjPoint& f,
                               std::uint64_t seed, int threads);

struct RegularityReport {
  std::vector<double> t;
  std::vector<double> tail;        // empirical nu({x : <f,x> <= t})
  std::vector<long> counts;
  double alpha_hat = 0.0;          // fitted log-tail slope
  bool infinite = false;           // tail identically zero on the grid
  double gap = 0.0;                // min <f,x> over the samples when infinite
  int points_used = 0;
};

/// Empirical boundary-regularity exponent of the stationary measure. Points
/// with fewer events than count_floor are excluded from the fit; a tail that
/// is identically zero on the grid reports the +infinity sentinel with the
/// observed gap.
RegularityReport regularity_exponent(const std::vector<ProjPoint>& samples,
                                     const ProjPoint& f, const std::vector<double>& t_grid,
                                     long count_floor = 100);

struct MdpRung {
  long n = 0;
  double b_n = 0.0;
  double probability = 0.0;
  double std_error = 0.0;
  double rate = 0.0;  // (n / b_n^2) log P
  bool flagged = false;
};

struct MdpReport {
  std::vector<MdpRung> rungs;
  double target_rate = 0.0;  // -y0^2 / (2 sigma^2)
  double y0 = 0.0;
  double exponent = 0.0;  // p in b_n = n^p
};

/// Moderate-deviation rate check for B = [y0, inf): per rung computes
/// (n/b_n^2) log P((obs - n lambda)/b_n >= y0) by tilted estimation and
/// reports the target -y0^2/(2 sigma^2).
MdpReport mdp_rate_check(const MatrixLaw& law, const ProjGrid& grid, const CumulantSet& cum,
                         double exponent, double y0, const std::vector<long>& n_ladder,
                         long replicates, const ProjPoint& x0, std::uint64_t seed,
                         int threads, double smoothing = 1e-3);

/// (n / b^2) log p with the probability-one convention log 1 = 0.
double mdp_rate_from_probability(double probability, long n, double b_n);

}  // namespace matprod
