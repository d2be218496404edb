#include "matprod/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "matprod/csv.hpp"
#include "matprod/stats.hpp"

namespace matprod {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

ProjPoint resolve_point(const std::optional<std::vector<double>>& coords, int dim,
                        const char* what) {
  if (!coords) return ProjPoint::uniform(dim);
  if (static_cast<int>(coords->size()) != dim) {
    throw ConfigError(std::string(what) + ": dimension mismatch with the law");
  }
  return ProjPoint::direction(*coords);
}

std::vector<double> default_t_grid() {
  std::vector<double> t;
  double lo = std::log(1e-3), hi = std::log(0.9);
  for (int k = 0; k < 25; ++k) t.push_back(std::exp(lo + (hi - lo) * k / 24.0));
  return t;
}

std::string hex64(std::uint64_t v) {
  std::ostringstream ss;
  ss << std::hex << v;
  return ss.str();
}

struct SpectralBundle {
  ProjGrid grid;
  PressureCurve curve;
  CumulantSet cumulants;
};

SpectralBundle spectral_pipeline(const MatrixLaw& law, const ExperimentConfig& cfg) {
  SpectralBundle b{build_grid(law.dim(), cfg.resolution), {}, {}};
  b.curve = pressure_curve(law, chebyshev_s_grid(cfg.s_max, cfg.s_points), b.grid);
  b.cumulants = cumulants_from_pressure(b.curve);
  return b;
}

class Runner {
 public:
  Runner(std::string subcommand, const ExperimentConfig& cfg)
      : sub_(std::move(subcommand)), cfg_(cfg), law_(make_law(cfg.law)) {
    x0_ = resolve_point(cfg_.x0, law_.dim(), "x0");
    f_ = resolve_point(cfg_.f, law_.dim(), "f");
    fs::create_directories(cfg_.out_dir);
  }

  std::vector<std::string> run() {
    write_manifest();
    if (sub_ == "check") {
      do_check();
    } else if (sub_ == "simulate") {
      do_simulate();
    } else if (sub_ == "spectral") {
      do_spectral();
    } else if (sub_ == "berry-esseen") {
      do_berry_esseen();
    } else if (sub_ == "mdr") {
      do_mdr();
    } else if (sub_ == "mdp") {
      do_mdp();
    } else if (sub_ == "variance") {
      do_variance();
    } else if (sub_ == "regularity") {
      do_regularity();
    } else if (sub_ == "tilt") {
      do_tilt();
    } else {
      throw ConfigError("unknown subcommand: " + sub_);
    }
    return written_;
  }

 private:
  std::string path(const std::string& name) {
    written_.push_back((fs::path(cfg_.out_dir) / name).string());
    return written_.back();
  }

  void write_manifest() {
    ordered_json m;
    m["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
    m["subcommand"] = sub_;
    m["law_hash"] = hex64(law_.hash());
    m["config"] = ordered_json::parse(config_to_json(cfg_));
    m["x0_interior_margin"] = x0_.min_coord();
    m["x0_in_interior_set"] = x0_.min_coord() >= cfg_.delta_k;
    m["standardization_source"] = "spectral";
    write_file_atomic(path("manifest.json"), m.dump(2) + "\n");
  }

  void do_check() {
    LawConditionReport rep = law_condition_report(law_);
    ordered_json j;
    j["eta_estimate"] = rep.eta_estimate ? ordered_json(*rep.eta_estimate) : ordered_json(nullptr);
    j["a3_constant"] = rep.a3_constant ? ordered_json(*rep.a3_constant) : ordered_json(nullptr);
    j["allowable_all"] = rep.allowable_all;
    j["positivity"] = rep.positivity;
    j["harmonic_ok"] = rep.harmonic_ok;
    j["harmonic_delta"] = rep.harmonic_delta;
    j["arithmetic_warning"] = rep.arithmetic_warning;
    j["arithmetic_conclusive"] = rep.arithmetic_conclusive;
    write_file_atomic(path("check.json"), j.dump(2) + "\n");
  }

  void do_simulate() {
    SimConfig sim(law_);
    sim.n = cfg_.n;
    sim.replicates = cfg_.replicates;
    sim.x0 = x0_;
    sim.f = f_;
    sim.seed = cfg_.seed;
    sim.threads = cfg_.threads;
    BatchResult batch = run_batch(sim);

    CsvWriter csv(path("trajectories.csv"));
    std::vector<std::string> head = {"replicate", "n", "log_vec_norm", "log_op_norm",
                                     "log_entry", "log_spec_rad"};
    for (int i = 0; i < batch.dim; ++i) head.push_back("x_final_" + std::to_string(i));
    csv.header(head);
    for (long i = 0; i < batch.replicates(); ++i) {
      std::vector<std::string> cells = {std::to_string(i), std::to_string(batch.n)};
      auto ui = static_cast<std::size_t>(i);
      cells.push_back(format_double(batch.log_vec_norm[ui]));
      cells.push_back(format_double(batch.log_op_norm[ui]));
      cells.push_back(format_double(batch.log_entry[ui]));
      cells.push_back(format_double(batch.log_spec_rad[ui]));
      for (int k = 0; k < batch.dim; ++k) {
        cells.push_back(format_double(batch.x_final[ui * batch.dim + k]));
      }
      csv.row(cells);
    }
    csv.close();

    ordered_json j;
    j["replicates"] = batch.replicates();
    j["entry_underflow_count"] = batch.underflow_count;
    j["error_count"] = batch.error_count;
    if (!batch.first_error.empty()) j["first_error"] = batch.first_error;
    write_file_atomic(path("simulate_summary.json"), j.dump(2) + "\n");
  }

  void do_spectral() {
    SpectralBundle b = spectral_pipeline(law_, cfg_);
    CsvWriter csv(path("pressure.csv"));
    csv.header({"s", "lambda", "kappa", "residual", "refine_delta"});
    for (std::size_t i = 0; i < b.curve.s.size(); ++i) {
      csv.row_values({b.curve.s[i], b.curve.lambda[i], b.curve.kappa[i],
                      b.curve.residual[i], b.curve.refine_delta[i]});
    }
    csv.close();

    CramerSeries z = cramer_series(b.cumulants);
    ordered_json j;
    j["lambda"] = b.cumulants.lambda();
    j["sigma2"] = b.cumulants.sigma2();
    j["gamma"] = b.cumulants.gamma;
    j["fit_residual"] = b.cumulants.fit_residual;
    j["zeta"] = {{"c0", z.c0}, {"c1", z.c1}, {"c2", z.c2}, {"radius_hint", z.radius_hint}};
    j["resolution"] = cfg_.resolution;
    j["s_max"] = cfg_.s_max;
    j["s_points"] = cfg_.s_points;
    write_file_atomic(path("spectral.json"), j.dump(2) + "\n");
  }

  void do_berry_esseen() {
    SpectralBundle b = spectral_pipeline(law_, cfg_);
    BerryEsseenReport rep = berry_esseen_rate_fit(law_, x0_, f_, cfg_.n_ladder,
                                                  cfg_.replicates, cfg_.seed, cfg_.threads,
                                                  b.cumulants);
    CsvWriter csv(path("berry_esseen.csv"));
    csv.header({"observable", "n", "gap", "se_bound"});
    for (std::size_t k = 0; k < 4; ++k) {
      for (std::size_t r = 0; r < rep.n_ladder.size(); ++r) {
        csv.row({observable_name(static_cast<ObservableKind>(k)),
                 std::to_string(rep.n_ladder[r]), format_double(rep.gap[k][r]),
                 format_double(0.5 / std::sqrt(static_cast<double>(rep.replicates)))});
      }
    }
    csv.close();

    ordered_json j;
    j["lambda"] = rep.lambda_used;
    j["sigma"] = rep.sigma_used;
    j["provenance"] = rep.provenance;
    for (std::size_t k = 0; k < 4; ++k) {
      const char* name = observable_name(static_cast<ObservableKind>(k));
      j["fit"][name] = {{"c", rep.fit_c[k]}, {"beta", rep.fit_beta[k]}};
    }
    write_file_atomic(path("berry_esseen.json"), j.dump(2) + "\n");
  }

  void do_mdr() {
    SpectralBundle b = spectral_pipeline(law_, cfg_);
    bool tilted = cfg_.method == "tilted";
    MDRReport rep = moderate_deviation_ratio(law_, b.grid, cfg_.n, cfg_.y_list, b.cumulants,
                                             tilted, cfg_.replicates, x0_, f_, cfg_.seed,
                                             cfg_.threads, cfg_.count_floor, cfg_.smoothing);
    CsvWriter csv(path("mdr.csv"));
    csv.header({"observable", "y", "side", "probability", "se", "measured_ratio",
                "predicted_factor", "relative_error", "events", "flagged"});
    for (const MDRRow& r : rep.rows) {
      csv.row({observable_name(r.observable), format_double(r.y),
               r.side == TailSide::upper ? "upper" : "lower", format_double(r.probability),
               format_double(r.std_error), format_double(r.measured_ratio),
               format_double(r.predicted_factor), format_double(r.relative_error),
               std::to_string(r.event_count), r.flagged ? "1" : "0"});
    }
    csv.close();
  }

  void do_mdp() {
    SpectralBundle b = spectral_pipeline(law_, cfg_);
    MdpReport rep = mdp_rate_check(law_, b.grid, b.cumulants, cfg_.b_exponent, cfg_.y0,
                                   cfg_.n_ladder, cfg_.replicates, x0_, cfg_.seed,
                                   cfg_.threads, cfg_.smoothing);
    CsvWriter csv(path("mdp.csv"));
    csv.header({"n", "b_n", "probability", "se", "rate", "target_rate", "flagged"});
    for (const MdpRung& r : rep.rungs) {
      csv.row({std::to_string(r.n), format_double(r.b_n), format_double(r.probability),
               format_double(r.std_error), format_double(r.rate),
               format_double(rep.target_rate), r.flagged ? "1" : "0"});
    }
    csv.close();
  }

  void do_variance() {
    SpectralBundle b = spectral_pipeline(law_, cfg_);
    VarianceTriple v = variance_triple(law_, cfg_.n, cfg_.replicates, b.cumulants.lambda(),
                                       x0_, f_, cfg_.seed, cfg_.threads);
    CsvWriter csv(path("variance.csv"));
    csv.header({"observable", "value", "se", "spectral_sigma2"});
    csv.row({"op_norm", format_double(v.op_norm), format_double(v.se_op_norm),
             format_double(b.cumulants.sigma2())});
    csv.row({"entry", format_double(v.entry), format_double(v.se_entry),
             format_double(b.cumulants.sigma2())});
    csv.row({"spec_rad", format_double(v.spec_rad), format_double(v.se_spec_rad),
             format_double(b.cumulants.sigma2())});
    csv.close();
  }

  void do_regularity() {
    RandomStream rng(cfg_.seed, 0);
    auto samples = stationary_sample(law_, cfg_.burn_in, static_cast<int>(cfg_.sample_count),
                                     rng, cfg_.thin);
    std::vector<double> t = cfg_.t_grid.empty() ? default_t_grid() : cfg_.t_grid;
    RegularityReport rep = regularity_exponent(samples, f_, t, cfg_.count_floor);

    CsvWriter csv(path("regularity.csv"));
    csv.header({"t", "tail", "count"});
    for (std::size_t i = 0; i < rep.t.size(); ++i) {
      csv.row({format_double(rep.t[i]), format_double(rep.tail[i]),
               std::to_string(rep.counts[i])});
    }
    csv.close();

    ordered_json j;
    j["alpha_hat"] = rep.infinite ? ordered_json("inf") : ordered_json(rep.alpha_hat);
    j["infinite"] = rep.infinite;
    j["gap"] = rep.gap;
    j["points_used"] = rep.points_used;
    j["samples"] = samples.size();
    write_file_atomic(path("regularity.json"), j.dump(2) + "\n");
  }

  void do_tilt() {
    SpectralBundle b = spectral_pipeline(law_, cfg_);
    TailEstimate est = estimate_tail_probability(law_, b.grid, b.cumulants, x0_, cfg_.n,
                                                 cfg_.y, cfg_.replicates, cfg_.seed,
                                                 cfg_.threads, TailSide::upper,
                                                 cfg_.smoothing);
    ordered_json j;
    j["p"] = est.probability;
    j["se"] = est.std_error;
    j["n"] = est.n;
    j["y"] = est.y;
    j["s_star"] = est.s_used;
    j["mean_weight"] = est.mean_weight;
    j["replicates"] = est.replicates;
    j["seed"] = est.seed;
    write_file_atomic(path("tilt.json"), j.dump(2) + "\n");
  }

  std::string sub_;
  ExperimentConfig cfg_;
  MatrixLaw law_;
  ProjPoint x0_{std::vector<double>{1.0, 0.0}};
  ProjPoint f_{std::vector<double>{1.0, 0.0}};
  std::vector<std::string> written_;
};

}  // namespace

std::vector<std::string> experiment_subcommands() {
  return {"simulate", "spectral", "berry-esseen", "mdr", "mdp",
          "variance", "regularity", "tilt", "check"};
}

std::vector<std::string> run_experiment(const std::string& subcommand,
                                        const ExperimentConfig& cfg) {
  Runner runner(subcommand, cfg);
  return runner.run();
}

}  // namespace matprod
