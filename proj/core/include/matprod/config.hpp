#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matprod/law.hpp"

namespace matprod {

/// Law construction recipe; serializes to/from JSON with exact double
/// round-trip (matrices as row-major lists).
struct LawRecipe {
  std::string kind = "explicit";  // explicit | rank_one | random_a3
  int dim = 2;
  // explicit
  std::vector<std::vector<double>> atoms;
  // explicit & rank_one
  std::vector<double> weights;
  // rank_one
  std::vector<double> scalars;
  // random_a3
  int count = 2;
  double column_constant = 3.0;
  std::uint64_t law_seed = 1;

  bool operator==(const LawRecipe&) const = default;
};

MatrixLaw make_law(const LawRecipe& recipe);

/// Everything a CLI run needs; every field has a default and the whole struct
/// round-trips losslessly through its JSON form.
struct ExperimentConfig {
  LawRecipe law;  // default: the two-atom demo law below
  std::uint64_t seed = 12345;
  int threads = 1;
  std::string out_dir = "out";
  bool quiet = false;

  long n = 400;
  long replicates = 100000;
  std::vector<long> n_ladder = {64, 256, 1024};
  std::vector<double> y_list = {0.5, 1.0, 1.5, 2.0};
  double y = 2.0;    // tilt subcommand target
  double y0 = 1.0;   // mdp interval edge
  double b_exponent = 0.7;

  int resolution = 512;
  double s_max = 0.5;
  int s_points = 21;

  std::optional<std::vector<double>> x0;  // default: uniform direction
  std::optional<std::vector<double>> f;
  double delta_k = 0.05;  // reported interior margin for the compact set

  int burn_in = 64;
  long sample_count = 100000;
  int thin = 1;
  std::vector<double> t_grid;  // default: log-spaced in (1e-3, 0.9)

  std::string method = "plain";  // mdr: plain | tilted
  double smoothing = 1e-3;       // tail-indicator smoothing, in sigma*sqrt(n) units
  long count_floor = 100;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig default_config();

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

std::string law_recipe_to_json(const LawRecipe& recipe);
LawRecipe law_recipe_from_json(const std::string& text);

}  // namespace matprod
