#include "matprod/config.hpp"

#include <fstream>

#include <json.hpp>

#include "matprod/errors.hpp"

namespace matprod {

using ordered_json = nlohmann::ordered_json;

MatrixLaw make_law(const LawRecipe& recipe) {
  if (recipe.kind == "explicit") {
    std::vector<PositiveMatrix> atoms;
    atoms.reserve(recipe.atoms.size());
    for (const auto& e : recipe.atoms) atoms.emplace_back(recipe.dim, e);
    return make_law_explicit(recipe.dim, std::move(atoms), recipe.weights);
  }
  if (recipe.kind == "rank_one") {
    return make_law_rank_one(recipe.dim, recipe.scalars, recipe.weights);
  }
  if (recipe.kind == "random_a3") {
    return make_law_random_column_bounded(recipe.dim, recipe.count,
                                          recipe.column_constant, recipe.law_seed);
  }
  throw ConfigError("unknown law recipe kind: " + recipe.kind);
}

namespace {

ordered_json recipe_to_node(const LawRecipe& r) {
  ordered_json j;
  j["kind"] = r.kind;
  j["dim"] = r.dim;
  if (r.kind == "explicit") {
    j["atoms"] = r.atoms;
    j["weights"] = r.weights;
  } else if (r.kind == "rank_one") {
    j["scalars"] = r.scalars;
    j["weights"] = r.weights;
  } else if (r.kind == "random_a3") {
    j["count"] = r.count;
    j["column_constant"] = r.column_constant;
    j["law_seed"] = r.law_seed;
  }
  return j;
}

LawRecipe recipe_from_node(const ordered_json& j) {
  LawRecipe r;
  r.kind = j.value("kind", std::string("explicit"));
  r.dim = j.value("dim", 2);
  if (j.contains("atoms")) r.atoms = j["atoms"].get<std::vector<std::vector<double>>>();
  if (j.contains("weights")) r.weights = j["weights"].get<std::vector<double>>();
  if (j.contains("scalars")) r.scalars = j["scalars"].get<std::vector<double>>();
  if (j.contains("count")) r.count = j["count"].get<int>();
  if (j.contains("column_constant")) r.column_constant = j["column_constant"].get<double>();
  if (j.contains("law_seed")) r.law_seed = j["law_seed"].get<std::uint64_t>();
  return r;
}

ordered_json config_to_node(const ExperimentConfig& c) {
  ordered_json j;
  j["law"] = recipe_to_node(c.law);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["out_dir"] = c.out_dir;
  j["quiet"] = c.quiet;
  j["n"] = c.n;
  j["replicates"] = c.replicates;
  j["n_ladder"] = c.n_ladder;
  j["y_list"] = c.y_list;
  j["y"] = c.y;
  j["y0"] = c.y0;
  j["b_exponent"] = c.b_exponent;
  j["resolution"] = c.resolution;
  j["s_max"] = c.s_max;
  j["s_points"] = c.s_points;
  if (c.x0) {
    j["x0"] = *c.x0;
  } else {
    j["x0"] = nullptr;
  }
  if (c.f) {
    j["f"] = *c.f;
  } else {
    j["f"] = nullptr;
  }
  j["delta_k"] = c.delta_k;
  j["burn_in"] = c.burn_in;
  j["sample_count"] = c.sample_count;
  j["thin"] = c.thin;
  j["t_grid"] = c.t_grid;
  j["method"] = c.method;
  j["smoothing"] = c.smoothing;
  j["count_floor"] = c.count_floor;
  return j;
}

ExperimentConfig config_from_node(const ordered_json& j) {
  ExperimentConfig c;
  try {
    if (j.contains("law")) c.law = recipe_from_node(j["law"]);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out_dir = j.value("out_dir", c.out_dir);
    c.quiet = j.value("quiet", c.quiet);
    c.n = j.value("n", c.n);
    c.replicates = j.value("replicates", c.replicates);
    if (j.contains("n_ladder")) c.n_ladder = j["n_ladder"].get<std::vector<long>>();
    if (j.contains("y_list")) c.y_list = j["y_list"].get<std::vector<double>>();
    c.y = j.value("y", c.y);
    c.y0 = j.value("y0", c.y0);
    c.b_exponent = j.value("b_exponent", c.b_exponent);
    c.resolution = j.value("resolution", c.resolution);
    c.s_max = j.value("s_max", c.s_max);
    c.s_points = j.value("s_points", c.s_points);
    if (j.contains("x0") && !j["x0"].is_null()) c.x0 = j["x0"].get<std::vector<double>>();
    if (j.contains("f") && !j["f"].is_null()) c.f = j["f"].get<std::vector<double>>();
    c.delta_k = j.value("delta_k", c.delta_k);
    c.burn_in = j.value("burn_in", c.burn_in);
    c.sample_count = j.value("sample_count", c.sample_count);
    c.thin = j.value("thin", c.thin);
    if (j.contains("t_grid")) c.t_grid = j["t_grid"].get<std::vector<double>>();
    c.method = j.value("method", c.method);
    c.smoothing = j.value("smoothing", c.smoothing);
    c.count_floor = j.value("count_floor", c.count_floor);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
  return c;
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.law.kind = "explicit";
  c.law.dim = 2;
  c.law.atoms = {{2.0, 1.0, 1.0, 2.0}, {1.0, 2.0, 3.0, 1.0}};
  c.law.weights = {0.5, 0.5};
  return c;
}

std::string config_to_json(const ExperimentConfig& cfg) {
  return config_to_node(cfg).dump(2) + "\n";
}

ExperimentConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return config_from_node(j);
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

std::string law_recipe_to_json(const LawRecipe& recipe) {
  return recipe_to_node(recipe).dump(2) + "\n";
}

LawRecipe law_recipe_from_json(const std::string& text) {
  try {
    return recipe_from_node(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("law recipe parse error: ") + e.what());
  }
}

}  // namespace matprod
