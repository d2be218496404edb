#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "matprod/config.hpp"
#include "matprod/csv.hpp"

using namespace matprod;

TEST_CASE("shortest round-trip double formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(1.0 / 0.0) == "inf");
  CHECK(format_double(-1.0 / 0.0) == "-inf");

  // Round trip is exact for awkward values.
  for (double v : {1.0 / 3.0, 0.30000000000000004, 1e-300, 123456.789,
                   0.6931471805599453}) {
    double back = std::stod(format_double(v));
    CHECK(back == v);
  }
}

TEST_CASE("law recipes round-trip through JSON at full precision") {
  LawRecipe r;
  r.kind = "explicit";
  r.dim = 2;
  r.atoms = {{2.0, 1.0, 1.0, 2.0}, {1.0 / 3.0, 2.0, 3.0, 0.1}};
  r.weights = {1.0 / 3.0, 2.0 / 3.0};
  LawRecipe back = law_recipe_from_json(law_recipe_to_json(r));
  CHECK(back == r);

  LawRecipe ro;
  ro.kind = "rank_one";
  ro.scalars = {std::exp(-1.0), std::exp(1.0)};
  ro.weights = {0.5, 0.5};
  LawRecipe back2 = law_recipe_from_json(law_recipe_to_json(ro));
  CHECK(back2 == ro);
  MatrixLaw law = make_law(back2);
  CHECK(law.atom(1)(0, 0) == std::exp(1.0));
}

TEST_CASE("experiment config round-trips losslessly") {
  ExperimentConfig cfg = default_config();
  cfg.seed = 987654321;
  cfg.y_list = {0.25, 1.0 / 3.0, 2.0};
  cfg.x0 = std::vector<double>{0.6, 0.8};
  cfg.smoothing = 2.5e-3;

  ExperimentConfig back = config_from_json(config_to_json(cfg));
  CHECK(back == cfg);

  // Serialization is canonical: a second round trip is byte-identical.
  CHECK(config_to_json(back) == config_to_json(cfg));
}

TEST_CASE("config parse failures raise ConfigError") {
  CHECK_THROWS_AS(config_from_json("{"), ConfigError);
  CHECK_THROWS_AS(config_from_json("{\"n\": \"many\"}"), ConfigError);
  CHECK_THROWS_AS(load_config_file("/nonexistent/path.json"), ConfigError);
  LawRecipe mystery;
  mystery.kind = "mystery";
  CHECK_THROWS_AS(make_law(mystery), ConfigError);
}

TEST_CASE("csv writer emits the fixed dialect") {
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "matprod_io_test";
  fs::create_directories(dir);
  std::string path = (dir / "t.csv").string();
  {
    CsvWriter w(path);
    w.header({"a", "b"});
    w.row_values({0.5, 1.0 / 3.0});
    w.close();
  }
  std::string bytes = read_file_bytes(path);
  CHECK(bytes == "a,b\n0.5,0.3333333333333333\n");
  fs::remove_all(dir);
}
