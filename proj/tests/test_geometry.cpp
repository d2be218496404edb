#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "matprod/geometry.hpp"
#include "matprod/matrix.hpp"
#include "matprod/rng.hpp"
#include "matprod/semigroup.hpp"

using namespace matprod;

namespace {

ProjPoint random_interior_point(RandomStream& rng, int dim) {
  std::vector<double> c(static_cast<std::size_t>(dim));
  for (double& v : c) v = 0.01 + rng.next_unit();
  return ProjPoint::direction(std::move(c));
}

ProjPoint random_quadrant_point(RandomStream& rng, int dim) {
  // Occasionally pins a coordinate to the boundary.
  std::vector<double> c(static_cast<std::size_t>(dim));
  bool all_zero = true;
  for (double& v : c) {
    v = rng.next_unit() < 0.15 ? 0.0 : rng.next_unit();
    all_zero = all_zero && v == 0.0;
  }
  if (all_zero) c[0] = 1.0;
  return ProjPoint::direction(std::move(c));
}

}  // namespace

TEST_CASE("ProjPoint construction rules") {
  CHECK_THROWS_AS(ProjPoint({0.5, 0.5}), PreconditionError);  // norm too far off
  CHECK_THROWS_AS(ProjPoint({-0.6, 0.8}), PreconditionError);
  CHECK_THROWS_AS(ProjPoint::direction({0.0, 0.0}), PreconditionError);

  // Within 1e-6 of unit norm: accepted and renormalized.
  double s = 1.0 / std::sqrt(2.0);
  ProjPoint p({s * (1.0 + 4e-7), s});
  double nrm = p[0] * p[0] + p[1] * p[1];
  CHECK(std::abs(nrm - 1.0) <= 1e-12);

  ProjPoint u = ProjPoint::uniform(3);
  CHECK(u.dim() == 3);
  CHECK(u[0] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(ProjPoint::axis(2, 1)[1] == 1.0);
}

TEST_CASE("hilbert distance: identity, boundary, hand-computed value") {
  ProjPoint u = ProjPoint::uniform(2);
  CHECK(hilbert_distance(u, u) == 0.0);

  CHECK(hilbert_distance(ProjPoint::axis(2, 0), ProjPoint::axis(2, 1)) == 1.0);

  // x = (1,1)/sqrt2, y = (2,1)/sqrt5: the two min-ratios multiply to 1/2,
  // giving (1 - 1/2)/(1 + 1/2) = 1/3.
  ProjPoint y = ProjPoint::direction({2.0, 1.0});
  CHECK(hilbert_distance(u, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(std::abs(hilbert_distance(u, y) - 1.0 / 3.0) <= 1e-12);

  CHECK_THROWS_AS(hilbert_distance(u, ProjPoint::uniform(3)), DimensionError);
}

TEST_CASE("metric axioms on random triples") {
  RandomStream rng(2024, 1);
  for (int d : {2, 3}) {
    for (int it = 0; it < 10000; ++it) {
      ProjPoint x = random_quadrant_point(rng, d);
      ProjPoint y = random_quadrant_point(rng, d);
      ProjPoint z = random_quadrant_point(rng, d);
      double dxy = hilbert_distance(x, y);
      double dyx = hilbert_distance(y, x);
      double dxz = hilbert_distance(x, z);
      double dyz = hilbert_distance(y, z);
      REQUIRE(dxy >= 0.0);
      REQUIRE(dxy <= 1.0);
      REQUIRE(dxy == dyx);
      REQUIRE(dxz <= dxy + dyz + 1e-12);
    }
  }
}

TEST_CASE("d(x,y) = 0 iff x = y componentwise") {
  RandomStream rng(7, 0);
  for (int it = 0; it < 2000; ++it) {
    ProjPoint x = random_quadrant_point(rng, 2);
    ProjPoint y = random_quadrant_point(rng, 2);
    double d = hilbert_distance(x, y);
    bool equal = x[0] == y[0] && x[1] == y[1];
    if (equal) {
      REQUIRE(d == 0.0);
    } else {
      REQUIRE(d > 0.0);
    }
  }
}

TEST_CASE("non-expansiveness under allowable matrices") {
  RandomStream rng(99, 3);
  for (int it = 0; it < 10000; ++it) {
    std::vector<double> e(4);
    for (double& v : e) v = rng.next_unit() < 0.2 ? 0.0 : 0.05 + rng.next_unit();
    PositiveMatrix g(2, e);
    if (!g.allowable()) continue;
    ProjPoint x = random_interior_point(rng, 2);
    ProjPoint y = random_interior_point(rng, 2);
    double before = hilbert_distance(x, y);
    double after = hilbert_distance(project_act(g, x).point, project_act(g, y).point);
    REQUIRE(after <= before + 1e-12);
  }
}

TEST_CASE("euclidean norm dominated by a fixed multiple of the metric (d = 2)") {
  RandomStream rng(5150, 2);
  for (int it = 0; it < 10000; ++it) {
    ProjPoint x = random_quadrant_point(rng, 2);
    ProjPoint y = random_quadrant_point(rng, 2);
    double dx = x[0] - y[0], dy = x[1] - y[1];
    double euclid = std::sqrt(dx * dx + dy * dy);
    REQUIRE(euclid <= 4.0 * hilbert_distance(x, y) + 1e-12);
  }
}
