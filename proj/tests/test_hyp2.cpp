#include <cmath>
#include <numbers>

#include <doctest.h>

#include "thurston/hyp2.hpp"
#include "thurston/parallel.hpp"

#include "oracles.hpp"

using namespace thurston;

namespace {

// Random isometry: a short word in one hyperbolic and one loxodromic-across
// generator, enough to move everything off the special positions.
Isometry random_isometry(SplitMix64& rng) {
  Isometry m = Isometry::Identity();
  for (int i = 0; i < 4; ++i) {
    if (rng.uniform() < 0.5)
      m = m * axis_translation(rng.uniform(-1.5, 1.5));
    else
      m = m * cross_translation(rng.uniform(-1.5, 1.5));
  }
  return m;
}

}  // namespace

TEST_CASE("hyperbolic distance basics") {
  CHECK(std::abs(hyp_distance({0, 1}, {0, 2}) - std::numbers::ln2) < 1e-15);
  CHECK(hyp_distance({3, 0.5}, {3, 0.5}) == 0.0);

  SplitMix64 rng(101);
  for (int i = 0; i < 50; ++i) {
    HPoint p(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
    HPoint q(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
    HPoint r(rng.uniform(-3, 3), std::exp(rng.uniform(-2, 2)));
    CHECK(hyp_distance(p, q) == hyp_distance(q, p));
    CHECK(hyp_distance(p, r) <= hyp_distance(p, q) + hyp_distance(q, r) + 1e-12);
  }

  // The asinh form stays accurate on nearly coincident points.
  double d = hyp_distance({0, 1}, {1e-12, 1});
  CHECK(std::abs(d - 1e-12) < 1e-15);

  CHECK_THROWS_AS(hyp_distance({0, 1}, {0, -1}), std::domain_error);
  CHECK_THROWS_AS(hyp_distance({0, 0}, {0, 1}), std::domain_error);
}

TEST_CASE("distance is invariant under the Mobius action") {
  SplitMix64 rng(202);
  for (int i = 0; i < 30; ++i) {
    Isometry m = random_isometry(rng);
    HPoint p(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
    HPoint q(rng.uniform(-2, 2), std::exp(rng.uniform(-1, 1)));
    double before = hyp_distance(p, q);
    double after = hyp_distance(mobius_apply(m, p), mobius_apply(m, q));
    CHECK(std::abs(after - before) <= 1e-12 * std::max(1.0, before));
  }
}

TEST_CASE("Mobius action on interior and ideal points") {
  Isometry shift;
  shift << 1, 1, 0, 1;
  CHECK(std::abs(mobius_apply(shift, {0, 1}) - HPoint(1, 1)) < 1e-15);

  // axis_translation fixes 0 and infinity on the boundary
  IdealPoint inf = mobius_ideal(axis_translation(0.8), IdealPoint(1, 0));
  CHECK(inf.y() == 0.0);
  IdealPoint zero = mobius_ideal(axis_translation(0.8), IdealPoint(0, 1));
  CHECK(zero.x() == 0.0);
  // cross_translation fixes +1 and -1
  IdealPoint one = mobius_ideal(cross_translation(0.8), IdealPoint(1, 1));
  CHECK(std::abs(one.x() - one.y()) < 1e-15);

  // an overflow-grade matrix pushes the image out of the plane
  Isometry bad;
  bad << 1e160, 0, 0, 1e-160;
  CHECK_THROWS_AS(mobius_apply(bad, {0, 1}), std::domain_error);
}

TEST_CASE("translation length") {
  for (double l : {0.3, 1.0, 5.0, 40.0}) {
    CHECK(std::abs(translation_length(axis_translation(l)) - l) <= 1e-13 * l);
    CHECK(std::abs(translation_length(cross_translation(l)) - l) <= 1e-13 * l);
  }
  SplitMix64 rng(303);
  for (int i = 0; i < 20; ++i) {
    Isometry g = random_isometry(rng);
    Isometry t = g * axis_translation(1.7) * sl2_inverse(g);
    CHECK(std::abs(translation_length(t) - 1.7) < 1e-10);
  }
  Isometry parabolic;
  parabolic << 1, 1, 0, 1;
  CHECK_THROWS_AS(translation_length(parabolic), std::domain_error);
  Isometry elliptic;
  elliptic << std::cos(0.5), std::sin(0.5), -std::sin(0.5), std::cos(0.5);
  CHECK_THROWS_AS(translation_length(elliptic), std::domain_error);
}

TEST_CASE("axis endpoints") {
  SUBCASE("conjugate of a diagonal translation") {
    Isometry g;
    g << 2, 1, 1, 1;
    Isometry t = g * axis_translation(1.3) * sl2_inverse(g);
    Geodesic ax = axis(t);
    // fixed points are the images of 0 and infinity: 1/1 and 2/1
    double f1 = ax.e1.x() / ax.e1.y(), f2 = ax.e2.x() / ax.e2.y();
    double lo = std::min(f1, f2), hi = std::max(f1, f2);
    CHECK(std::abs(lo - 1.0) < 1e-12);
    CHECK(std::abs(hi - 2.0) < 1e-12);
  }
  SUBCASE("upper-triangular element fixes infinity") {
    Isometry t;
    t << std::exp(1.0), 1.0, 0.0, std::exp(-1.0);
    Geodesic ax = axis(t);
    CHECK(ax.e1.y() == 0.0);
    CHECK(std::abs(ax.e2.x() / ax.e2.y() - 1.0 / (std::exp(1.0) - std::exp(-1.0))) < 1e-14);
  }
  SUBCASE("non-hyperbolic input throws") {
    Isometry r;
    r << std::cos(0.3), std::sin(0.3), -std::sin(0.3), std::cos(0.3);
    CHECK_THROWS_AS(axis(r), std::domain_error);
  }
}

TEST_CASE("common perpendicular matches direct minimization") {
  SUBCASE("concentric half-circles") {
    for (double big : {2.0, 10.0, 1e6}) {
      double d = common_perpendicular_length(Geodesic::from_feet(-1, 1),
                                             Geodesic::from_feet(-big, big));
      CHECK(std::abs(d - std::log(big)) <= 1e-12 * std::log(big));
    }
  }
  SUBCASE("random disjoint pairs") {
    SplitMix64 rng(404);
    for (int i = 0; i < 40; ++i) {
      double x[4];
      for (double& v : x) v = rng.uniform(-5, 5);
      std::sort(std::begin(x), std::end(x));
      if (x[1] - x[0] < 0.05 || x[2] - x[1] < 0.05 || x[3] - x[2] < 0.05) continue;
      // side by side
      Geodesic g1 = Geodesic::from_feet(x[0], x[1]);
      Geodesic g2 = Geodesic::from_feet(x[2], x[3]);
      double lib = common_perpendicular_length(g1, g2);
      CHECK(std::abs(lib - oracles::perpendicular_by_minimization(g1, g2)) < 1e-9);
      // nested
      Geodesic g3 = Geodesic::from_feet(x[0], x[3]);
      Geodesic g4 = Geodesic::from_feet(x[1], x[2]);
      double lib2 = common_perpendicular_length(g3, g4);
      CHECK(std::abs(lib2 - oracles::perpendicular_by_minimization(g3, g4)) < 1e-9);
      // linked feet cross
      CHECK_THROWS_AS(common_perpendicular_length(Geodesic::from_feet(x[0], x[2]),
                                                  Geodesic::from_feet(x[1], x[3])),
                      std::domain_error);
    }
  }
  SUBCASE("vertical against a half-circle") {
    Geodesic v = Geodesic::vertical(0.0);
    Geodesic c = Geodesic::from_feet(1.0, 2.0);
    double lib = common_perpendicular_length(v, c);
    CHECK(std::abs(lib - oracles::perpendicular_by_minimization(v, c)) < 1e-9);
  }
  SUBCASE("shared endpoints throw") {
    CHECK_THROWS_AS(common_perpendicular_length(Geodesic::from_feet(0, 1),
                                                Geodesic::from_feet(1, 3)),
                    std::domain_error);
    CHECK_THROWS_AS(common_perpendicular_length(Geodesic::vertical(0),
                                                Geodesic::vertical(3)),
                    std::domain_error);
  }
}

TEST_CASE("perpendicular length from excess") {
  // lambda < 1 branch at a point with a clean closed form: e = -1/2 gives
  // lambda = 1/2 and distance 2 asinh(1)
  CHECK(std::abs(perp_length_from_excess(-1.0, std::log(0.5)) - 2 * std::asinh(1.0)) < 1e-14);
  // crossing configurations (lambda <= 0) are rejected
  CHECK_THROWS_AS(perp_length_from_excess(-1.0, 0.1), std::domain_error);
  CHECK_THROWS_AS(perp_length_from_excess(-1.0, 0.0), std::domain_error);
  // the asymptotic tail glues continuously onto the exact formula
  double below = perp_length_from_excess(1.0, -600.0 - 1e-3);
  double above = perp_length_from_excess(1.0, -600.0 + 1e-3);
  CHECK(std::abs(below - above - 2e-3) < 1e-9);
  CHECK(std::abs(above - (2 * std::numbers::ln2 + 600.0 - 1e-3)) < 1e-9);
}

TEST_CASE("hexagon side") {
  SUBCASE("argument symmetry and domain") {
    CHECK(hexagon_side(0.7, 1.1, 0.9) == hexagon_side(1.1, 0.7, 0.9));
    CHECK_THROWS_AS(hexagon_side(0.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(hexagon_side(1.0, -1.0, 1.0), std::invalid_argument);
  }
  SUBCASE("boundary walk closes") {
    SplitMix64 rng(505);
    for (int i = 0; i < 25; ++i) {
      double a1 = rng.uniform(0.2, 2.5);
      double a2 = rng.uniform(0.2, 2.5);
      double a3 = rng.uniform(0.2, 2.5);
      CHECK(oracles::hexagon_closure_error(a1, a2, a3) < 1e-9);
    }
    CHECK(oracles::hexagon_closure_error(0.3, 2.0, 1.5) < 1e-10);
  }
  SUBCASE("doubled-hexagon identities") {
    for (double X : {2.0, 5.0, 10.0}) {
      double s0 = hexagon_side(std::asinh(X * X), std::asinh(X * X),
                               2 * std::acosh(X * X * X * X));
      CHECK(std::abs(s0 - std::acosh(2 * std::pow(X, 4) + 1)) <= 1e-12 * s0);
      CHECK(std::abs(s0 - 2 * std::asinh(X * X)) <= 1e-12 * s0);
      double s1 = hexagon_side(std::asinh(X * X * X), std::asinh(X * X * X),
                               2 * std::acosh(X * X * X * X));
      CHECK(std::abs(s1 - 2 * std::asinh(X)) <= 1e-12 * s1);
    }
  }
}

TEST_CASE("length from log trace") {
  CHECK(std::abs(length_from_log_trace(std::log(3.0)) - 2 * std::acosh(1.5)) < 1e-15);
  double below = length_from_log_trace(30.0 - 1e-6);
  double above = length_from_log_trace(30.0 + 1e-6);
  CHECK(std::abs(above - below - 4e-6) < 1e-12);
  CHECK(std::abs(length_from_log_trace(600.0) - 1200.0) < 1e-9);
}

TEST_CASE("exact unit-determinant inverse and sign normalization") {
  SplitMix64 rng(606);
  for (int i = 0; i < 20; ++i) {
    Isometry m = random_isometry(rng);
    Isometry prod = m * sl2_inverse(m);
    CHECK((prod - Isometry::Identity()).cwiseAbs().maxCoeff() < 1e-12);
  }
  Isometry neg = -axis_translation(1.0);
  CHECK(sign_normalized(neg)(0, 0) > 0.0);
  CHECK(sign_normalized(axis_translation(1.0))(0, 0) > 0.0);
}
