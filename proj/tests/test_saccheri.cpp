#include <cmath>
#include <complex>
#include <cstdlib>
#include <string>

#include <doctest.h>

#include "thurston/hyp2.hpp"
#include "thurston/saccheri.hpp"

#include "oracles.hpp"

using namespace thurston;

namespace {

HPoint reflect(HPoint p) { return {-p.real(), p.imag()}; }

double foot(const IdealPoint& e) {
  REQUIRE(std::abs(e.y()) > 1e-12 * std::abs(e.x()));
  return e.x() / e.y();
}

}  // namespace

TEST_CASE("quadrilateral geometry") {
  for (double a : {1.0, 2 * std::asinh(1.0), 3.0}) {
    IdealSaccheriQuad q = build_quad(a);
    CHECK(q.base_length == a);
    double h = std::asinh(1.0 / std::sinh(a / 2));
    CHECK(std::abs(q.rho - std::exp(-h)) < 1e-15);
    CHECK(std::abs(q.x_bc - (1 + q.rho * q.rho) / (1 - q.rho * q.rho)) < 1e-14);

    // base has the requested length and sits on |z| = rho, symmetrically
    CHECK(std::abs(hyp_distance(q.a_vertex, q.b_vertex) - a) < 1e-12 * a);
    CHECK(std::abs(std::abs(q.a_vertex) - q.rho) < 1e-14);
    CHECK(std::abs(std::abs(q.b_vertex) - q.rho) < 1e-14);
    CHECK(std::abs(q.a_vertex.real() + q.b_vertex.real()) < 1e-15);
    CHECK(std::abs(q.a_vertex.imag() - q.b_vertex.imag()) < 1e-15);
    CHECK(q.b_vertex.real() > 0);

    // ideal vertices and the far side
    CHECK(foot(q.c_vertex) == 1.0);
    CHECK(foot(q.d_vertex) == -1.0);
    CHECK(std::abs(foot(q.side_cd.e1) * foot(q.side_cd.e2) + 1.0) < 1e-14);

    // legs: half-circles with the documented feet ...
    double r2 = q.rho * q.rho;
    double bc_lo = std::min(foot(q.side_bc.e1), foot(q.side_bc.e2));
    double bc_hi = std::max(foot(q.side_bc.e1), foot(q.side_bc.e2));
    CHECK(std::abs(bc_lo - r2) < 1e-14);
    CHECK(std::abs(bc_hi - 1.0) < 1e-14);
    double da_lo = std::min(foot(q.side_da.e1), foot(q.side_da.e2));
    double da_hi = std::max(foot(q.side_da.e1), foot(q.side_da.e2));
    CHECK(std::abs(da_lo + 1.0) < 1e-14);
    CHECK(std::abs(da_hi + r2) < 1e-14);

    // ... that are orthogonal to the base circle: |center|^2 = rho^2 + radius^2
    double center = (bc_lo + bc_hi) / 2, radius = (bc_hi - bc_lo) / 2;
    CHECK(std::abs(center * center - (q.rho * q.rho + radius * radius)) < 1e-14);

    // the finite vertices lie on their legs
    CHECK(std::abs(std::abs(q.b_vertex - HPoint(center, 0.0)) - radius) < 1e-14);
    CHECK(std::abs(std::abs(q.a_vertex + HPoint(center, 0.0)) - radius) < 1e-14);
  }
  CHECK_THROWS_AS(build_quad(0.0), std::invalid_argument);
  CHECK_THROWS_AS(build_quad(-1.0), std::invalid_argument);
}

TEST_CASE("trichotomy and membership") {
  double critical = 2 * std::asinh(1.0);
  CHECK(classify(build_quad(critical)) == FoliationCase::Critical);
  CHECK(classify(build_quad(critical - 1e-12)) == FoliationCase::Short);
  CHECK(classify(build_quad(critical + 1e-12)) == FoliationCase::Long);
  CHECK(classify(build_quad(1.0)) == FoliationCase::Short);
  CHECK(classify(build_quad(3.0)) == FoliationCase::Long);
  CHECK(std::abs(build_quad(critical).rho - (std::sqrt(2.0) - 1.0)) < 1e-15);

  IdealSaccheriQuad q = build_quad(1.0);
  CHECK(quad_contains(q, {0.0, 0.5}));
  CHECK(quad_contains(q, {0.0, q.rho}));         // on the base
  CHECK_FALSE(quad_contains(q, {0.0, 1.5}));     // beyond the far side
  CHECK_FALSE(quad_contains(q, {0.9, 0.05}));    // in the cusp corner, past the leg
  CHECK_FALSE(quad_contains(q, {0.0, 0.1}));     // below the base
  CHECK_FALSE(quad_contains(q, {0.0, -0.5}));

  ExtendedDomain ext = extend_quad(q);
  CHECK(ext.contains({0.0, 0.1}));               // extension keeps going toward the axis
  CHECK(ext.contains({0.0, 0.5}));
  CHECK_FALSE(ext.contains({0.9, 0.05}));        // legs still bound it
  CHECK_FALSE(ext.contains({0.0, 1.5}));
}

TEST_CASE("partial foliation") {
  for (double a : {1.0, 3.0}) {
    IdealSaccheriQuad q = build_quad(a);
    PartialFoliation f = foliate(q);

    // the extreme horocycles are unit circles tangent to each other at i
    CHECK(std::abs(f.anchor - HPoint(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(f.extreme_center_c - HPoint(1.0, 1.0)) < 1e-15);
    CHECK(std::abs(f.extreme_center_d - HPoint(-1.0, 1.0)) < 1e-15);
    CHECK(std::abs(f.extreme_radius - 1.0) < 1e-15);
    CHECK(std::abs(std::abs(f.extreme_center_c - f.extreme_center_d) -
                   2 * f.extreme_radius) < 1e-15);
    CHECK(f.x_bc == q.x_bc);
    CHECK(f.extended == (classify(q) == FoliationCase::Long));

    CHECK(f.leaf_length(0.0) == f.x_bc);
    CHECK(std::abs(f.leaf_length(0.7) - f.x_bc * std::exp(-0.7)) < 1e-15);
    CHECK(f.leaf_length(0.5) > f.leaf_length(1.0));

    // the anchor is foliated (d = 0, s = 0); axis points below it are not
    CHECK(f.foliated(f.anchor));
    CHECK_FALSE(f.foliated({0.0, 0.9}));
    CHECK_FALSE(f.foliated({0.0, 0.5}));

    // chart round trips, and the reflection swaps the cusps keeping (d, s)
    for (Cusp c : {Cusp::C, Cusp::D}) {
      for (double d : {0.3, 1.0, 2.5}) {
        for (double frac : {0.0, 0.5, 0.999}) {
          LeafCoords lc{c, d, frac * f.leaf_length(d)};
          HPoint p = f.from_leaf(lc);
          CHECK(f.foliated(p));
          LeafCoords back = f.to_leaf(p);
          CHECK(back.cusp == c);
          CHECK(std::abs(back.d - lc.d) < 1e-12);
          CHECK(std::abs(back.s - lc.s) < 1e-12 * std::max(1.0, lc.s));
          LeafCoords mirror = f.to_leaf(reflect(p));
          CHECK(mirror.cusp == (c == Cusp::C ? Cusp::D : Cusp::C));
          CHECK(std::abs(mirror.d - lc.d) < 1e-12);
          CHECK(std::abs(mirror.s - lc.s) < 1e-12 * std::max(1.0, lc.s));
        }
      }
    }

    CHECK_THROWS_AS(f.to_leaf({0.0, 0.5}), std::domain_error);
    CHECK_THROWS_AS(f.from_leaf({Cusp::C, -0.1, 0.0}), std::domain_error);
    CHECK_THROWS_AS(f.from_leaf({Cusp::C, 0.5, 1.001 * f.leaf_length(0.5)}),
                    std::domain_error);
  }

  // in the Long case the strip reaches beyond the base of the quadrilateral
  IdealSaccheriQuad q3 = build_quad(3.0);
  PartialFoliation f3 = foliate(q3);
  HPoint beyond = f3.from_leaf({Cusp::C, 0.05, 0.999 * f3.leaf_length(0.05)});
  CHECK(f3.foliated(beyond));
  CHECK_FALSE(quad_contains(q3, beyond));
  CHECK(extend_quad(q3).contains(beyond));
}

TEST_CASE("expansion map") {
  IdealSaccheriQuad q = build_quad(1.0);
  PartialFoliation f = foliate(q);
  ExpansionMap m = make_expansion(q, 1.7);
  CHECK(m.extended == false);
  CHECK(make_expansion(build_quad(3.0), 1.7).extended == true);
  CHECK_THROWS_AS(make_expansion(q, 0.5), std::invalid_argument);

  SUBCASE("identity on the unfoliated region, strip law on the leaves") {
    HPoint p0{0.1, 0.5};
    CHECK(expansion_apply(m, p0) == p0);
    CHECK(expansion_apply(make_expansion(q, 1.0), f.from_leaf({Cusp::C, 0.4, 0.1})) ==
          f.from_leaf({Cusp::C, 0.4, 0.1}));

    for (Cusp c : {Cusp::C, Cusp::D}) {
      for (double d : {0.2, 0.9, 1.6}) {
        double s = 0.4 * f.leaf_length(d);
        HPoint p = f.from_leaf({c, d, s});
        LeafCoords out = f.to_leaf(expansion_apply(m, p));
        CHECK(out.cusp == c);
        CHECK(std::abs(out.d - m.k * d) < 1e-10);
        CHECK(std::abs(out.s - s * std::exp((1 - m.k) * d)) < 1e-10);
      }
    }
  }

  SUBCASE("pointwise stretch equals k on the foliated region") {
    for (Cusp c : {Cusp::C, Cusp::D}) {
      for (double d : {0.3, 1.1}) {
        HPoint p = f.from_leaf({c, d, 0.3 * f.leaf_length(d)});
        CHECK(std::abs(oracles::expansion_stretch(m, p) - m.k) < 1e-5 * m.k);
      }
    }
    CHECK(std::abs(oracles::expansion_stretch(m, {0.1, 0.5}) - 1.0) < 1e-5);
  }

  SUBCASE("semigroup and reflection equivariance") {
    HPoint p = f.from_leaf({Cusp::C, 0.5, 0.2});
    HPoint two_steps = expansion_apply(make_expansion(q, 1.5),
                                       expansion_apply(make_expansion(q, 1.3), p));
    HPoint one_step = expansion_apply(make_expansion(q, 1.95), p);
    CHECK(std::abs(two_steps - one_step) < 1e-9);

    for (HPoint probe : {p, HPoint{0.1, 0.5}}) {
      CHECK(std::abs(expansion_apply(m, reflect(probe)) - reflect(expansion_apply(m, probe))) <
            1e-10);
    }

    double prev = 0.0;
    for (double k : {1.2, 1.5, 2.0, 3.0}) {
      double moved = hyp_distance(p, expansion_apply(make_expansion(q, k), p));
      CHECK(moved > prev);
      prev = moved;
    }
  }

  SUBCASE("domain errors") {
    CHECK_THROWS_AS(expansion_apply(m, {0.9, 0.05}), std::domain_error);
    CHECK_THROWS_AS(expansion_apply(m, {0.0, 0.1}), std::domain_error);  // below the base
    // the Long case extends the domain, so the same axis point is accepted
    ExpansionMap long_map = make_expansion(build_quad(3.0), 1.7);
    CHECK(expansion_apply(long_map, {0.0, 0.1}) == HPoint{0.0, 0.1});
  }
}

TEST_CASE("ideal triangle limit") {
  ExpansionMap m = ideal_triangle_expansion(2.0);
  CHECK(m.quad.rho == 0.0);
  CHECK(m.quad.x_bc == 1.0);
  CHECK_THROWS_AS(ideal_triangle_expansion(0.9), std::invalid_argument);

  // 0.05 + 0.4i sits between the legs, below both extreme horocycles
  HPoint p{0.05, 0.4};
  CHECK(expansion_apply(m, p) == p);
  CHECK_THROWS_AS(expansion_apply(m, {0.3, 0.1}), std::domain_error);  // inside a leg

  double sup = lipschitz_estimate(m, 50000, 11);
  CHECK(sup <= 2.0 * (1 + 1e-6));
  CHECK(sup >= 0.99 * 2.0);
}

TEST_CASE("sampled Lipschitz constant") {
  ExpansionMap m = make_expansion(build_quad(1.0), 2.0);
  double est = lipschitz_estimate(m, 100000, 42);
  CHECK(est <= 2.0 * (1 + 1e-6));
  CHECK(est >= 0.99 * 2.0);

  // deterministic in the seed and independent of the worker count
  CHECK(lipschitz_estimate(m, 100000, 42) == est);
  const char* prev = std::getenv("THURSTON_KIT_THREADS");
  std::string saved = prev ? prev : "";
  setenv("THURSTON_KIT_THREADS", "3", 1);
  double est3 = lipschitz_estimate(m, 100000, 42);
  if (prev)
    setenv("THURSTON_KIT_THREADS", saved.c_str(), 1);
  else
    unsetenv("THURSTON_KIT_THREADS");
  CHECK(est3 == est);

  CHECK_THROWS_AS(lipschitz_estimate(m, 0, 42), std::invalid_argument);
}
