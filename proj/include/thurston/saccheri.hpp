#pragma once

#include <cstddef>
#include <cstdint>

#include "thurston/hyp2.hpp"

// Ideal Saccheri quadrilaterals, their partial horocyclic foliations, and the
// k-expansion maps they carry.
//
// An ideal Saccheri quadrilateral has a finite base AB, two infinite legs
// meeting the base at right angles, and two ideal vertices C, D joined by the
// far side CD.  Its isometry type is determined by the base length a, and we
// always work with the canonical embedding:
//
//   * symmetry axis       = the imaginary axis,
//   * ideal vertices      = C at +1, D at -1,
//   * side CD             = the unit half-circle,
//   * side AB             = the arc of |z| = rho between A (Re < 0) and
//                           B (Re > 0), where rho = exp(-h) and
//                           h = arcsinh(1/sinh(a/2)) is the distance from AB
//                           to CD along the axis,
//   * legs BC, DA         = half-circles with feet (rho^2, 1) and (-1, -rho^2).
//
// Each cusp carries a conformal strip chart that straightens its horocyclic
// leaves.  For the cusp at C the chart is w = (1+z)/(1-z); it sends C to
// infinity, CD to the vertical line x = 0, the leg BC to x = X with
// X = (1+rho^2)/(1-rho^2), and the extreme horocycle to the horizontal line
// y = 1.  The cusp at D uses w = (z-1)/(z+1) followed by x -> -x, which by the
// reflection symmetry produces the *same* strip {0 <= x <= X, y >= 1}.  In
// either strip the leaf at chart height y has hyperbolic length X/y, lies at
// distance log y from the extreme leaf, and is parametrised by arclength
// s = x/y starting from its endpoint on CD.

namespace thurston {

// Trichotomy of the partial foliation: the critical base length is
// 2 arcsinh(1), where the extreme horocycles become tangent to the base.
enum class FoliationCase { Short, Critical, Long };

// The two cusps, named by their ideal vertex in the canonical embedding.
enum class Cusp { C, D };

// Leaf coordinates of a foliated point: which cusp region it lies in, the
// distance d >= 0 of its leaf from the unfoliated region, and its arclength
// position s >= 0 along the leaf measured from the leaf's endpoint on CD.
struct LeafCoords {
  Cusp cusp;
  double d;
  double s;
};

struct IdealSaccheriQuad {
  double base_length;    // hyperbolic length of the base AB
  double rho;            // Euclidean radius of the circle carrying AB
  double x_bc;           // strip width (1+rho^2)/(1-rho^2)
  HPoint a_vertex;       // finite vertex A (Re < 0)
  HPoint b_vertex;       // finite vertex B (Re > 0)
  IdealPoint c_vertex;   // ideal vertex C = +1
  IdealPoint d_vertex;   // ideal vertex D = -1
  Geodesic side_ab;      // geodesic carrying the base
  Geodesic side_bc;      // leg from B to C
  Geodesic side_cd;      // far side between the ideal vertices
  Geodesic side_da;      // leg from D to A
};

// Canonical quadrilateral with base length a > 0.
IdealSaccheriQuad build_quad(double a);

// Trichotomy of the base length against 2 arcsinh(1).
FoliationCase classify(const IdealSaccheriQuad& q);

// Membership in the closed quadrilateral itself (small boundary slack).
bool quad_contains(const IdealSaccheriQuad& q, HPoint p);

// The complete convex domain bordered by CD: drop the base and extend the two
// legs to full geodesics.  The Long case computes its foliation here.
struct ExtendedDomain {
  double rho;
  bool contains(HPoint p) const;
};

ExtendedDomain extend_quad(const IdealSaccheriQuad& q);

// The unique reflection-symmetric partial foliation of the two cusp regions
// by horocyclic arcs.  The two extreme leaves are mutually tangent at the
// anchor point, which sits on CD at the symmetry axis.
struct PartialFoliation {
  HPoint anchor;            // tangency point of the extreme leaves
  HPoint extreme_center_c;  // Euclidean center of the extreme horocycle at C
  HPoint extreme_center_d;  // Euclidean center of the extreme horocycle at D
  double extreme_radius;    // common Euclidean radius of the extreme leaves
  double x_bc;              // strip width of the cusp charts
  bool extended;            // leaves live in the extended domain (Long case)

  // Hyperbolic length of the leaf at distance d from the unfoliated region.
  double leaf_length(double d) const;

  // True when p lies in one of the two foliated cusp regions.
  bool foliated(HPoint p) const;

  // Chart in both directions; to_leaf throws std::domain_error on points of
  // the unfoliated region, from_leaf on coordinates outside the strip.
  LeafCoords to_leaf(HPoint p) const;
  HPoint from_leaf(const LeafCoords& lc) const;
};

PartialFoliation foliate(const IdealSaccheriQuad& q);

// The k-expansion map: identity on the unfoliated region; the leaf at
// distance d is pushed to the leaf at distance k*d, linearly in arclength.
// In a cusp strip chart this reads (x, y) -> (x, y^k); the principal
// stretches of that map are k (along the foliation) and y^{1-k} <= 1 (along
// the leaves), so the Lipschitz constant is exactly k.
struct ExpansionMap {
  double k;
  IdealSaccheriQuad quad;
  bool extended;  // domain is the extension rather than the quadrilateral
};

// k >= 1 required; the domain extends automatically in the Long case.
ExpansionMap make_expansion(const IdealSaccheriQuad& q, double k);

// Degenerate limit a -> 0: the quadrilateral collapses onto the ideal
// triangle with vertices -1, 0, +1 and the map becomes the classical
// two-cusp expansion of an ideal triangle.  Exposed for tests.
ExpansionMap ideal_triangle_expansion(double k);

// Apply the map; throws std::domain_error when p is outside the domain.
HPoint expansion_apply(const ExpansionMap& m, HPoint p);

// Sampled supremum of d(f p, f q)/d(p, q) over n_pairs point pairs drawn
// deterministically from the seed: even-indexed pairs are independent global
// samples, odd-indexed pairs are central offsets of 1e-6 in chart
// coordinates.  Embarrassingly parallel; the result is identical for every
// worker count.
double lipschitz_estimate(const ExpansionMap& m, std::size_t n_pairs,
                          std::uint64_t seed);

}  // namespace thurston
