// One-holed torus structures in trace coordinates: slope enumeration, curve and
// arc lengths, holonomy, Fenchel–Nielsen and doubled-hexagon constructors, and
// marking changes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thurston/hyp2.hpp"

namespace thurston {

// Traces (u, v, w) of the slope-(1,0), (0,1), (1,1) holonomies. Valid structures
// have u, v, w > 2 and commutator trace κ = u²+v²+w²−uvw−2 ≤ −2.
struct TraceCoords {
  double u, v, w;
};

struct Slope {
  std::int64_t p, q;

  friend bool operator==(const Slope&, const Slope&) = default;
  friend auto operator<=>(const Slope&, const Slope&) = default;  // lexicographic
};

struct FNCoords {
  double l;    // length of the slope-(0,1) curve
  double tau;  // twist, in length units along that curve
  double b;    // boundary length
};

double commutator_trace(const TraceCoords& h);
bool coords_valid(const TraceCoords& h);
TraceCoords make_coords(double u, double v, double w);  // throws on invalid triples

double boundary_length(const TraceCoords& h);

// (A, B) with tr A = u, tr B = v, tr AB = w; A diagonal with attracting fixed
// point at ∞, B symmetric positive — one fixed section of the conjugation orbit.
std::pair<Isometry, Isometry> holonomy(const TraceCoords& h);

Slope canonical_slope(std::int64_t p, std::int64_t q);  // q > 0, or (1,0); throws on (0,0) / non-coprime

// Farey mediant tree to `depth` plus the base slopes (1,0), (0,1): the order is
// fixed (base pair, then per level: positive subtree left-to-right, then negative),
// and every slope appears exactly once.
std::vector<Slope> enumerate_slopes(int depth);

// All per-slope data the metrics need, evaluated in one pass over the tree.
// Lengths and arcs follow enumerate_slopes(depth) order.
struct SlopeTable {
  std::vector<Slope> slopes;
  std::vector<int> level;          // -1 for the two base slopes
  std::vector<double> log_trace;   // traces kept in log space: X=10³ tori overflow doubles by depth 7
  std::vector<double> curve_len;
  std::vector<double> arc_len;     // empty unless arcs were requested
};

SlopeTable evaluate_slopes(const TraceCoords& h, int depth, bool with_arcs);

double slope_trace(const TraceCoords& h, const Slope& s);      // directed Stern–Brocot descent
double log_slope_trace(const TraceCoords& h, const Slope& s);  // same walk in log space
double curve_length(const TraceCoords& h, const Slope& s);

// Length of the orthogeodesic arc dual to slope s (the arc missing γ_{p,q}),
// from the common perpendicular between the boundary axis and its image under
// the slope word. The perpendicular projects onto the doubled arc, so half of
// it is the arc; ratios — and hence the arc metric — are blind to the factor.
double arc_length(const TraceCoords& h, const Slope& s);

double thin_length_approx(const Slope& s, double la, double lb);

TraceCoords from_fenchel_nielsen(const FNCoords& fn);
FNCoords to_fenchel_nielsen(const TraceCoords& h);
TraceCoords from_doubled_hexagons(double X, int variant);

// Integer marking change g ∈ GL(2,Z) acting on slopes; columns are the images
// of (1,0) and (0,1).
struct SlopeBasis {
  std::int64_t m[2][2];

  Slope apply(const Slope& s) const;
  SlopeBasis inverse() const;
  static SlopeBasis identity();
};

// g with g·(0,1) = s: after change_marking(h, g) the curve the old marking
// called s is measured by the new second basis slope (0,1).
SlopeBasis reduction_to_second(const Slope& s);

// Coordinates of the same structure in the marking twisted by g: the new slope σ
// measures what the old marking called g·σ. Computed by three directed trace
// descents, which stay accurate where chained inverse move maps cancel badly.
TraceCoords change_marking(const TraceCoords& h, const SlopeBasis& g);

// Structure literals: "trace:u,v,w", "fn:l,tau,b", "hex:X,variant".
TraceCoords parse_structure(const std::string& text);
std::string format_structure(const TraceCoords& h);

}  // namespace thurston
