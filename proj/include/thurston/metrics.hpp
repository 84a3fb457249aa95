#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "thurston/torus.hpp"

// Depth-controlled suprema defining the curve metric K and the arc metric A,
// together with the variational machinery for partial stretch paths: the
// one-parameter twist families that realize a prescribed stretch factor, the
// envelope slices locating their extremal twists, and property suites for the
// metric axioms.
//
// Both metrics are suprema of log length-ratios over the slope enumeration,
// evaluated at a finite Stern–Brocot depth.  The supremum restricted to depth
// d is monotone in d, so each result carries its per-depth history; values
// are quoted in log-length units.

namespace thurston {

struct MetricResult {
  double value;        // log-sup at the final depth
  Slope argmax_slope;  // maximizing slope (lexicographic tie-break)
  int depth;
  std::vector<double> history;  // running maxima, one entry per depth 0..depth

  nlohmann::json to_json() const;
};

// log(curve_length(h1, s) / curve_length(h0, s)).
double curve_ratio(const TraceCoords& h0, const TraceCoords& h1, Slope s);

// Curve metric: max of curve_ratio over enumerate_slopes(depth).  Both
// structures must agree in boundary length to 1e-9 — the supremum is only a
// metric on a fixed-boundary slice — else std::domain_error.
MetricResult curve_metric(const TraceCoords& h0, const TraceCoords& h1,
                          int depth);

// Arc metric: the same supremum with the dual arcs joined to the competitor
// family, i.e. per slope the larger of the arc and curve log-ratios.  The
// containment makes A >= K exactly at every depth.
MetricResult arc_metric(const TraceCoords& h0, const TraceCoords& h1,
                        int depth);

// Argmax slope plus a stability verdict: stable means the argmax did not move
// over the last three depth increments and no second slope ties it within
// 1e-12.  A persistently wandering argmax is the finite-depth shadow of an
// irrational maximizing lamination.
struct SlopeStability {
  Slope argmax;
  bool stable;
};

SlopeStability max_ratio_slope(const TraceCoords& h0, const TraceCoords& h1,
                               int depth);

// The constrained twist family through h0 for stretch factor e^t along slope
// s: after a basis change taking s to (0,1), Fenchel-Nielsen coordinates fix
// the boundary length and scale the length of s by e^t, leaving the twist
// free.  Members are produced in the s-adapted marking by at(); callers that
// need the original marking use at_original().
struct StretchFamily {
  TraceCoords h0;     // base structure, original marking
  Slope s;            // stretched slope
  double t;           // stretch exponent (>= 0)
  SlopeBasis basis;   // g with g*(0,1) = s
  TraceCoords base;   // h0 in the s-adapted marking
  FNCoords fn0;       // Fenchel-Nielsen coordinates of base
  double b;           // common boundary length

  TraceCoords at(double tau) const;           // s-adapted marking
  TraceCoords at_original(double tau) const;  // original marking
  double tau0() const { return fn0.tau; }
};

StretchFamily stretch_family(const TraceCoords& h0, Slope s, double t);

// One slice of the envelope between h0 and the stretch family at time t: the
// connected twist interval on which K(h0, h(tau)) stays within tol of its
// floor t.  The endpoints approximate the two partial stretch paths through
// the extremal laminations.
struct EnvelopeSlice {
  double t;
  double tol;
  double tau_minus;  // leftmost twist with K <= t + tol
  double tau_plus;   // rightmost twist with K <= t + tol
  double tau_min;    // located minimizer
  double min_value;  // K(h0, h(tau_min)); must equal t within tol
};

// Bracketing scan of 64 twist samples refined by golden section (ties toward
// smaller tau), then bisection for the interval endpoints.  Throws
// std::runtime_error when the located minimum exceeds t + tol, which signals
// insufficient slope depth.
EnvelopeSlice stretch_envelope(const TraceCoords& h0, Slope s, double t,
                               int depth, double tol);

enum class EnvelopeSide { Plus, Minus };

// The structure at the chosen envelope endpoint, in the original marking;
// t = 0 returns h0 itself.
TraceCoords partial_stretch_point(const TraceCoords& h0, Slope s, double t,
                                  EnvelopeSide side, int depth, double tol);

// Geodesic-ray check along one side of the envelope: computes h_{t_i} for the
// given times and verifies K(h_{t_i}, h_{t_j}) = t_j - t_i for all i < j.
struct GeodesicPair {
  std::size_t i, j;
  double expected;  // t_j - t_i
  double measured;  // K(h_{t_i}, h_{t_j})
  double residual;  // |measured - expected|
};

struct GeodesicReport {
  std::vector<TraceCoords> points;  // h_{t_i}, original marking
  std::vector<GeodesicPair> pairs;  // every i < j, input order
  double worst_residual;
  bool ok;  // all residuals <= tol
};

GeodesicReport geodesic_check(const TraceCoords& h0, Slope s,
                              EnvelopeSide side,
                              const std::vector<double>& times, int depth,
                              double tol);

// Randomized metric-axiom audit on the fixed-boundary slice: positivity of K
// on distinct pairs (distinct = Fenchel-Nielsen separation > 1e-3), the
// triangle inequality K(x,z) <= K(x,y) + K(y,z) up to the declared
// depth-truncation slack, and a scan for asymmetric pairs.
struct AxiomReport {
  std::size_t triples;
  std::size_t distinct_pairs;        // ordered pairs tested for positivity
  double min_distinct_k;             // smallest K among them
  std::size_t positivity_violations; // K <= 0 on a distinct pair
  std::size_t triangle_checks;
  std::size_t triangle_violations;   // excess beyond slack
  double worst_triangle_excess;      // max of K(x,z) - K(x,y) - K(y,z)
  double slack;
  bool asymmetric_found;             // some pair with K(x,y) != K(y,x)
  double asym_gap;                   // largest |K(x,y) - K(y,x)| observed
  bool ok;

  nlohmann::json to_json() const;
};

AxiomReport metric_axiom_suite(std::size_t samples, double b, int depth,
                               std::uint64_t seed);

// Random same-boundary structure used by the audit and the CLI experiments:
// draw index i of the stream determined by seed.
TraceCoords random_structure(double b, std::uint64_t seed, std::uint64_t index,
                             FNCoords* fn_out = nullptr);

}  // namespace thurston
