#include "thurston/saccheri.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "thurston/parallel.hpp"

namespace thurston {
namespace {

// Boundary slack for membership tests; every Euclidean quantity of the
// canonical embedding is O(1), so an absolute tolerance is appropriate.
constexpr double kDomainTol = 1e-9;

// Strip chart at cusp C = +1 and its inverse.  CD lands on x = 0, the leg BC
// on x = X, the extreme horocycle on y = 1.
std::complex<double> chart_c(HPoint z) { return (1.0 + z) / (1.0 - z); }
HPoint chart_c_inv(std::complex<double> w) { return (w - 1.0) / (w + 1.0); }

// Strip chart at cusp D = -1, flipped so that it covers the same strip with
// x = 0 again on CD.  The reflection z -> -conj(z) exchanges the two charts
// coordinate-for-coordinate.
std::complex<double> chart_d(HPoint z) {
  std::complex<double> w = (z - 1.0) / (z + 1.0);
  return {-w.real(), w.imag()};
}
HPoint chart_d_inv(std::complex<double> w) {
  std::complex<double> wd(-w.real(), w.imag());
  return (1.0 + wd) / (1.0 - wd);
}

std::complex<double> chart(Cusp c, HPoint z) {
  return c == Cusp::C ? chart_c(z) : chart_d(z);
}
HPoint chart_inv(Cusp c, std::complex<double> w) {
  return c == Cusp::C ? chart_c_inv(w) : chart_d_inv(w);
}

// Both legs lie on Euclidean half-circles orthogonal to the unit circle:
// the one through B has feet rho^2 and 1, its mirror has feet -1 and -rho^2.
// The (extended) domain is inside the unit circle and outside both.
bool outside_legs(double rho, HPoint p) {
  double c = (1.0 + rho * rho) / 2.0;
  double r = (1.0 - rho * rho) / 2.0;
  return std::abs(p - HPoint(c, 0.0)) >= r - kDomainTol &&
         std::abs(p - HPoint(-c, 0.0)) >= r - kDomainTol;
}

bool in_domain(const ExpansionMap& m, HPoint p) {
  if (!(p.imag() > 0.0)) return false;
  if (std::abs(p) > 1.0 + kDomainTol) return false;
  if (!m.extended && std::abs(p) < m.quad.rho - kDomainTol) return false;
  return outside_legs(m.quad.rho, p);
}

}  // namespace

IdealSaccheriQuad build_quad(double a) {
  if (!(a > 0.0))
    throw std::invalid_argument("build_quad: base length must be positive");
  // Distance from the base to CD along the symmetry axis; the Saccheri
  // relation sinh(h) sinh(a/2) = 1 pins the base circle radius rho = e^{-h}.
  double h = std::asinh(1.0 / std::sinh(a / 2.0));
  double rho = std::exp(-h);
  double r2 = rho * rho;
  HPoint b_v(2.0 * r2 / (1.0 + r2), rho * (1.0 - r2) / (1.0 + r2));
  HPoint a_v(-b_v.real(), b_v.imag());
  return IdealSaccheriQuad{
      a,
      rho,
      (1.0 + r2) / (1.0 - r2),
      a_v,
      b_v,
      IdealPoint(1.0, 1.0),
      IdealPoint(-1.0, 1.0),
      Geodesic::from_feet(-rho, rho),
      Geodesic::from_feet(r2, 1.0),
      Geodesic::from_feet(-1.0, 1.0),
      Geodesic::from_feet(-1.0, -r2),
  };
}

FoliationCase classify(const IdealSaccheriQuad& q) {
  double critical = 2.0 * std::asinh(1.0);
  if (q.base_length < critical) return FoliationCase::Short;
  if (q.base_length > critical) return FoliationCase::Long;
  return FoliationCase::Critical;
}

bool quad_contains(const IdealSaccheriQuad& q, HPoint p) {
  if (!(p.imag() > 0.0)) return false;
  double r = std::abs(p);
  return r <= 1.0 + kDomainTol && r >= q.rho - kDomainTol &&
         outside_legs(q.rho, p);
}

bool ExtendedDomain::contains(HPoint p) const {
  return p.imag() > 0.0 && std::abs(p) <= 1.0 + kDomainTol &&
         outside_legs(rho, p);
}

ExtendedDomain extend_quad(const IdealSaccheriQuad& q) {
  return ExtendedDomain{q.rho};
}

double PartialFoliation::leaf_length(double d) const {
  return x_bc * std::exp(-d);
}

bool PartialFoliation::foliated(HPoint p) const {
  return chart_c(p).imag() >= 1.0 || chart_d(p).imag() >= 1.0;
}

LeafCoords PartialFoliation::to_leaf(HPoint p) const {
  for (Cusp c : {Cusp::C, Cusp::D}) {
    std::complex<double> w = chart(c, p);
    if (w.imag() < 1.0) continue;
    if (w.real() < -kDomainTol || w.real() > x_bc + kDomainTol)
      throw std::domain_error("to_leaf: point outside the cusp strip");
    double x = std::min(std::max(w.real(), 0.0), x_bc);
    return LeafCoords{c, std::log(w.imag()), x / w.imag()};
  }
  throw std::domain_error("to_leaf: point lies in the unfoliated region");
}

HPoint PartialFoliation::from_leaf(const LeafCoords& lc) const {
  if (lc.d < -kDomainTol || lc.s < -kDomainTol)
    throw std::domain_error("from_leaf: negative leaf coordinates");
  double y = std::exp(std::max(lc.d, 0.0));
  double x = std::max(lc.s, 0.0) * y;
  if (x > x_bc + kDomainTol)
    throw std::domain_error("from_leaf: arclength exceeds the leaf length");
  return chart_inv(lc.cusp, {std::min(x, x_bc), y});
}

PartialFoliation foliate(const IdealSaccheriQuad& q) {
  // The extreme horocycles are the circles tangent to the real axis at +-1
  // passing through i; they are tangent to each other exactly there, which
  // puts the anchor on CD at the symmetry axis for every base length.
  return PartialFoliation{
      HPoint(0.0, 1.0), HPoint(1.0, 1.0), HPoint(-1.0, 1.0), 1.0, q.x_bc,
      classify(q) == FoliationCase::Long,
  };
}

ExpansionMap make_expansion(const IdealSaccheriQuad& q, double k) {
  if (!(k >= 1.0))
    throw std::invalid_argument("make_expansion: factor must be >= 1");
  return ExpansionMap{k, q, classify(q) == FoliationCase::Long};
}

ExpansionMap ideal_triangle_expansion(double k) {
  if (!(k >= 1.0))
    throw std::invalid_argument("ideal_triangle_expansion: factor must be >= 1");
  // rho -> 0 limit: the base collapses onto the ideal vertex 0, the legs
  // become the geodesics (0,1) and (-1,0), and the domain is the ideal
  // triangle with vertices -1, 0, +1.  The base "side" is degenerate.
  IdealSaccheriQuad tri{
      0.0,
      0.0,
      1.0,
      HPoint(0.0, 0.0),
      HPoint(0.0, 0.0),
      IdealPoint(1.0, 1.0),
      IdealPoint(-1.0, 1.0),
      Geodesic{IdealPoint(0.0, 1.0), IdealPoint(0.0, 1.0)},
      Geodesic::from_feet(0.0, 1.0),
      Geodesic::from_feet(-1.0, 1.0),
      Geodesic::from_feet(-1.0, 0.0),
  };
  return ExpansionMap{k, tri, false};
}

HPoint expansion_apply(const ExpansionMap& m, HPoint p) {
  if (!in_domain(m, p))
    throw std::domain_error("expansion_apply: point outside the map's domain");
  if (m.k == 1.0) return p;
  // In either strip the map is (x, y) -> (x, y^k): the leaf at distance
  // d = log y moves to distance k*d, and the arclength position s = x/y
  // rescales by the leaf-length ratio y^{1-k}, which fixes x.  The flip
  // between the D-chart and its unified form only negates x, so the real
  // part can be kept as-is in both branches.
  std::complex<double> w = chart_c(p);
  if (w.imag() >= 1.0)
    return chart_c_inv({w.real(), std::pow(w.imag(), m.k)});
  w = (p - 1.0) / (p + 1.0);
  if (w.imag() >= 1.0) {
    std::complex<double> moved(w.real(), std::pow(w.imag(), m.k));
    return (1.0 + moved) / (1.0 - moved);
  }
  return p;
}

namespace {

// Draw one domain point.  Half the draws land in a cusp strip (uniform in x,
// log-uniform in chart height over [1, e^3]); the rest target the unfoliated
// region by rejection from a box, falling back to a symmetry-axis point.
HPoint sample_point(const ExpansionMap& m, SplitMix64& rng) {
  if (rng.uniform() < 0.5) {
    Cusp c = rng.uniform() < 0.5 ? Cusp::C : Cusp::D;
    double x = rng.uniform(0.0, m.quad.x_bc);
    double y = std::exp(rng.uniform(0.0, 3.0));
    return chart_inv(c, {x, y});
  }
  for (int tries = 0; tries < 200; ++tries) {
    HPoint z(rng.uniform(-1.0, 1.0), rng.uniform(0.05, 1.0));
    if (!in_domain(m, z)) continue;
    if (chart_c(z).imag() >= 1.0 || chart_d(z).imag() >= 1.0) continue;
    return z;
  }
  return HPoint(0.0, std::sqrt(std::max(m.quad.rho, 1e-4)));
}

// Offset p by (dx, dy) in the chart coordinates of the region it lies in;
// unfoliated points use the chart of the nearer cusp, where the same strip
// coordinates remain conformal below y = 1.
HPoint chart_offset(const ExpansionMap& m, HPoint p, double dx, double dy) {
  Cusp c;
  std::complex<double> w_c = chart_c(p), w_d = chart_d(p);
  if (w_c.imag() >= 1.0)
    c = Cusp::C;
  else if (w_d.imag() >= 1.0)
    c = Cusp::D;
  else
    c = p.real() >= 0.0 ? Cusp::C : Cusp::D;
  std::complex<double> w = (c == Cusp::C) ? w_c : w_d;
  std::complex<double> moved(w.real() + dx, w.imag() + dy);
  HPoint q = chart_inv(c, moved);
  if (in_domain(m, q)) return q;
  q = chart_inv(c, {w.real() - dx, w.imag() - dy});
  if (in_domain(m, q)) return q;
  return p;  // cornered; the caller skips zero-distance pairs
}

}  // namespace

double lipschitz_estimate(const ExpansionMap& m, std::size_t n_pairs,
                          std::uint64_t seed) {
  if (n_pairs < 1)
    throw std::invalid_argument("lipschitz_estimate: need at least one pair");
  constexpr std::size_t kBlock = 4096;
  std::size_t n_blocks = (n_pairs + kBlock - 1) / kBlock;
  std::vector<double> block_max(n_blocks, 0.0);
  parallel_blocks(n_pairs, kBlock,
                  [&](std::size_t block, std::size_t begin, std::size_t end) {
                    double best = 0.0;
                    for (std::size_t i = begin; i < end; ++i) {
                      SplitMix64 rng = item_rng(seed, i);
                      HPoint p = sample_point(m, rng);
                      HPoint q;
                      if (i % 2 == 0) {
                        q = sample_point(m, rng);
                      } else {
                        double phi =
                            rng.uniform(0.0, 2.0 * std::numbers::pi_v<double>);
                        q = chart_offset(m, p, 1e-6 * std::cos(phi),
                                         1e-6 * std::sin(phi));
                      }
                      double dpq = hyp_distance(p, q);
                      if (dpq < 1e-14) continue;
                      double r = hyp_distance(expansion_apply(m, p),
                                              expansion_apply(m, q)) /
                                 dpq;
                      best = std::max(best, r);
                    }
                    block_max[block] = best;
                  });
  double sup = 0.0;
  for (double b : block_max) sup = std::max(sup, b);
  return sup;
}

}  // namespace thurston
