// Upper half-plane model: points, Möbius action, geodesics by ideal endpoints,
// translation lengths, common perpendiculars, right-angled hexagon trigonometry.
#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace thurston {

using HPoint = std::complex<double>;       // Im > 0
using Isometry = Eigen::Matrix2d;          // real, det > 0, acts as z ↦ (az+b)/(cz+d)
using IdealPoint = Eigen::Vector2d;        // homogeneous (x:1); (1:0) is ∞

inline constexpr double kAlgebraicTol = 1e-10;

// Exact inverse for det-1 matrices; avoids LU on near-rank-1 holonomies whose
// entries dwarf the unit determinant.
template <typename D>
Eigen::Matrix2d sl2_inverse(const Eigen::MatrixBase<D>& m) {
  Eigen::Matrix2d r;
  r << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return r;
}

// Sign convention: trace ≥ 0 whenever trace ≠ 0 (the PSL(2,R) lift used throughout).
template <typename D>
Eigen::Matrix2d sign_normalized(const Eigen::MatrixBase<D>& m) {
  double t = m(0, 0) + m(1, 1);
  return (t < 0.0) ? Eigen::Matrix2d(-m) : Eigen::Matrix2d(m);
}

inline double hyp_distance(const HPoint& p, const HPoint& q) {
  double y1 = p.imag(), y2 = q.imag();
  if (!(y1 > 0.0) || !(y2 > 0.0)) throw std::domain_error("hyp_distance: point not in upper half-plane");
  // sinh(d/2) = |p-q| / (2 sqrt(y1 y2)); stabler than the acosh form for near pairs
  return 2.0 * std::asinh(std::abs(p - q) / (2.0 * std::sqrt(y1 * y2)));
}

template <typename D>
HPoint mobius_apply(const Eigen::MatrixBase<D>& m, const HPoint& z) {
  HPoint num = m(0, 0) * z + HPoint(m(0, 1), 0.0);
  HPoint den = m(1, 0) * z + HPoint(m(1, 1), 0.0);
  HPoint w = num / den;
  if (!(w.imag() > 0.0) || !std::isfinite(w.imag()) || !std::isfinite(w.real()))
    throw std::domain_error("mobius_apply: ill-conditioned matrix pushed image out of the half-plane");
  return w;
}

// Boundary action on homogeneous ideal points, renormalized to max-abs 1.
template <typename D>
IdealPoint mobius_ideal(const Eigen::MatrixBase<D>& m, const IdealPoint& p) {
  IdealPoint q = m * p;
  double n = q.template lpNorm<Eigen::Infinity>();
  if (!(n > 0.0)) throw std::domain_error("mobius_ideal: zero image");
  return q / n;
}

template <typename D>
double translation_length(const Eigen::MatrixBase<D>& m) {
  double t = std::abs(m(0, 0) + m(1, 1));
  if (!(t > 2.0)) throw std::domain_error("translation_length: non-hyperbolic element (|trace| <= 2)");
  return 2.0 * std::acosh(t / 2.0);
}

// Geodesic as an unordered pair of distinct ideal endpoints.
struct Geodesic {
  IdealPoint e1, e2;

  static Geodesic from_feet(double x1, double x2) {
    if (!(x1 != x2)) throw std::invalid_argument("Geodesic: coincident feet");
    return {IdealPoint(x1, 1.0), IdealPoint(x2, 1.0)};
  }
  static Geodesic vertical(double x) { return {IdealPoint(x, 1.0), IdealPoint(1.0, 0.0)}; }
};

// Fixed points of a hyperbolic isometry: roots of c x² + (d−a) x − b = 0,
// paired stably (q-formula) so neither root loses precision.
template <typename D>
Geodesic axis(const Eigen::MatrixBase<D>& m) {
  double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  if (!(std::abs(a + d) > 2.0)) throw std::domain_error("axis: non-hyperbolic element");
  if (std::abs(c) < 1e-300 * (std::abs(a) + std::abs(d) + 1.0)) {
    // diagonal-ish: fixed points ∞ and b/(a−d)
    return {IdealPoint(1.0, 0.0), IdealPoint(b / (a - d), 1.0)};
  }
  double B = d - a, C = -b;
  double disc = B * B - 4.0 * c * C;
  if (!(disc > 0.0)) throw std::domain_error("axis: no real fixed points");
  double q = (B >= 0.0) ? -0.5 * (B + std::sqrt(disc)) : -0.5 * (B - std::sqrt(disc));
  return {IdealPoint(q / c, 1.0), IdealPoint(C / q, 1.0)};
}

inline double bracket(const IdealPoint& u, const IdealPoint& v) {
  return u.x() * v.y() - u.y() * v.x();
}

// Perpendicular distance between disjoint geodesics from the excess e = λ − 1 of the
// endpoint cross-ratio, passed as (sign, log |e|). Splitting e out lets callers with
// exact log-determinant bookkeeping stay accurate when λ is within 1e-300 of 1.
inline double perp_length_from_excess(double sign_e, double log_abs_e) {
  if (sign_e > 0.0) {
    // λ > 1: d = 2 asinh(1/√e)
    if (log_abs_e < -600.0) return 2.0 * std::numbers::ln2_v<double> - log_abs_e;
    return 2.0 * std::asinh(std::exp(-0.5 * log_abs_e));
  }
  // λ < 1 needs λ > 0 ⟺ e > −1: d = 2 asinh(√(λ/(1−λ))) = 2 asinh(√(expm1(−log e)))
  if (!(log_abs_e < 0.0)) throw std::domain_error("common perpendicular: geodesics cross or share an endpoint");
  return 2.0 * std::asinh(std::sqrt(std::expm1(-log_abs_e)));
}

inline double common_perpendicular_length(const Geodesic& g1, const Geodesic& g2) {
  double b14 = bracket(g1.e1, g2.e2), b32 = bracket(g1.e2, g2.e1);
  if (b14 == 0.0 || b32 == 0.0) throw std::domain_error("common perpendicular: shared endpoint");
  // λ − 1 via the Plücker identity br(p1,p2)br(q1,q2) − br(p1,q2)br(q1,p2) = br(p1,q1)br(p2,q2)
  double e = (bracket(g1.e1, g1.e2) * bracket(g2.e1, g2.e2)) / (b14 * b32);
  if (e == 0.0) throw std::domain_error("common perpendicular: degenerate endpoints");
  return perp_length_from_excess(e > 0.0 ? 1.0 : -1.0, std::log(std::abs(e)));
}

// Right-angled hexagon with alternating sides (a1, a2, a3): returns the side lying
// between a1 and a2 (opposite a3), from
//   cosh(a3) = sinh(a1) sinh(a2) cosh(b3) − cosh(a1) cosh(a2).
inline double hexagon_side(double a1, double a2, double a3) {
  if (!(a1 > 0.0 && a2 > 0.0 && a3 > 0.0)) throw std::invalid_argument("hexagon_side: sides must be positive");
  double ch = (std::cosh(a3) + std::cosh(a1) * std::cosh(a2)) / (std::sinh(a1) * std::sinh(a2));
  if (!(ch >= 1.0)) throw std::domain_error("hexagon_side: no hexagon with these alternating sides");
  return std::acosh(ch);
}

// 2 acosh(exp(L)/2) for L = log of a trace; exact tail for L past the exp overflow knee.
inline double length_from_log_trace(double L) {
  if (L < 30.0) return 2.0 * std::acosh(std::exp(L) / 2.0);
  return 2.0 * (L - std::numbers::ln2_v<double> + std::log1p(std::sqrt(1.0 - 4.0 * std::exp(-2.0 * L))));
}

// Translation by ℓ along the imaginary axis.
inline Isometry axis_translation(double l) {
  Isometry m;
  m << std::exp(l / 2.0), 0.0, 0.0, std::exp(-l / 2.0);
  return m;
}

// Translation by d along the geodesic (−1, 1) through i.
inline Isometry cross_translation(double d) {
  Isometry m;
  m << std::cosh(d / 2.0), std::sinh(d / 2.0), std::sinh(d / 2.0), std::cosh(d / 2.0);
  return m;
}

}  // namespace thurston
