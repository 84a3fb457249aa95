#include "thurston/torus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <utility>

namespace thurston {
namespace {

// Mediant-step trace recursion in log space: t_m = t_l t_r − t_p becomes
// L_m = L_l + L_r + log1p(−exp(L_p − L_l − L_r)).
double log_mediant(double Ll, double Lr, double Lp) {
  return Ll + Lr + std::log1p(-std::exp(Lp - Ll - Lr));
}

struct Node {
  Slope sl, sr;          // Farey-neighbor frame of this subtree
  double Ll, Lr, Lp;     // log traces of sl, sr, and the difference slope
};

// log(cosh x) and log(sinh x) without overflow for large x.
double log_cosh(double x) {
  x = std::abs(x);
  if (x > 30.0) return x - std::log(2.0) + std::log1p(std::exp(-2.0 * x));
  return std::log(std::cosh(x));
}

double log_sinh(double x) {
  if (x > 30.0) return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x));
  return std::log(std::sinh(x));
}

// asinh(exp(L)) without forming exp(L); the dropped tails are below 1 ulp.
double asinh_exp(double L) {
  if (L > 30.0) return L + std::log(2.0);
  if (L < -30.0) return std::exp(L);
  return std::asinh(std::exp(L));
}

}  // namespace

double commutator_trace(const TraceCoords& h) {
  return h.u * h.u + h.v * h.v + h.w * h.w - h.u * h.v * h.w - 2.0;
}

bool coords_valid(const TraceCoords& h) {
  return h.u > 2.0 && h.v > 2.0 && h.w > 2.0 && commutator_trace(h) <= -2.0 &&
         std::isfinite(h.u) && std::isfinite(h.v) && std::isfinite(h.w);
}

TraceCoords make_coords(double u, double v, double w) {
  TraceCoords h{u, v, w};
  if (!coords_valid(h)) throw std::invalid_argument("TraceCoords: need u,v,w > 2 and commutator trace <= -2");
  return h;
}

double boundary_length(const TraceCoords& h) {
  double k = commutator_trace(h);
  if (k >= -2.0) return 0.0;  // cusp
  return 2.0 * std::acosh(-k / 2.0);
}

std::pair<Isometry, Isometry> holonomy(const TraceCoords& h) {
  if (!coords_valid(h)) throw std::invalid_argument("holonomy: invalid coords");
  double lam = (h.u + std::sqrt(h.u * h.u - 4.0)) / 2.0;
  Isometry A;
  A << lam, 0.0, 0.0, 1.0 / lam;
  // B = [[p, q], [q, s]]: tr B = v and tr AB = w pin p and s; det 1 pins q.
  double p = (h.w - h.v / lam) / (lam - 1.0 / lam);
  double s = h.v - p;
  double ps1 = p * s - 1.0;
  if (!(ps1 > 0.0)) throw std::domain_error("holonomy: no real symmetric section (ps <= 1)");
  double q = std::sqrt(ps1);
  Isometry B;
  B << p, q, q, s;
  return {A, B};
}

Slope canonical_slope(std::int64_t p, std::int64_t q) {
  if (p == 0 && q == 0) throw std::invalid_argument("Slope: (0,0)");
  if (q < 0) { p = -p; q = -q; }
  if (q == 0) p = std::abs(p);
  if (std::gcd(std::abs(p), q) != 1) throw std::invalid_argument("Slope: components not coprime");
  return {p, q};
}

std::vector<Slope> enumerate_slopes(int depth) {
  if (depth < 0) throw std::invalid_argument("enumerate_slopes: negative depth");
  std::vector<Slope> out;
  out.reserve(3ull << depth);
  out.push_back({1, 0});
  out.push_back({0, 1});
  struct Frame { Slope sl, sr; };
  std::vector<Frame> pos{{{1, 0}, {0, 1}}};
  std::vector<Frame> neg{{{0, 1}, {-1, 0}}};
  auto step = [&out](std::vector<Frame>& level) {
    std::vector<Frame> next;
    next.reserve(level.size() * 2);
    for (const Frame& f : level) {
      Slope m{f.sl.p + f.sr.p, f.sl.q + f.sr.q};
      out.push_back(canonical_slope(m.p, m.q));
      next.push_back({f.sl, m});
      next.push_back({m, f.sr});
    }
    level = std::move(next);
  };
  for (int d = 0; d <= depth; ++d) {
    step(pos);
    if (d >= 1) step(neg);  // the negative tree roots one level later: its root (-1,1) is itself a mediant
  }
  return out;
}

SlopeTable evaluate_slopes(const TraceCoords& h, int depth, bool with_arcs) {
  if (!coords_valid(h)) throw std::invalid_argument("evaluate_slopes: invalid coords");
  SlopeTable t;
  std::size_t cap = 3ull << depth;
  t.slopes.reserve(cap);
  t.level.reserve(cap);
  t.log_trace.reserve(cap);

  double lu = std::log(h.u), lv = std::log(h.v), lw = std::log(h.w);
  double uvw = h.u * h.v - h.w;  // trace of slope (-1,1)

  auto emit = [&](Slope s, int lev, double lt) {
    t.slopes.push_back(s);
    t.level.push_back(lev);
    t.log_trace.push_back(lt);
  };

  emit({1, 0}, -1, lu);
  emit({0, 1}, -1, lv);

  std::vector<Node> pos(1), neg(1);
  pos[0] = {{1, 0}, {0, 1}, lu, lv, std::log(uvw)};
  neg[0] = {{0, 1}, {-1, 0}, lv, lu, lw};

  auto step = [&](std::vector<Node>& level, int d) {
    std::vector<Node> next;
    next.reserve(level.size() * 2);
    for (const Node& n : level) {
      Slope m = canonical_slope(n.sl.p + n.sr.p, n.sl.q + n.sr.q);
      double Lm = log_mediant(n.Ll, n.Lr, n.Lp);
      emit(m, d, Lm);
      next.push_back({n.sl, m, n.Ll, Lm, n.Lr});
      next.push_back({m, n.sr, Lm, n.Lr, n.Ll});
    }
    level = std::move(next);
  };
  for (int d = 0; d <= depth; ++d) {
    step(pos, d);
    if (d >= 1) step(neg, d);
  }

  t.curve_len.resize(t.log_trace.size());
  for (std::size_t i = 0; i < t.log_trace.size(); ++i) t.curve_len[i] = length_from_log_trace(t.log_trace[i]);

  if (with_arcs) {
    // Dual-arc lengths from the pants decomposition along each slope: cutting
    // the torus open along γ_s leaves pants with cuffs (ℓ_s, ℓ_s, b), where
    // the dual arc runs from the boundary back to itself between the two
    // ℓ_s-cuffs, so sinh(arc) = cosh(ℓ_s/2) / sinh(b/4).  Working in log
    // space keeps the deep slopes of large structures inside double range,
    // where chasing axis lifts of the boundary word loses the endpoints.
    double b = boundary_length(h);
    if (!(b > 0.0)) throw std::domain_error("evaluate_slopes: arcs need a boundary geodesic");
    double lsb = log_sinh(b / 4.0);
    t.arc_len.resize(t.curve_len.size());
    for (std::size_t i = 0; i < t.curve_len.size(); ++i)
      t.arc_len[i] = asinh_exp(log_cosh(t.curve_len[i] / 2.0) - lsb);
  }
  return t;
}

double slope_trace(const TraceCoords& h, const Slope& s_in) {
  if (!coords_valid(h)) throw std::invalid_argument("slope_trace: invalid coords");
  Slope s = canonical_slope(s_in.p, s_in.q);
  double u = h.u, v = h.v, w = h.w;
  std::int64_t p = s.p, q = s.q;
  if (p < 0) {
    // tr γ_{(-p,q)}(u,v,w) = tr γ_{(p,q)}(u,v,uv−w)
    w = u * v - w;
    p = -p;
  }
  if (p == 1 && q == 0) return u;
  if (p == 0 && q == 1) return v;
  Slope sl{1, 0}, sr{0, 1};
  double tl = u, tr = v, tp = u * v - w;
  for (;;) {
    Slope m{sl.p + sr.p, sl.q + sr.q};
    double tm = tl * tr - tp;
    if (m.p == p && m.q == q) return tm;
    if (p * m.q - q * m.p > 0) {  // target between sl and m
      sr = m;
      tp = tr;
      tr = tm;
    } else {
      sl = m;
      tp = tl;
      tl = tm;
    }
  }
}

double log_slope_trace(const TraceCoords& h, const Slope& s_in) {
  if (!coords_valid(h)) throw std::invalid_argument("log_slope_trace: invalid coords");
  Slope s = canonical_slope(s_in.p, s_in.q);
  double u = h.u, v = h.v, w = h.w;
  std::int64_t p = s.p, q = s.q;
  if (p < 0) {
    w = u * v - w;
    p = -p;
  }
  if (!(u * v - w > 2.0)) throw std::domain_error("log_slope_trace: degenerate structure");
  if (p == 1 && q == 0) return std::log(u);
  if (p == 0 && q == 1) return std::log(v);
  Slope sl{1, 0}, sr{0, 1};
  double Ll = std::log(u), Lr = std::log(v), Lp = std::log(u * v - w);
  for (;;) {
    Slope m{sl.p + sr.p, sl.q + sr.q};
    double Lm = log_mediant(Ll, Lr, Lp);
    if (m.p == p && m.q == q) return Lm;
    if (p * m.q - q * m.p > 0) {
      sr = m;
      Lp = Lr;
      Lr = Lm;
    } else {
      sl = m;
      Lp = Ll;
      Ll = Lm;
    }
  }
}

double curve_length(const TraceCoords& h, const Slope& s) {
  // Deep slopes have traces far beyond double range, so go through logs.
  return length_from_log_trace(log_slope_trace(h, s));
}

double arc_length(const TraceCoords& h, const Slope& s_in) {
  Slope s = canonical_slope(s_in.p, s_in.q);
  // One directed walk would do, but the slope table already holds the exact
  // word bookkeeping; reuse it at the depth that reaches s.
  int depth = 0;
  {
    std::int64_t a = std::abs(s.p), b = s.q;
    // Stern–Brocot path length of (|p|, q)
    int steps = 0;
    while (!(a == 1 && b == 0) && !(a == 0 && b == 1) && !(a == 1 && b == 1)) {
      if (a > b) a -= b; else b -= a;
      ++steps;
    }
    depth = steps + 1;
  }
  SlopeTable t = evaluate_slopes(h, depth, true);
  for (std::size_t i = 0; i < t.slopes.size(); ++i)
    if (t.slopes[i] == s) return t.arc_len[i];
  throw std::logic_error("arc_length: slope not reached at computed depth");
}

double thin_length_approx(const Slope& s, double la, double lb) {
  if (!(la > 0.0 && lb > 0.0)) throw std::invalid_argument("thin_length_approx: lengths must be positive");
  return static_cast<double>(std::abs(s.p)) * la + static_cast<double>(std::abs(s.q)) * lb;
}

TraceCoords from_fenchel_nielsen(const FNCoords& fn) {
  if (!(fn.l > 0.0) || !(fn.b >= 0.0)) throw std::invalid_argument("from_fenchel_nielsen: need l > 0, b >= 0");
  // Seam: the (1,0) curve at zero twist, from the symmetric pants gluing:
  // cosh(b1) = (cosh(b/2) + cosh²(l/2)) / sinh²(l/2).
  double ch = (std::cosh(fn.b / 2.0) + std::cosh(fn.l / 2.0) * std::cosh(fn.l / 2.0)) /
              (std::sinh(fn.l / 2.0) * std::sinh(fn.l / 2.0));
  double C = std::cosh(std::acosh(ch) / 2.0);
  double u = 2.0 * C * std::cosh(fn.tau / 2.0);
  double v = 2.0 * std::cosh(fn.l / 2.0);
  double w = 2.0 * C * std::cosh((fn.tau + fn.l) / 2.0);
  return TraceCoords{u, v, w};
}

FNCoords to_fenchel_nielsen(const TraceCoords& h) {
  if (!coords_valid(h)) throw std::invalid_argument("to_fenchel_nielsen: invalid coords");
  double l = 2.0 * std::acosh(h.v / 2.0);
  double b = boundary_length(h);
  double ch = (std::cosh(b / 2.0) + std::cosh(l / 2.0) * std::cosh(l / 2.0)) /
              (std::sinh(l / 2.0) * std::sinh(l / 2.0));
  double C = std::cosh(std::acosh(ch) / 2.0);
  // Recover the twist through sinh(tau/2) = (w - u cosh(l/2)) / (2C sinh(l/2)):
  // asinh is well conditioned for every twist size (acosh of u/(2C) loses half
  // the significand near tau = 0) and carries the sign, so no disambiguation.
  double st = (h.w - h.u * std::cosh(l / 2.0)) / (2.0 * C * std::sinh(l / 2.0));
  double tau = 2.0 * std::asinh(st);
  return FNCoords{l, tau, b};
}

TraceCoords from_doubled_hexagons(double X, int variant) {
  if (!(X > 1.0)) throw std::invalid_argument("from_doubled_hexagons: need X > 1");
  if (variant != 0 && variant != 1) throw std::invalid_argument("from_doubled_hexagons: variant must be 0 or 1");
  double l = (variant == 0) ? 2.0 * std::asinh(X * X) : 2.0 * std::asinh(X * X * X);
  double b = 4.0 * std::acosh(X * X * X * X);
  return from_fenchel_nielsen({l, 0.0, b});
}

Slope SlopeBasis::apply(const Slope& s) const {
  return canonical_slope(m[0][0] * s.p + m[0][1] * s.q, m[1][0] * s.p + m[1][1] * s.q);
}

SlopeBasis SlopeBasis::inverse() const {
  std::int64_t det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (det != 1 && det != -1) throw std::logic_error("SlopeBasis: determinant must be ±1");
  return SlopeBasis{{{m[1][1] * det, -m[0][1] * det}, {-m[1][0] * det, m[0][0] * det}}};
}

SlopeBasis SlopeBasis::identity() { return SlopeBasis{{{1, 0}, {0, 1}}}; }

SlopeBasis reduction_to_second(const Slope& s_in) {
  Slope s = canonical_slope(s_in.p, s_in.q);
  std::int64_t p = s.p, q = s.q;
  // Accumulate g = product of inverses of the elementary reductions, so g·(0,1) = s.
  SlopeBasis g = SlopeBasis::identity();
  auto absorb = [&g](std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    // right-multiply g by the inverse of [[a,b],[c,d]] (det ±1)
    std::int64_t det = a * d - b * c;
    std::int64_t inv[2][2] = {{d * det, -b * det}, {-c * det, a * det}};
    SlopeBasis ng;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) ng.m[i][j] = g.m[i][0] * inv[0][j] + g.m[i][1] * inv[1][j];
    g = ng;
  };
  while (!(p == 0 && q == 1)) {
    if (p < 0) {
      absorb(-1, 0, 0, 1);
      p = -p;
    } else if (q == 0) {
      absorb(0, 1, 1, 0);
      std::swap(p, q);
    } else if (p >= q) {
      absorb(1, -1, 0, 1);
      p -= q;
    } else {
      absorb(1, 0, -1, 1);
      q -= p;
    }
  }
  return g;
}

TraceCoords change_marking(const TraceCoords& h, const SlopeBasis& g) {
  Slope e1 = g.apply({1, 0});
  Slope e2 = g.apply({0, 1});
  Slope e3 = canonical_slope(g.m[0][0] + g.m[0][1], g.m[1][0] + g.m[1][1]);
  TraceCoords out{slope_trace(h, e1), slope_trace(h, e2), slope_trace(h, e3)};
  // No make_coords here: the commutator trace is a marking invariant, but for
  // large traces its numeric evaluation cancels catastrophically, so the
  // validity re-check would reject exact results.
  if (!(out.u > 2.0 && out.v > 2.0 && out.w > 2.0))
    throw std::domain_error("change_marking: non-hyperbolic trace in the new basis");
  return out;
}

TraceCoords parse_structure(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("structure literal: expected trace:/fn:/hex: prefix");
  std::string kind = text.substr(0, colon);
  std::vector<double> vals;
  {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t a = item.find_first_not_of(" \t");
      std::size_t b = item.find_last_not_of(" \t");
      if (a == std::string::npos) throw std::invalid_argument("structure literal: empty field");
      item = item.substr(a, b - a + 1);
      std::size_t pos = 0;
      double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument("structure literal: trailing characters in '" + item + "'");
      vals.push_back(v);
    }
  }
  if (kind == "trace") {
    if (vals.size() != 3) throw std::invalid_argument("trace: literal needs u,v,w");
    return make_coords(vals[0], vals[1], vals[2]);
  }
  if (kind == "fn") {
    if (vals.size() != 3) throw std::invalid_argument("fn: literal needs l,tau,b");
    return from_fenchel_nielsen({vals[0], vals[1], vals[2]});
  }
  if (kind == "hex") {
    if (vals.size() != 2) throw std::invalid_argument("hex: literal needs X,variant");
    return from_doubled_hexagons(vals[0], static_cast<int>(vals[1]));
  }
  throw std::invalid_argument("structure literal: unknown prefix '" + kind + "'");
}

std::string format_structure(const TraceCoords& h) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "trace:%.17g,%.17g,%.17g", h.u, h.v, h.w);
  return buf;
}

}  // namespace thurston
