#include "thurston/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thurston/parallel.hpp"

namespace thurston {
namespace {

constexpr double kBoundaryGate = 1e-9;
constexpr double kTieGap = 1e-12;

void check_same_boundary(const TraceCoords& h0, const TraceCoords& h1) {
  if (std::abs(boundary_length(h0) - boundary_length(h1)) > kBoundaryGate)
    throw std::domain_error(
        "metric: boundary lengths differ; the supremum is a metric only on a "
        "fixed-boundary slice");
}

// Deterministic comparator for the supremum: larger ratio wins, exact ties go
// to the lexicographically smaller slope, making the reduction associative.
bool better(double r, Slope s, double best_r, Slope best_s) {
  if (r != best_r) return r > best_r;
  return s < best_s;
}

struct RatioScan {
  MetricResult result;
  std::vector<Slope> argmax_by_depth;  // per depth 0..depth
  double second_best;                  // best ratio over slopes != argmax
};

// Shared engine: per-slope log length-ratios (arc-or-curve when arcs is set),
// folded into per-depth running maxima.
RatioScan scan_ratios(const TraceCoords& h0, const TraceCoords& h1, int depth,
                      bool arcs) {
  check_same_boundary(h0, h1);
  if (depth < 0) throw std::invalid_argument("metric: negative depth");
  SlopeTable t0 = evaluate_slopes(h0, depth, arcs);
  SlopeTable t1 = evaluate_slopes(h1, depth, arcs);
  const std::size_t n = t0.slopes.size();

  std::vector<double> ratio(n);
  parallel_blocks(n, 2048,
                  [&](std::size_t, std::size_t lo, std::size_t hi) {
                    for (std::size_t i = lo; i < hi; ++i) {
                      double r = std::log(t1.curve_len[i] / t0.curve_len[i]);
                      if (arcs)
                        r = std::max(r,
                                     std::log(t1.arc_len[i] / t0.arc_len[i]));
                      ratio[i] = r;
                    }
                  });

  // Fold into per-level maxima (bases live at level -1 and enter depth 0),
  // then prefix-combine: the history is non-decreasing by construction.
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> level_best(static_cast<std::size_t>(depth) + 2, neg_inf);
  std::vector<Slope> level_slope(static_cast<std::size_t>(depth) + 2,
                                 Slope{1, 0});
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t lev = static_cast<std::size_t>(t0.level[i] + 1);
    if (better(ratio[i], t0.slopes[i], level_best[lev], level_slope[lev])) {
      level_best[lev] = ratio[i];
      level_slope[lev] = t0.slopes[i];
    }
  }

  RatioScan out;
  out.result.depth = depth;
  out.result.history.reserve(static_cast<std::size_t>(depth) + 1);
  out.argmax_by_depth.reserve(static_cast<std::size_t>(depth) + 1);
  double run = level_best[0];
  Slope run_s = level_slope[0];
  for (int d = 0; d <= depth; ++d) {
    std::size_t lev = static_cast<std::size_t>(d) + 1;
    if (better(level_best[lev], level_slope[lev], run, run_s)) {
      run = level_best[lev];
      run_s = level_slope[lev];
    }
    out.result.history.push_back(run);
    out.argmax_by_depth.push_back(run_s);
  }
  out.result.value = run;
  out.result.argmax_slope = run_s;

  out.second_best = neg_inf;
  for (std::size_t i = 0; i < n; ++i)
    if (!(t0.slopes[i] == run_s))
      out.second_best = std::max(out.second_best, ratio[i]);
  return out;
}

// Lean supremum between two pre-evaluated tables (no bookkeeping).
double sup_ratio(const SlopeTable& t0, const SlopeTable& t1) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < t0.curve_len.size(); ++i)
    best = std::max(best, std::log(t1.curve_len[i] / t0.curve_len[i]));
  return best;
}

}  // namespace

nlohmann::json MetricResult::to_json() const {
  return nlohmann::json{{"value", value},
                        {"argmax", {argmax_slope.p, argmax_slope.q}},
                        {"depth", depth},
                        {"history", history}};
}

double curve_ratio(const TraceCoords& h0, const TraceCoords& h1, Slope s) {
  return std::log(curve_length(h1, s) / curve_length(h0, s));
}

MetricResult curve_metric(const TraceCoords& h0, const TraceCoords& h1,
                          int depth) {
  return scan_ratios(h0, h1, depth, false).result;
}

MetricResult arc_metric(const TraceCoords& h0, const TraceCoords& h1,
                        int depth) {
  return scan_ratios(h0, h1, depth, true).result;
}

SlopeStability max_ratio_slope(const TraceCoords& h0, const TraceCoords& h1,
                               int depth) {
  RatioScan scan = scan_ratios(h0, h1, depth, false);
  bool stable = depth >= 3;
  for (int d = depth - 3; stable && d < depth; ++d)
    stable = scan.argmax_by_depth[static_cast<std::size_t>(d)] ==
             scan.result.argmax_slope;
  if (scan.result.value - scan.second_best <= kTieGap) stable = false;
  return SlopeStability{scan.result.argmax_slope, stable};
}

StretchFamily stretch_family(const TraceCoords& h0, Slope s, double t) {
  if (!(t >= 0.0))
    throw std::invalid_argument("stretch_family: t must be >= 0");
  s = canonical_slope(s.p, s.q);
  SlopeBasis g = reduction_to_second(s);
  TraceCoords base = change_marking(h0, g);
  FNCoords fn0 = to_fenchel_nielsen(base);
  return StretchFamily{h0, s, t, g, base, fn0, boundary_length(h0)};
}

TraceCoords StretchFamily::at(double tau) const {
  double want = std::exp(t) * fn0.l;
  TraceCoords h = from_fenchel_nielsen(FNCoords{want, tau, b});
  // Constraint audit.  Both identities are exact in the construction, so only
  // mis-wiring produces O(1) violations.  The boundary reevaluation runs
  // through the commutator trace, whose cancellation grows like eps * u*v*w
  // (amplified by the acosh slope 1/sinh(b/2)), so the bar carries that term
  // instead of rejecting exact results at large twists.
  if (std::abs(curve_length(h, Slope{0, 1}) - want) >
      1e-9 * std::max(1.0, want))
    throw std::logic_error("StretchFamily: stretched-length constraint broke");
  double kappa_err = 64.0 * std::numeric_limits<double>::epsilon() *
                     std::abs(h.u * h.v * h.w);
  double cond = kappa_err / std::max(0.25, std::sinh(b / 2.0));
  if (std::abs(boundary_length(h) - b) > 1e-9 * std::max(1.0, b) + cond)
    throw std::logic_error("StretchFamily: boundary constraint broke");
  return h;
}

TraceCoords StretchFamily::at_original(double tau) const {
  return change_marking(at(tau), basis.inverse());
}

EnvelopeSlice stretch_envelope(const TraceCoords& h0, Slope s, double t,
                               int depth, double tol) {
  if (!(t > 0.0))
    throw std::invalid_argument("stretch_envelope: t must be positive");
  if (!(tol > 0.0))
    throw std::invalid_argument("stretch_envelope: tol must be positive");
  StretchFamily fam = stretch_family(h0, s, t);

  // All suprema in the s-adapted marking: a common basis change permutes the
  // competitor slopes and leaves K invariant.
  SlopeTable base_table = evaluate_slopes(fam.base, depth, false);
  auto K = [&](double tau) {
    return sup_ratio(base_table, evaluate_slopes(fam.at(tau), depth, false));
  };

  // Bracketing scan.  The window tracks the twist both at the base and after
  // the stretch (twists scale roughly with length along the family), padded
  // generously; the slope s itself pins K >= t, so the dip we are bracketing
  // is O(tol) deep and flat-bottomed.
  double lo = std::min(fam.tau0(), fam.tau0() * std::exp(t)) - 6.0;
  double hi = std::max(fam.tau0(), fam.tau0() * std::exp(t)) + 6.0;
  constexpr int kScan = 64;
  std::vector<double> taus(kScan), g(kScan);
  for (int i = 0; i < kScan; ++i)
    taus[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * i / double(kScan - 1);
  parallel_blocks(kScan, 8, [&](std::size_t, std::size_t lo_i,
                                std::size_t hi_i) {
    for (std::size_t i = lo_i; i < hi_i; ++i) g[i] = K(taus[i]);
  });

  int im = 0;
  for (int i = 1; i < kScan; ++i)
    if (g[static_cast<std::size_t>(i)] < g[static_cast<std::size_t>(im)])
      im = i;
  if (im == 0 || im == kScan - 1)
    throw std::runtime_error(
        "stretch_envelope: minimum sits at the scan boundary; the twist "
        "window missed the envelope");

  // Golden-section refinement, ties toward smaller tau.
  double a = taus[static_cast<std::size_t>(im - 1)];
  double c = taus[static_cast<std::size_t>(im + 1)];
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = c - gr * (c - a), x2 = a + gr * (c - a);
  double f1 = K(x1), f2 = K(x2);
  for (int it = 0; it < 60; ++it) {
    if (f1 <= f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - gr * (c - a);
      f1 = K(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (c - a);
      f2 = K(x2);
    }
  }
  double tau_min = f1 <= f2 ? x1 : x2;
  double min_val = std::min(f1, f2);
  if (!(min_val <= t + tol))
    throw std::runtime_error(
        "stretch_envelope: minimum exceeds t + tol; increase the slope depth");

  // Endpoints of {K <= t + tol} by bisection against the scan samples.
  double thr = t + tol;
  auto cross = [&](double inside, double outside) {
    for (int it = 0; it < 80; ++it) {
      double mid = (inside + outside) / 2.0;
      (K(mid) <= thr ? inside : outside) = mid;
    }
    return inside;
  };
  int li = im;
  while (li >= 0 && g[static_cast<std::size_t>(li)] <= thr) --li;
  int ri = im;
  while (ri < kScan && g[static_cast<std::size_t>(ri)] <= thr) ++ri;
  // The minimizer sample itself may sit above the threshold even though the
  // refined minimum is below; fall back to the refined bracket then.
  double in_l = g[static_cast<std::size_t>(im)] <= thr
                    ? taus[static_cast<std::size_t>(im)]
                    : tau_min;
  if (li < 0 || ri >= kScan)
    throw std::runtime_error(
        "stretch_envelope: level set leaves the scan window");
  double tau_minus = cross(in_l, taus[static_cast<std::size_t>(li)]);
  double tau_plus = cross(in_l, taus[static_cast<std::size_t>(ri)]);
  return EnvelopeSlice{t, tol, tau_minus, tau_plus, tau_min, min_val};
}

TraceCoords partial_stretch_point(const TraceCoords& h0, Slope s, double t,
                                  EnvelopeSide side, int depth, double tol) {
  if (t == 0.0) return h0;
  EnvelopeSlice env = stretch_envelope(h0, s, t, depth, tol);
  StretchFamily fam = stretch_family(h0, s, t);
  return fam.at_original(side == EnvelopeSide::Plus ? env.tau_plus
                                                    : env.tau_minus);
}

GeodesicReport geodesic_check(const TraceCoords& h0, Slope s,
                              EnvelopeSide side,
                              const std::vector<double>& times, int depth,
                              double tol) {
  if (!std::is_sorted(times.begin(), times.end()))
    throw std::invalid_argument("geodesic_check: times must be sorted");
  if (!times.empty() && times.front() < 0.0)
    throw std::invalid_argument("geodesic_check: times must be nonnegative");
  GeodesicReport rep;
  rep.points.reserve(times.size());
  // The envelope endpoints sit at K-level t + (envelope tol), so running the
  // envelope at the full verification tolerance would park every point
  // exactly on the bar; measure with a quarter of it instead.
  for (double t : times)
    rep.points.push_back(partial_stretch_point(h0, s, t, side, depth, tol / 4.0));
  rep.worst_residual = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = i + 1; j < times.size(); ++j) {
      double expected = times[j] - times[i];
      double measured = curve_metric(rep.points[i], rep.points[j], depth).value;
      double residual = std::abs(measured - expected);
      rep.pairs.push_back(GeodesicPair{i, j, expected, measured, residual});
      rep.worst_residual = std::max(rep.worst_residual, residual);
    }
  rep.ok = rep.worst_residual <= tol;
  return rep;
}

TraceCoords random_structure(double b, std::uint64_t seed,
                             std::uint64_t index, FNCoords* fn_out) {
  SplitMix64 rng = item_rng(seed, index);
  double l = std::exp(rng.uniform(std::log(0.5), std::log(4.0)));
  double tau = rng.uniform(-3.0, 3.0);
  FNCoords fn{l, tau, b};
  if (fn_out) *fn_out = fn;
  return from_fenchel_nielsen(fn);
}

nlohmann::json AxiomReport::to_json() const {
  return nlohmann::json{{"triples", triples},
                        {"distinct_pairs", distinct_pairs},
                        {"min_distinct_k", min_distinct_k},
                        {"positivity_violations", positivity_violations},
                        {"triangle_checks", triangle_checks},
                        {"triangle_violations", triangle_violations},
                        {"worst_triangle_excess", worst_triangle_excess},
                        {"slack", slack},
                        {"asymmetric_found", asymmetric_found},
                        {"asym_gap", asym_gap},
                        {"ok", ok}};
}

AxiomReport metric_axiom_suite(std::size_t samples, double b, int depth,
                               std::uint64_t seed) {
  if (!(b > 0.0))
    throw std::invalid_argument("metric_axiom_suite: b must be positive");
  constexpr double kDistinct = 1e-3;  // FN separation declaring a pair distinct
  constexpr double kSlack = 1e-3;     // triangle-inequality truncation budget
  constexpr double kAsymGap = 1e-9;

  struct Partial {
    std::size_t distinct = 0, pos_viol = 0, tri_checks = 0, tri_viol = 0;
    double min_k = std::numeric_limits<double>::infinity();
    double worst_excess = -std::numeric_limits<double>::infinity();
    double asym = 0.0;
  };
  constexpr std::size_t kBlock = 8;
  std::size_t n_blocks = samples == 0 ? 0 : (samples + kBlock - 1) / kBlock;
  std::vector<Partial> parts(n_blocks);

  parallel_blocks(samples, kBlock, [&](std::size_t block, std::size_t lo,
                                       std::size_t hi) {
    Partial& p = parts[block];
    for (std::size_t i = lo; i < hi; ++i) {
      FNCoords fn[3];
      TraceCoords h[3];
      SlopeTable tab[3];
      for (int k = 0; k < 3; ++k) {
        h[k] = random_structure(b, seed, 3 * i + static_cast<std::uint64_t>(k),
                                &fn[k]);
        tab[k] = evaluate_slopes(h[k], depth, false);
      }
      double K[3][3];
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
          if (x != y) K[x][y] = sup_ratio(tab[x], tab[y]);
      for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y) {
          if (x == y) continue;
          if (std::abs(fn[x].l - fn[y].l) + std::abs(fn[x].tau - fn[y].tau) >
              kDistinct) {
            ++p.distinct;
            p.min_k = std::min(p.min_k, K[x][y]);
            if (!(K[x][y] > 0.0)) ++p.pos_viol;
          }
          p.asym = std::max(p.asym, std::abs(K[x][y] - K[y][x]));
          int z = 3 - x - y;
          ++p.tri_checks;
          double excess = K[x][y] - K[x][z] - K[z][y];
          p.worst_excess = std::max(p.worst_excess, excess);
          if (excess > kSlack) ++p.tri_viol;
        }
    }
  });

  AxiomReport rep{};
  rep.triples = samples;
  rep.min_distinct_k = std::numeric_limits<double>::infinity();
  rep.worst_triangle_excess = -std::numeric_limits<double>::infinity();
  rep.slack = kSlack;
  for (const Partial& p : parts) {
    rep.distinct_pairs += p.distinct;
    rep.positivity_violations += p.pos_viol;
    rep.triangle_checks += p.tri_checks;
    rep.triangle_violations += p.tri_viol;
    rep.min_distinct_k = std::min(rep.min_distinct_k, p.min_k);
    rep.worst_triangle_excess = std::max(rep.worst_triangle_excess, p.worst_excess);
    rep.asym_gap = std::max(rep.asym_gap, p.asym);
  }
  rep.asymmetric_found = rep.asym_gap > kAsymGap;
  rep.ok = rep.positivity_violations == 0 && rep.triangle_violations == 0;
  return rep;
}

}  // namespace thurston
