#include "lienard/connections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

namespace lienard {

namespace {

struct SeedPoint {
  State s;
  bool backward;
  double min_time = 0.0;  // center branches crawl: extend max_time
};

ManifoldBranch mirrored(ManifoldBranch b) {
  switch (b) {
    case ManifoldBranch::UnstableRight: return ManifoldBranch::UnstableLeft;
    case ManifoldBranch::UnstableLeft: return ManifoldBranch::UnstableRight;
    case ManifoldBranch::StableRight: return ManifoldBranch::StableLeft;
    case ManifoldBranch::StableLeft: return ManifoldBranch::StableRight;
  }
  return b;
}

// Seed a manifold branch.  Hyperbolic saddles use the eigenvector offset;
// zero-eigenvalue equilibria (the a1 = 0 degenerate saddle and the a1 = -1
// saddle-nodes) use a cubic/quadratic center-manifold polynomial, seeded
// far enough out that the center flow escapes the flat spot.
SeedPoint seed_branch(const SystemParams& p, const Equilibrium& eq,
                      ManifoldBranch branch, double eps, double ceps) {
  const double gp = restoring_deriv(p, eq.x);
  const bool unstable = branch == ManifoldBranch::UnstableRight ||
                        branch == ManifoldBranch::UnstableLeft;
  const bool right = branch == ManifoldBranch::UnstableRight ||
                     branch == ManifoldBranch::StableRight;

  if (gp < -1e-12) {
    // Hyperbolic saddle: eigenvalues (-f +- sqrt(f^2 - 4 g'))/2.
    const double fv = damping(p, eq.x);
    const double disc = fv * fv - 4.0 * gp;
    const double lam = unstable ? 0.5 * (-fv + std::sqrt(disc))
                                : 0.5 * (-fv - std::sqrt(disc));
    const double h = eps * std::max(1.0, std::abs(eq.x)) * (right ? 1.0 : -1.0);
    return {{eq.x + h, h * lam}, !unstable};
  }

  if (!p.is_scaled()) {
    throw PreconditionError("center-branch shots need scaled parameters");
  }
  const auto& sc = p.scaled_params();

  if (eq.x > 1e-12) {
    // Mirror through the Z2 symmetry onto the left twin.
    Equilibrium twin = eq;
    twin.x = -eq.x;
    const SeedPoint m = seed_branch(p, twin, mirrored(branch), eps, ceps);
    return {-m.s, m.backward};
  }

  if (std::abs(eq.x) <= 1e-12) {
    // a1 = 0 degenerate saddle at the origin: the center branches
    // y = c3 x^3 + c5 x^5 form the stable set; the hyperbolic direction
    // lambda = -delta a2 > 0 carries the unstable separatrices.
    if (unstable) {
      const double lam = -sc.delta * sc.a2;
      if (!(lam > 0.0)) {
        throw PreconditionError("degenerate saddle needs a2 < 0");
      }
      const double h = eps * (right ? 1.0 : -1.0);
      return {{h, h * lam}, false};
    }
    const double c3 = 1.0 / (sc.delta * sc.a2);
    const double c5 =
        (-1.0 - sc.delta * c3 - 3.0 * c3 * c3) / (sc.delta * sc.a2);
    const double x = ceps * (right ? 1.0 : -1.0);
    const double x3 = x * x * x;
    // cubic center flow: escape time from the seed ~ 1/(2 |c3| ceps^2)
    const double esc = 1.0 / (std::abs(c3) * ceps * ceps) + 200.0;
    return {{x, c3 * x3 + c5 * x3 * x * x}, true, esc};
  }

  // a1 = -1 saddle-node at El2 = (-1, 0); center manifold
  // y = alpha xi^2 + beta xi^3, xi = x + 1, with center flow xi' ~ alpha xi^2
  // > 0.  The xi > 0 branch is the unstable manifold, xi < 0 the
  // center-stable branch; the strong-stable eigvector is (1, -c).
  const double c = damping(p, eq.x);
  if (!(c > 0.0)) {
    throw PreconditionError(
        "saddle-node center seeding requires the stable nodal case a2 > -1");
  }
  const double alpha = 4.0 / c;
  const double beta = (-8.0 + 2.0 * sc.delta * alpha - 2.0 * alpha * alpha) / c;
  const double sn_esc = 2.0 / (alpha * ceps) + 200.0;  // quadratic crawl
  switch (branch) {
    case ManifoldBranch::UnstableRight: {
      const double xi = ceps;
      return {{eq.x + xi, alpha * xi * xi + beta * xi * xi * xi}, false, sn_esc};
    }
    case ManifoldBranch::StableLeft: {
      const double xi = -ceps;
      return {{eq.x + xi, alpha * xi * xi + beta * xi * xi * xi}, true, sn_esc};
    }
    case ManifoldBranch::StableRight: {
      const double h = eps;
      return {{eq.x + h, -c * h}, true};
    }
    case ManifoldBranch::UnstableLeft:
      throw PreconditionError(
          "the saddle-node's only unstable branch points inward");
  }
  throw PreconditionError("unreachable branch");
}

State shoot_once(const SystemParams& p, const SeedPoint& seed,
                 const Section& target, const IntegratorOptions& io) {
  IntegratorOptions o = io;
  o.record_samples = false;
  o.max_time = std::max(o.max_time, seed.min_time);
  const Trajectory t = integrate(p, seed.s, o, target, seed.backward);
  if (t.termination != Termination::SectionHit) {
    throw NoCrossingError("manifold shot missed the target section");
  }
  return t.crossing;
}

const Equilibrium& pick(const std::vector<Equilibrium>& eqs,
                        EquilibriumLabel label) {
  for (const auto& e : eqs) {
    if (e.label == label) return e;
  }
  throw PreconditionError("required equilibrium absent at these parameters");
}

}  // namespace

const char* to_string(ManifoldBranch b) {
  switch (b) {
    case ManifoldBranch::UnstableRight: return "unstable-right";
    case ManifoldBranch::UnstableLeft: return "unstable-left";
    case ManifoldBranch::StableRight: return "stable-right";
    case ManifoldBranch::StableLeft: return "stable-left";
  }
  return "?";
}

const char* to_string(MismatchKind k) {
  switch (k) {
    case MismatchKind::FigureEight: return "figure-eight";
    case MismatchKind::SmallRightHomoclinic: return "small-right-homoclinic";
    case MismatchKind::TwoSaddleOuter: return "two-saddle-outer";
    case MismatchKind::SmallOriginLoop: return "small-origin-loop";
    case MismatchKind::SaddleNodeLoopUpper: return "saddle-node-loop-upper";
    case MismatchKind::SaddleNodeLoopLower: return "saddle-node-loop-lower";
  }
  return "?";
}

const char* to_string(CurveKind k) {
  switch (k) {
    case CurveKind::Phi1: return "phi1";
    case CurveKind::Phi2: return "phi2";
    case CurveKind::Phi3: return "phi3";
    case CurveKind::Phi4: return "phi4";
    case CurveKind::Phi5: return "phi5";
    case CurveKind::P1sn: return "p1";
    case CurveKind::P2sn: return "p2";
  }
  return "?";
}

State manifold_shot(const SystemParams& p, const Equilibrium& saddle,
                    ManifoldBranch branch, const Section& target,
                    const ShotOptions& opts) {
  const SeedPoint s1 =
      seed_branch(p, saddle, branch, opts.epsilon, opts.center_epsilon);
  const State first = shoot_once(p, s1, target, opts.integrator);
  if (!opts.richardson_check) return first;
  const SeedPoint s2 = seed_branch(p, saddle, branch, opts.epsilon / 2.0,
                                   opts.center_epsilon / 2.0);
  State finer = shoot_once(p, s2, target, opts.integrator);
  const double diff =
      std::max(std::abs(first.x - finer.x), std::abs(first.y - finer.y));
  if (diff > 1e-6) {
    const SeedPoint s3 = seed_branch(p, saddle, branch, opts.epsilon / 4.0,
                                     opts.center_epsilon / 4.0);
    finer = shoot_once(p, s3, target, opts.integrator);
  }
  return finer;
}

double mismatch(const SystemParams& p, MismatchKind kind,
                const ShotOptions& opts) {
  if (!p.is_scaled()) {
    throw PreconditionError("mismatch functions are defined in scaled form");
  }
  const auto& sc = p.scaled_params();
  const auto eqs = find_equilibria(p);

  Section pos_x;
  pos_x.kind = SectionKind::PositiveXAxis;
  Section pos_y;
  pos_y.kind = SectionKind::PositiveYAxis;
  Section neg_y;
  neg_y.kind = SectionKind::NegativeYAxis;
  Section y_axis;
  y_axis.kind = SectionKind::VerticalLine;
  y_axis.offset = 0.0;

  switch (kind) {
    case MismatchKind::FigureEight: {
      if (!(sc.a1 >= 0.0)) {
        throw PreconditionError("figure-eight mismatch needs a1 >= 0");
      }
      const Equilibrium& e0 = pick(eqs, EquilibriumLabel::E0);
      const double xa =
          manifold_shot(p, e0, ManifoldBranch::StableRight, pos_x, opts).x;
      const double xb =
          manifold_shot(p, e0, ManifoldBranch::UnstableRight, pos_x, opts).x;
      return xa - xb;
    }
    case MismatchKind::SmallRightHomoclinic: {
      const Equilibrium& er1 = pick(eqs, EquilibriumLabel::Er1);
      Section sec = pos_x;
      sec.coord_min = er1.x * (1.0 + 1e-9);
      const double xp =
          manifold_shot(p, er1, ManifoldBranch::StableRight, sec, opts).x;
      const double xq =
          manifold_shot(p, er1, ManifoldBranch::UnstableRight, sec, opts).x;
      return xp - xq;
    }
    case MismatchKind::TwoSaddleOuter: {
      // x_M and x_P are first crossings of the x-axis beyond Er1; the
      // mismatch decreases through zero as a2 increases (positive on
      // (phi2, phi3), negative on (phi3, phi4)).
      const Equilibrium& er1 = pick(eqs, EquilibriumLabel::Er1);
      const Equilibrium& el1 = pick(eqs, EquilibriumLabel::El1);
      Section sec = pos_x;
      sec.coord_min = er1.x * (1.0 + 1e-9);
      const double xp =
          manifold_shot(p, er1, ManifoldBranch::StableRight, sec, opts).x;
      const double xm =
          manifold_shot(p, el1, ManifoldBranch::UnstableRight, sec, opts).x;
      return xm - xp;
    }
    case MismatchKind::SmallOriginLoop: {
      const Equilibrium& el1 = pick(eqs, EquilibriumLabel::El1);
      const double ys =
          manifold_shot(p, el1, ManifoldBranch::UnstableRight, y_axis, opts).y;
      const double yq =
          manifold_shot(p, el1, ManifoldBranch::StableRight, y_axis, opts).y;
      return yq + ys;
    }
    case MismatchKind::SaddleNodeLoopUpper:
    case MismatchKind::SaddleNodeLoopLower: {
      if (std::abs(sc.a1 + 1.0) > 1e-12) {
        throw PreconditionError("saddle-node loops live on a1 = -1");
      }
      const Equilibrium& el2 = pick(eqs, EquilibriumLabel::El2);
      const double ya =
          manifold_shot(p, el2, ManifoldBranch::UnstableRight, pos_y, opts).y;
      const ManifoldBranch stable_branch =
          kind == MismatchKind::SaddleNodeLoopUpper
              ? ManifoldBranch::StableRight   // right-most stable: B-bar
              : ManifoldBranch::StableLeft;   // left-most stable: B-under
      const double yb =
          manifold_shot(p, el2, stable_branch, neg_y, opts).y;
      return ya + yb;
    }
  }
  throw PreconditionError("unreachable mismatch kind");
}

namespace {

// max of the half-map displacement G(y) = H(y) - y over [lo, hi] by golden
// section; the positive hump between a paired unstable/stable large cycle
// collapses to zero exactly at the double-limit-cycle fold.
struct HumpMax {
  double y = 0.0;
  double value = -std::numeric_limits<double>::infinity();
  bool ok = false;
};

HumpMax hump_max(const SystemParams& p, double lo, double hi,
                 const IntegratorOptions& io) {
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  auto G = [&](double y) -> std::optional<double> {
    auto r = try_return_map(p, sec, y, /*half=*/true, io);
    if (!r) return std::nullopt;
    return r->value - y;
  };
  HumpMax out;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - gr * (b - a), d = a + gr * (b - a);
  auto gc = G(c), gd = G(d);
  if (!gc || !gd) return out;
  for (int it = 0; it < 60 && (b - a) > 1e-10 * std::max(1.0, b); ++it) {
    if (*gc < *gd) {
      a = c;
      c = d;
      gc = gd;
      d = a + gr * (b - a);
      gd = G(d);
      if (!gd) return out;
    } else {
      b = d;
      d = c;
      gd = gc;
      c = b - gr * (b - a);
      gc = G(c);
      if (!gc) return out;
    }
  }
  out.y = 0.5 * (a + b);
  const auto gm = G(out.y);
  if (!gm) return out;
  out.value = *gm;
  out.ok = true;
  return out;
}

// Bracket [y_u, y_d] containing the paired large cycles: y_d is the last
// down-crossing of the half-map displacement (the outer stable cycle) and
// y_u the nearest up-crossing below it (the inner unstable cycle).  The
// rotated-field monotonicity keeps the fold inside [y_u, y_d] for every a2
// between the sampled one and the fold.
std::optional<std::pair<double, double>> large_pair_window(
    const SystemParams& p, const IntegratorOptions& io) {
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  const int n = 140;
  double prev_y = 0.0, prev_g = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, int>> crossings;  // (lower grid y, +1 up/-1 down)
  for (int i = 0; i < n; ++i) {
    const double y = std::exp(std::log(1e-4) +
                              (std::log(64.0) - std::log(1e-4)) * i / (n - 1));
    auto r = try_return_map(p, sec, y, true, io);
    if (!r) {
      prev_g = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    const double g = r->value - y;
    if (!std::isnan(prev_g)) {
      if (prev_g < 0.0 && g > 0.0) crossings.emplace_back(prev_y, +1);
      if (prev_g > 0.0 && g < 0.0) crossings.emplace_back(y, -1);
    }
    prev_g = g;
    prev_y = y;
  }
  for (auto it = crossings.rbegin(); it != crossings.rend(); ++it) {
    if (it->second != -1) continue;
    const double y_d = it->first;
    for (auto jt = it + 1; jt != crossings.rend(); ++jt) {
      if (jt->second == +1) return std::make_pair(jt->first, y_d);
    }
    break;
  }
  return std::nullopt;
}

}  // namespace

std::pair<double, double> probe_bracket(CurveKind kind, double a1,
                                        double delta,
                                        std::pair<double, double> range,
                                        const ShotOptions& opts) {
  // The two-saddle mismatch stalls on connection ghosts near the range ends;
  // probe interior points and bracket between adjacent valid sign flips.
  MismatchKind mk = kind == CurveKind::Phi3 ? MismatchKind::TwoSaddleOuter
                                            : MismatchKind::SmallOriginLoop;
  const int n = 11;
  double prev_a = 0.0, prev_m = 0.0;
  bool have_prev = false;
  for (int i = 1; i < n; ++i) {
    const double a = range.first + (range.second - range.first) * i / n;
    double m;
    try {
      m = mismatch(SystemParams::scaled(a1, a, delta), mk, opts);
    } catch (const NoCrossingError&) {
      continue;
    }
    if (have_prev && (m > 0.0) != (prev_m > 0.0)) return {prev_a, a};
    prev_a = a;
    prev_m = m;
    have_prev = true;
  }
  throw BadBracketError("no sign change found among probe points");
}

CurvePoint trace_curve(CurveKind kind, double a1, double delta,
                       std::pair<double, double> bracket, double tol,
                       const ShotOptions& opts) {
  CurvePoint cp;
  cp.kind = kind;
  cp.a1 = a1;
  cp.delta = delta;
  double lo = bracket.first, hi = bracket.second;
  if (!(lo < hi)) throw BadBracketError("empty bracket");

  if (kind == CurveKind::Phi5) {
    IntegratorOptions io = opts.integrator;
    io.record_samples = false;
    io.converge_radius = 1e-5;
    // Approach the fold from the no-cycle side: just above phi1/phi3 the
    // inner cycle hugs the connection and its y-axis crossing is below any
    // fixed scan floor, so the pair is only detectable nearer the fold.
    std::optional<std::pair<double, double>> window;
    double pair_lo = lo, nopair_hi = hi;
    bool found = false;
    for (int k = 1; k <= 14 && !found; ++k) {
      const double a = lo + (hi - lo) * std::pow(2.0 / 3.0, k);
      window = large_pair_window(SystemParams::scaled(a1, a, delta), io);
      if (window) {
        pair_lo = a;
        found = true;
      } else {
        nopair_hi = a;
      }
    }
    if (!found) {
      throw BadBracketError("no paired large cycles inside the Phi5 bracket");
    }
    const double wlo = 0.999 * window->first;
    const double whi = 1.001 * window->second;
    auto count_sign = [&](double a2) {
      const auto h = hump_max(SystemParams::scaled(a1, a2, delta), wlo, whi, io);
      if (!h.ok) throw BadBracketError("hump evaluation failed inside bracket");
      return h;
    };
    lo = pair_lo;
    hi = nopair_hi;
    HumpMax hlo = count_sign(lo), hhi = count_sign(hi);
    if (!(hlo.value > 0.0) || !(hhi.value < 0.0)) {
      throw BadBracketError("Phi5 bracket does not straddle the 2->0 fold");
    }
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      const HumpMax hm = count_sign(mid);
      if (hm.value > 0.0) {
        lo = mid;
        hlo = hm;
      } else {
        hi = mid;
        hhi = hm;
      }
    }
    cp.a2_star = 0.5 * (lo + hi);
    cp.bracket_width = hi - lo;
    // Residual: full-cycle multiplier defect at the tangency point.
    const HumpMax hm = count_sign(cp.a2_star);
    Section sec;
    sec.kind = SectionKind::PositiveYAxis;
    auto r = try_return_map(SystemParams::scaled(a1, cp.a2_star, delta), sec,
                            hm.y, true, io);
    cp.residual = r ? std::abs(r->derivative * r->derivative - 1.0) : 1.0;
    return cp;
  }

  MismatchKind mk;
  switch (kind) {
    case CurveKind::Phi1: mk = MismatchKind::FigureEight; break;
    case CurveKind::Phi2: mk = MismatchKind::SmallRightHomoclinic; break;
    case CurveKind::Phi3: mk = MismatchKind::TwoSaddleOuter; break;
    case CurveKind::Phi4: mk = MismatchKind::SmallOriginLoop; break;
    case CurveKind::P1sn: mk = MismatchKind::SaddleNodeLoopLower; break;
    case CurveKind::P2sn: mk = MismatchKind::SaddleNodeLoopUpper; break;
    default: throw PreconditionError("unhandled curve kind");
  }
  auto f = [&](double a2) {
    return mismatch(SystemParams::scaled(a1, a2, delta), mk, opts);
  };
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) {
    cp.a2_star = lo;
    cp.bracket_width = 0.0;
    cp.residual = 0.0;
    return cp;
  }
  if (fhi == 0.0) {
    cp.a2_star = hi;
    cp.bracket_width = 0.0;
    cp.residual = 0.0;
    return cp;
  }
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BadBracketError("mismatch has the same sign at both bracket ends");
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  cp.a2_star = 0.5 * (lo + hi);
  cp.bracket_width = hi - lo;
  cp.residual = std::abs(f(cp.a2_star));
  return cp;
}

CurvePoint CurveCache::get(CurveKind kind, double a1, double delta,
                           std::pair<double, double> bracket, double tol,
                           const ShotOptions& opts) {
  const auto key = std::make_tuple(static_cast<int>(kind),
                                   std::llround(a1 * 1e10),
                                   std::llround(delta * 1e10));
  {
    std::lock_guard<std::mutex> lock(mu_);
    const auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  const CurvePoint cp = trace_curve(kind, a1, delta, bracket, tol, opts);
  std::lock_guard<std::mutex> lock(mu_);
  return map_.emplace(key, cp).first->second;
}

CurveCache& CurveCache::global() {
  static CurveCache cache;
  return cache;
}

double a_star(double delta, CurveCache& cache) {
  // Root of phi3(a, delta) - a on (-1, -1/3); phi3 > a near a = -1.
  auto diff = [&](double a) {
    const double hb = (a - 1.0 - std::sqrt(-a)) / 3.0;
    const CurvePoint p2 =
        cache.get(CurveKind::Phi2, a, delta, {-1.0 + 1e-6, hb - 1e-6});
    const CurvePoint p4 =
        cache.get(CurveKind::Phi4, a, delta, {a / 3.0 + 1e-6, -1e-6});
    const auto br = probe_bracket(CurveKind::Phi3, a, delta,
                                  {p2.a2_star + 1e-4, p4.a2_star - 1e-4}, {});
    const CurvePoint p3 = cache.get(CurveKind::Phi3, a, delta, br);
    return p3.a2_star - a;
  };
  double lo = -0.95, hi = -1.0 / 3.0 - 0.01;
  double flo = diff(lo), fhi = diff(hi);
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw BadBracketError("a* bracket failed: phi3 - a has one sign");
  }
  for (int it = 0; it < 40 && hi - lo > 1e-6; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = diff(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

std::string region_classify(double a1, double a2, double delta,
                            double boundary_tol, CurveCache& cache) {
  if (!(delta > 0.0) || !(a1 >= -1.0)) {
    throw PreconditionError("(a1, a2, delta) outside Omega");
  }
  const double thr = 2.0 * std::sqrt(3.0);
  if (std::abs(delta - thr) <= boundary_tol) return "DE";
  const bool low = delta < thr;
  auto name = [&](int i) {
    static const char* roman[] = {"I", "II",  "III", "IV", "V",  "VI",
                                  "VII", "VIII", "IX",  "X",  "XI"};
    if (low) return std::string(roman[i - 1]);
    return "R" + std::to_string(i);
  };

  if (std::abs(a1 + 1.0) <= boundary_tol) return "T";
  if (std::abs(a1) <= boundary_tol && a1 < 0.0) return "P";

  const double e = 1e-6;
  if (a1 >= 0.0) {
    if (std::abs(a2 + 1.0) <= boundary_tol) return "H2";
    if (a2 < -1.0) return name(4);
    if (a2 >= -1.0 / 3.0) return name(1);
    const CurvePoint p1 =
        cache.get(CurveKind::Phi1, a1, delta, {-1.0 + e, -1.0 / 3.0 - e});
    if (std::abs(a2 - p1.a2_star) <= boundary_tol) return "HL1";
    if (a2 < p1.a2_star) return name(3);
    const CurvePoint p5 = cache.get(CurveKind::Phi5, a1, delta,
                                    {p1.a2_star + e, -1.0 / 3.0 - e});
    if (std::abs(a2 - p5.a2_star) <= boundary_tol) return "DL";
    return a2 < p5.a2_star ? name(2) : name(1);
  }

  // -1 < a1 < 0
  if (std::abs(a2) <= boundary_tol) return "H1";
  if (a2 > 0.0) return name(11);
  if (std::abs(a2 + 1.0) <= boundary_tol) return "H2";
  if (a2 < -1.0) return name(5);

  const double hb = (a1 - 1.0 - std::sqrt(-a1)) / 3.0;
  const CurvePoint p2 =
      cache.get(CurveKind::Phi2, a1, delta, {-1.0 + e, hb - e});
  if (std::abs(a2 - p2.a2_star) <= boundary_tol) return "HL2";
  if (a2 < p2.a2_star) return name(6);
  const CurvePoint p4 =
      cache.get(CurveKind::Phi4, a1, delta, {a1 / 3.0 + e, -e});
  const auto br3 = probe_bracket(CurveKind::Phi3, a1, delta,
                                 {p2.a2_star + 1e-4, p4.a2_star - 1e-4}, {});
  const CurvePoint p3 = cache.get(CurveKind::Phi3, a1, delta, br3);
  if (std::abs(a2 - p3.a2_star) <= boundary_tol) return "HE1";
  if (a2 < p3.a2_star) return name(7);
  if (std::abs(a2 - p4.a2_star) <= boundary_tol) return "HE2";
  if (a2 > p4.a2_star) return name(10);

  // Between phi3 and phi4: VIII/IX split through phi5 when a1 > a*.
  const bool left_of_astar = p3.a2_star >= a1;  // phi3(a1) >= a1  <=>  a1 <= a*
  if (left_of_astar) return name(9);
  const double p5hi = std::min(a1, -1.0 / 3.0) - e;
  if (p3.a2_star + e >= p5hi) return name(9);  // degenerate sliver
  const CurvePoint p5 =
      cache.get(CurveKind::Phi5, a1, delta, {p3.a2_star + e, p5hi});
  if (std::abs(a2 - p5.a2_star) <= boundary_tol) return "DL";
  return a2 < p5.a2_star ? name(8) : name(9);
}

}  // namespace lienard
