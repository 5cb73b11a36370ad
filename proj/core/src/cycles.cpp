#include "lienard/cycles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

#include "lienard/detail/rk45.hpp"

namespace lienard {

namespace {

constexpr double kSemiStableBand = 1e-6;

struct MapEval {
  double map = 0.0;    // P(s)
  double deriv = 0.0;  // P'(s)
  double time = 0.0;
  bool ok = false;
};

using MapFn = std::function<MapEval(double)>;

MapEval eval_half_map(const SystemParams& p, double y,
                      const IntegratorOptions& opts) {
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  auto r = try_return_map(p, sec, y, /*half=*/true, opts);
  if (!r) return {};
  return {r->value, r->derivative, r->time, true};
}

MapEval eval_right_map(const SystemParams& p, double x,
                       const IntegratorOptions& opts) {
  Section sec;
  sec.kind = SectionKind::PositiveXAxis;
  auto r = try_return_map(p, sec, x, /*half=*/false, opts);
  if (!r) return {};
  return {r->value, r->derivative, r->time, true};
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g;
  g.reserve(n);
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i) {
    g.push_back(std::exp(la + (lb - la) * i / double(n - 1)));
  }
  return g;
}

std::vector<ScanPoint> run_scan(const MapFn& map, const std::vector<double>& grid,
                                int jobs) {
  std::vector<ScanPoint> pts(grid.size());
  auto work = [&](std::size_t i) {
    const MapEval e = map(grid[i]);
    pts[i].s = grid[i];
    pts[i].ok = e.ok;
    pts[i].value = e.ok ? e.map - grid[i]
                        : std::numeric_limits<double>::quiet_NaN();
  };
  if (jobs <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) work(i);
  } else {
    std::vector<std::future<void>> fs;
    std::size_t next = 0;
    const std::size_t stride = (grid.size() + jobs - 1) / jobs;
    for (int j = 0; j < jobs && next < grid.size(); ++j) {
      const std::size_t lo = next, hi = std::min(grid.size(), next + stride);
      next = hi;
      fs.push_back(std::async(std::launch::async, [&, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) work(i);
      }));
    }
    for (auto& f : fs) f.get();
  }
  return pts;
}

// Insert midpoints where the discrete slope of the scan changes sign;
// close pairs of roots cluster near homoclinic levels and need this.
void refine_scan(const MapFn& map, std::vector<ScanPoint>& pts, int levels) {
  for (int lvl = 0; lvl < levels; ++lvl) {
    std::vector<ScanPoint> extra;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      if (!pts[i - 1].ok || !pts[i].ok || !pts[i + 1].ok) continue;
      const double dl = pts[i].value - pts[i - 1].value;
      const double dr = pts[i + 1].value - pts[i].value;
      if (dl * dr < 0.0) {
        for (double s : {0.5 * (pts[i - 1].s + pts[i].s),
                         0.5 * (pts[i].s + pts[i + 1].s)}) {
          const MapEval e = map(s);
          ScanPoint sp;
          sp.s = s;
          sp.ok = e.ok;
          sp.value = e.ok ? e.map - s : std::numeric_limits<double>::quiet_NaN();
          extra.push_back(sp);
        }
      }
    }
    if (extra.empty()) break;
    pts.insert(pts.end(), extra.begin(), extra.end());
    std::sort(pts.begin(), pts.end(),
              [](const ScanPoint& a, const ScanPoint& b) { return a.s < b.s; });
  }
}

enum class RootStatus { Root, NotARoot, Failed };

struct RootInfo {
  double s = 0.0;
  double map_deriv = 1.0;
  double time = 0.0;
  RootStatus status = RootStatus::Failed;
};

// Safeguarded Newton on G(s) = P(s) - s inside a sign-change bracket.  A
// bracket that collapses without the residual shrinking is a return-map
// discontinuity (a separatrix level, e.g. a homoclinic loop), not a cycle.
RootInfo refine_root(const MapFn& map, double sa, double ga, double sb,
                     double gb) {
  RootInfo out;
  double s = 0.5 * (sa + sb);
  for (int iter = 0; iter < 80; ++iter) {
    MapEval e = map(s);
    if (!e.ok) {
      // Shift the probe inside the bracket and keep bisecting.
      s = 0.5 * (s + sa);
      e = map(s);
      if (!e.ok) {
        s = 0.5 * (s + sb);
        e = map(s);
        if (!e.ok) return out;
      }
    }
    const double g = e.map - s;
    const double scale = std::max(1.0, std::abs(s));
    const double slope = std::max(1.0, std::abs(e.deriv - 1.0));
    if (std::abs(g) <= 1e-11 * scale ||
        ((sb - sa) <= 1e-13 * scale && std::abs(g) <= 1e3 * (sb - sa) * slope)) {
      out.s = s;
      out.map_deriv = e.deriv;
      out.time = e.time;
      out.status = RootStatus::Root;
      return out;
    }
    if ((sb - sa) <= 1e-13 * scale) {
      out.status = RootStatus::NotARoot;
      return out;
    }
    if ((g > 0.0) == (ga > 0.0)) {
      sa = s;
      ga = g;
    } else {
      sb = s;
      gb = g;
    }
    const double gp = e.deriv - 1.0;
    double snew = (gp != 0.0) ? s - g / gp : 0.5 * (sa + sb);
    if (!(snew > sa && snew < sb)) snew = 0.5 * (sa + sb);
    s = snew;
  }
  return out;
}

struct CycleGeometry {
  double x_left = 0.0, x_right = 0.0;
  double saddle_dist = std::numeric_limits<double>::infinity();
  bool ok = false;
};

double min_saddle_distance(const SystemParams& p, const Trajectory& t) {
  std::vector<double> saddles;
  for (double xe : equilibrium_abscissas(p)) {
    if (restoring_deriv(p, xe) <= 1e-12) saddles.push_back(xe);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& smp : t.samples) {
    for (double xs : saddles) {
      best = std::min(best, std::hypot(smp.s.x - xs, smp.s.y));
    }
  }
  return best;
}

CycleGeometry symmetric_geometry(const SystemParams& p, double ystar,
                                 const IntegratorOptions& opts) {
  Section sec;
  sec.kind = SectionKind::PositiveXAxis;
  IntegratorOptions o = opts;
  o.record_samples = true;
  const Trajectory t = integrate(p, {0.0, ystar}, o, sec);
  CycleGeometry g;
  if (t.termination != Termination::SectionHit) return g;
  g.x_right = t.crossing.x;
  g.x_left = -t.crossing.x;
  g.saddle_dist = min_saddle_distance(p, t);
  g.ok = true;
  return g;
}

CycleGeometry asymmetric_geometry(const SystemParams& p, double xstar,
                                  const IntegratorOptions& opts) {
  Section sec;
  sec.kind = SectionKind::HorizontalLine;
  sec.offset = 0.0;
  sec.direction = CrossDirection::Increasing;
  IntegratorOptions o = opts;
  o.record_samples = true;
  const Trajectory t = integrate(p, {xstar, 0.0}, o, sec);
  CycleGeometry g;
  if (t.termination != Termination::SectionHit) return g;
  g.x_right = xstar;
  g.x_left = t.crossing.x;
  g.saddle_dist = min_saddle_distance(p, t);
  g.ok = true;
  return g;
}

std::vector<EquilibriumLabel> enclosed_labels(
    const std::vector<Equilibrium>& eqs, double x_left, double x_right) {
  std::vector<EquilibriumLabel> out;
  for (const auto& e : eqs) {
    if (e.x > x_left && e.x < x_right) out.push_back(e.label);
  }
  return out;
}

CycleKind kind_from_enclosed(const std::vector<EquilibriumLabel>& enc,
                             std::size_t n_equilibria) {
  if (enc.size() == n_equilibria) return CycleKind::Large;
  if (enc.size() == 1) {
    switch (enc.front()) {
      case EquilibriumLabel::E0: return CycleKind::SmallAroundOrigin;
      case EquilibriumLabel::Er2:
      case EquilibriumLabel::Er1: return CycleKind::SmallAroundRight;
      default: return CycleKind::SmallAroundLeft;
    }
  }
  return CycleKind::Large;
}

CycleStability stability_from_multiplier(double mult) {
  if (mult < 1.0 - kSemiStableBand) return CycleStability::Stable;
  if (mult > 1.0 + kSemiStableBand) return CycleStability::Unstable;
  return CycleStability::SemiStable;
}

// Sign-change count of the half map over a local window; used to confirm
// semi-stable (double-root) cycles by the 2->0 / 0->2 transition in a2.
int local_sign_changes(const SystemParams& p, double s_lo, double s_hi,
                       const IntegratorOptions& opts) {
  const auto grid = log_grid(s_lo, s_hi, 25);
  int changes = 0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double s : grid) {
    const MapEval e = eval_half_map(p, s, opts);
    if (!e.ok) continue;
    const double g = e.map - s;
    if (!std::isnan(prev) && g * prev < 0.0) ++changes;
    prev = g;
  }
  return changes;
}

}  // namespace

const char* to_string(CycleKind k) {
  switch (k) {
    case CycleKind::SmallAroundOrigin: return "small-around-origin";
    case CycleKind::SmallAroundRight: return "small-around-right";
    case CycleKind::SmallAroundLeft: return "small-around-left";
    case CycleKind::Large: return "large";
  }
  return "?";
}

const char* to_string(CycleStability s) {
  switch (s) {
    case CycleStability::Stable: return "stable";
    case CycleStability::Unstable: return "unstable";
    case CycleStability::SemiStable: return "semi-stable";
  }
  return "?";
}

int CycleCensus::n_small() const {
  int n = 0;
  for (const auto& c : cycles) n += c.kind != CycleKind::Large;
  return n;
}

int CycleCensus::n_large() const {
  int n = 0;
  for (const auto& c : cycles) n += c.kind == CycleKind::Large;
  return n;
}

bool bendixson_dulac_certificate(const SystemParams& p) {
  if (p.is_raw()) return p.raw_params().mu3 >= 0.0;
  return p.scaled_params().a2 >= 0.0;
}

std::optional<double> strip_certificate(const SystemParams& p) {
  if (!p.is_scaled()) return std::nullopt;
  const double a2 = p.scaled_params().a2;
  if (!(a2 < 0.0)) return std::nullopt;
  return std::sqrt(-3.0 * a2);
}

CycleCensus count_cycles(const SystemParams& p, const ScanOptions& opts) {
  CycleCensus census;
  if (bendixson_dulac_certificate(p)) {
    census.certificates.push_back("bendixson-dulac");
    return census;
  }
  if (auto strip = strip_certificate(p)) {
    census.certificates.push_back("strip");
    (void)strip;
  }

  IntegratorOptions io = opts.integrator;
  io.record_samples = false;

  const auto eqs = find_equilibria(p);
  const std::size_t n_eq = eqs.size();

  // Every closed orbit satisfies the mean-x^2 identity, so its rightmost
  // x-axis point exceeds sqrt(-a2); prune the asymmetric scan with it.
  double x_prune = 0.0;
  if (p.is_scaled() && p.scaled_params().a2 < 0.0) {
    x_prune = std::sqrt(-p.scaled_params().a2);
  }

  struct Candidate {
    RootInfo root;
    bool symmetric;
  };
  std::vector<Candidate> roots;

  auto collect = [&](const MapFn& map, std::vector<ScanPoint>& pts,
                     bool symmetric) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const auto& a = pts[i];
      const auto& b = pts[i + 1];
      if (!a.ok || !b.ok) {
        if (a.ok != b.ok) census.unresolved.emplace_back(a.s, b.s);
        census.scan_incomplete |= !a.ok || !b.ok;
        continue;
      }
      if (a.value == 0.0) {  // exact grid hit
        RootInfo r;
        r.s = a.s;
        const MapEval e = map(a.s);
        r.map_deriv = e.deriv;
        r.time = e.time;
        r.status = RootStatus::Root;
        roots.push_back({r, symmetric});
        continue;
      }
      if (a.value * b.value < 0.0) {
        RootInfo r = refine_root(map, a.s, a.value, b.s, b.value);
        if (r.status == RootStatus::Root) {
          roots.push_back({r, symmetric});
        } else if (r.status == RootStatus::Failed) {
          census.unresolved.emplace_back(a.s, b.s);
          census.scan_incomplete = true;
        }
        // NotARoot: the sign change is a separatrix jump; nothing to record.
      }
    }
    // Tangential (double) roots: local minima of |G| with map slope ~ 1.
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
      if (!pts[i - 1].ok || !pts[i].ok || !pts[i + 1].ok) continue;
      const double g0 = std::abs(pts[i - 1].value);
      const double g1 = std::abs(pts[i].value);
      const double g2 = std::abs(pts[i + 1].value);
      if (!(g1 < g0 && g1 < g2)) continue;
      if (pts[i - 1].value * pts[i].value < 0.0 ||
          pts[i].value * pts[i + 1].value < 0.0) {
        continue;  // already a sign change
      }
      if (g1 > 1e-4 * std::max(1.0, pts[i].s)) continue;
      MapEval e = map(pts[i].s);
      if (!e.ok || std::abs(e.deriv - 1.0) > 1e-2) continue;
      // Secant on P'(s) - 1 toward the tangency.
      double s0 = pts[i - 1].s, s1 = pts[i].s;
      double d0 = map(s0).deriv - 1.0, d1 = e.deriv - 1.0;
      for (int it = 0; it < 30 && std::abs(d1) > kSemiStableBand; ++it) {
        if (d1 == d0) break;
        const double s2 = s1 - d1 * (s1 - s0) / (d1 - d0);
        if (!std::isfinite(s2)) break;
        s0 = s1;
        d0 = d1;
        s1 = s2;
        const MapEval e2 = map(s1);
        if (!e2.ok) break;
        d1 = e2.deriv - 1.0;
        e = e2;
      }
      if (std::abs(d1) <= kSemiStableBand &&
          std::abs(e.map - s1) <= 1e-8 * std::max(1.0, s1)) {
        RootInfo r;
        r.s = s1;
        r.map_deriv = e.deriv;
        r.time = e.time;
        r.status = RootStatus::Root;
        roots.push_back({r, symmetric});
      }
    }
  };

  // --- half-return map on the positive y-axis (symmetric cycles) ---
  MapFn half_map = [&](double y) { return eval_half_map(p, y, io); };
  double y_max = opts.y_max;
  std::vector<double> grid = log_grid(opts.y_min, y_max, opts.y_points);
  census.half_scan = run_scan(half_map, grid, opts.jobs);
  for (int ext = 0; ext < 4; ++ext) {
    // Extend upward while the outermost resolved point still expands.
    const ScanPoint* top = nullptr;
    for (auto it = census.half_scan.rbegin(); it != census.half_scan.rend(); ++it) {
      if (it->ok) {
        top = &*it;
        break;
      }
    }
    if (!top || !(top->value > 0.0) || y_max >= 256.0) break;
    const double new_max = y_max * 2.0;
    auto extra = run_scan(half_map, log_grid(y_max, new_max, opts.y_points / 4),
                          opts.jobs);
    census.half_scan.insert(census.half_scan.end(), extra.begin() + 1,
                            extra.end());
    y_max = new_max;
  }
  refine_scan(half_map, census.half_scan, opts.refine_levels);
  collect(half_map, census.half_scan, /*symmetric=*/true);

  // --- full return map through the right outer equilibrium ---
  const Equilibrium* right = nullptr;
  for (const auto& e : eqs) {
    if (e.label == EquilibriumLabel::Er2) right = &e;
  }
  const bool right_is_focus_or_node =
      right != nullptr && right->jac_det > 1e-12;
  if (right_is_focus_or_node) {
    const double x_eq = right->x;
    const double lo = std::max(x_eq + opts.x_offset_min, x_prune);
    MapFn right_map = [&](double x) { return eval_right_map(p, x, io); };
    census.right_scan =
        run_scan(right_map, log_grid(lo, x_eq + opts.x_max, opts.x_points),
                 opts.jobs);
    refine_scan(right_map, census.right_scan, opts.refine_levels);
    collect(right_map, census.right_scan, /*symmetric=*/false);
  }

  // --- assemble, dedup, mirror ---
  std::vector<LimitCycle> cycles;
  for (const auto& cand : roots) {
    LimitCycle c;
    c.symmetric = cand.symmetric;
    CycleGeometry geo;
    if (cand.symmetric) {
      c.section_point = {0.0, cand.root.s};
      c.period = 2.0 * cand.root.time;
      c.multiplier = cand.root.map_deriv * cand.root.map_deriv;
      geo = symmetric_geometry(p, cand.root.s, io);
    } else {
      c.section_point = {cand.root.s, 0.0};
      c.period = cand.root.time;
      c.multiplier = cand.root.map_deriv;
      geo = asymmetric_geometry(p, cand.root.s, io);
    }
    if (!geo.ok) continue;
    // Orbits hugging a saddle are homoclinic/heteroclinic shadows: the
    // refined "fixed point" is the separatrix level, not a cycle.  Genuine
    // cycles at desk-scale parameters keep O(0.1) clearance.
    if (geo.saddle_dist < 1e-4 * std::max(1.0, std::abs(geo.x_right))) continue;
    c.x_left = geo.x_left;
    c.x_right = geo.x_right;
    c.enclosed = enclosed_labels(eqs, c.x_left, c.x_right);
    if (c.enclosed.empty()) continue;  // numerical artifact
    c.kind = kind_from_enclosed(c.enclosed, n_eq);
    c.stability = stability_from_multiplier(c.multiplier);
    bool dup = false;
    for (const auto& prev : cycles) {
      if (std::abs(prev.x_right - c.x_right) <
          1e-8 * std::max(1.0, std::abs(c.x_right))) {
        dup = true;
        break;
      }
    }
    if (!dup) cycles.push_back(c);
  }

  // Semi-stable confirmation: perturb a2 by +-1e-4 and demand the 2->0 or
  // 0->2 transition of the local count (scaled parameters only).
  for (auto& c : cycles) {
    if (std::abs(c.multiplier - 1.0) > kSemiStableBand) continue;
    if (!p.is_scaled() || !c.symmetric) continue;
    const auto& s = p.scaled_params();
    const double y = c.section_point.y;
    const int lo_count = local_sign_changes(
        SystemParams::scaled(s.a1, s.a2 - 1e-4, s.delta), 0.7 * y, 1.45 * y, io);
    const int hi_count = local_sign_changes(
        SystemParams::scaled(s.a1, s.a2 + 1e-4, s.delta), 0.7 * y, 1.45 * y, io);
    if ((lo_count >= 2 && hi_count == 0) || (lo_count == 0 && hi_count >= 2)) {
      c.stability = CycleStability::SemiStable;
    }
  }

  // Mirror images of asymmetric cycles (Z2 symmetry).
  std::vector<LimitCycle> mirrored;
  for (const auto& c : cycles) {
    if (c.kind != CycleKind::SmallAroundRight) continue;
    LimitCycle m = c;
    m.kind = CycleKind::SmallAroundLeft;
    m.section_point = -c.section_point;
    m.x_left = -c.x_right;
    m.x_right = -c.x_left;
    m.enclosed.clear();
    for (const auto& e : eqs) {
      if (e.x > m.x_left && e.x < m.x_right) m.enclosed.push_back(e.label);
    }
    mirrored.push_back(m);
  }
  cycles.insert(cycles.end(), mirrored.begin(), mirrored.end());

  std::sort(cycles.begin(), cycles.end(),
            [](const LimitCycle& a, const LimitCycle& b) {
              return a.x_right < b.x_right;
            });
  census.cycles = std::move(cycles);
  return census;
}

double cycle_stability_integral(const SystemParams& p, const LimitCycle& cyc,
                                const IntegratorOptions& opts) {
  // Quadrature of f(x) dt as an augmented state over one period.
  struct Rhs {
    const SystemParams* p;
    void operator()(const detail::Vec<3>& u, detail::Vec<3>& du) const {
      const State f = eval_field(*p, {u[0], u[1]});
      du[0] = f.x;
      du[1] = f.y;
      du[2] = damping(*p, u[0]);
    }
  };
  detail::Dopri5<3, Rhs> rk(Rhs{&p}, opts.rel_tol, opts.abs_tol);
  rk.init(0.0, {cyc.section_point.x, cyc.section_point.y, 0.0},
          opts.initial_step);
  while (rk.t() < cyc.period) {
    const double remain = cyc.period - rk.t();
    if (remain <= 1e-14 * std::max(1.0, cyc.period)) break;
    if (rk.step(remain) != detail::Dopri5<3, Rhs>::StepStatus::Accepted) {
      throw Error("step failure during cycle quadrature");
    }
  }
  return rk.y()[2];
}

}  // namespace lienard
