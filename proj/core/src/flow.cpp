#include "lienard/flow.hpp"

#include <algorithm>
#include <cmath>

#include "lienard/detail/rk45.hpp"

namespace lienard {

namespace {

using detail::Vec;

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

struct Field2 {
  const SystemParams* p;
  double dir;  // +1 forward, -1 backward
  void operator()(const Vec<2>& u, Vec<2>& du) const {
    const State f = eval_field(*p, {u[0], u[1]});
    du[0] = dir * f.x;
    du[1] = dir * f.y;
  }
};

// State plus one tangent vector of the variational equations.
struct Field4 {
  const SystemParams* p;
  double dir;
  void operator()(const Vec<4>& u, Vec<4>& du) const {
    const State s{u[0], u[1]};
    const State f = eval_field(*p, s);
    const auto J = jacobian(*p, s);
    du[0] = dir * f.x;
    du[1] = dir * f.y;
    du[2] = dir * (J[0] * u[2] + J[1] * u[3]);
    du[3] = dir * (J[2] * u[2] + J[3] * u[3]);
  }
};

template <std::size_t N>
State head(const Vec<N>& u) {
  return {u[0], u[1]};
}

constexpr int kMaxSteps = 50'000'000;

double rhs_dir(const Field2& f) { return f.dir; }
double rhs_dir(const Field4& f) { return f.dir; }

template <std::size_t N>
struct DriveOutcome {
  Termination term = Termination::MaxTime;
  double t = 0.0;
  Vec<N> y{};
  std::string label;
};

struct EquilibriumPoint {
  double x;
  bool saddle;  // restoring_deriv < 0: tight capture radius only
};

std::vector<EquilibriumPoint> equilibrium_points(const SystemParams& p) {
  std::vector<EquilibriumPoint> pts;
  for (double xe : equilibrium_abscissas(p)) {
    pts.push_back({xe, restoring_deriv(p, xe) < 0.0});
  }
  return pts;
}

bool near_equilibrium(const std::vector<EquilibriumPoint>& eqs, State s,
                      double capture_radius) {
  for (const auto& e : eqs) {
    const double r = e.saddle ? 1e-9 : capture_radius;
    const double scale = std::max(1.0, std::abs(e.x));
    if (std::abs(s.y) <= r * scale && std::abs(s.x - e.x) <= r * scale) {
      return true;
    }
  }
  return false;
}

std::string nearest_label(const std::vector<double>& abscissas, State s) {
  double best = std::numeric_limits<double>::infinity();
  double bx = 0.0;
  for (double xe : abscissas) {
    if (std::abs(s.x - xe) < best) {
      best = std::abs(s.x - xe);
      bx = xe;
    }
  }
  const std::size_t n = abscissas.size();
  std::size_t idx = 0;
  for (; idx < n; ++idx)
    if (abscissas[idx] == bx) break;
  if (n == 1) return "E0";
  if (n == 3) {
    const char* names[] = {"El2", "E0", "Er2"};
    return names[idx];
  }
  const char* names[] = {"El2", "El1", "E0", "Er1", "Er2"};
  return idx < 5 ? names[idx] : "E0";
}

enum class CrossingOutcome { None, LandedInvalid, Hit };

// Section event scan over one accepted step.  When an admissible crossing is
// found the stepper is left positioned on it.  Crossings at or before t_skip
// are ignored (they were landed on and rejected in an earlier iteration).
template <std::size_t N, class RHS>
CrossingOutcome locate_crossing(detail::Dopri5<N, RHS>& rk,
                                const SystemParams& p, double dir,
                                const Section& stop, CrossDirection want,
                                bool& left_section, double eps_leave,
                                double t_skip) {
  const double h = rk.h_prev();
  if (!(h > 0.0)) return CrossingOutcome::None;
  const double scale = std::max(1.0, std::abs(stop.line_offset()));
  const double dead = 2e-12 * scale;  // landed points carry no sign
  const auto sgn_db = [dead](double v) {
    return std::abs(v) <= dead ? 0 : (v > 0.0 ? 1 : -1);
  };
  constexpr int kNodes = 5;
  double theta[kNodes] = {0.0, 0.25, 0.5, 0.75, 1.0};
  double sig[kNodes];
  for (int i = 0; i < kNodes; ++i) {
    const Vec<N> u = (i == 0) ? rk.y_prev() : (i == kNodes - 1 ? rk.y() : rk.dense(theta[i]));
    sig[i] = stop.section_value(head(u));
  }
  for (int i = 0; i + 1 < kNodes; ++i) {
    const bool was_off = left_section || std::abs(sig[i]) > eps_leave;
    if (std::abs(sig[i]) > eps_leave) left_section = true;
    if (!was_off) continue;
    if (sgn_db(sig[i]) == 0 || sgn_db(sig[i]) * sgn_db(sig[i + 1]) >= 0) continue;

    // Bisection then Newton on the dense output.
    double ta = theta[i], tb = theta[i + 1];
    double sa = sig[i];
    for (int it = 0; it < 80 && (tb - ta) > 1e-15; ++it) {
      const double tm = 0.5 * (ta + tb);
      const double sm = stop.section_value(head(rk.dense(tm)));
      if (sgn(sm) == sgn(sa)) {
        ta = tm;
        sa = sm;
      } else {
        tb = tm;
      }
    }
    double th = 0.5 * (ta + tb);
    if (rk.t_prev() + th * h <= t_skip) continue;
    for (int it = 0; it < 4; ++it) {
      const Vec<N> u = rk.dense(th);
      const Vec<N> du = rk.dense_deriv(th);
      const double s = stop.section_value(head(u));
      const double sd = stop.vertical() ? du[0] : du[1];
      if (sd == 0.0) break;
      double step = s / (sd * h);
      th = std::clamp(th - step, ta, tb);
      if (std::abs(s) < 1e-13 * scale) break;
    }

    // Land on the event with a genuine method step, then polish in time.
    const double t0 = rk.t_prev();
    rk.rewind();
    rk.force_step(std::max(th * h, 1e-300));
    for (int it = 0; it < 3; ++it) {
      const State s = head(rk.y());
      const double sv = stop.section_value(s);
      if (std::abs(sv) <= 1e-12 * scale) break;
      const State f = eval_field(p, s);
      const double sd = dir * (stop.vertical() ? f.x : f.y);
      if (sd == 0.0) break;
      const double dt = -sv / sd;
      if (!(std::abs(dt) < std::max(1e-12, 0.5 * h))) break;
      rk.force_step(dt);
    }

    const State sc = head(rk.y());
    const State f = eval_field(p, sc);
    const double sd = dir * (stop.vertical() ? f.x : f.y);
    const bool dir_ok = want == CrossDirection::Either ||
                        (want == CrossDirection::Increasing && sd > 0.0) ||
                        (want == CrossDirection::Decreasing && sd < 0.0);
    (void)t0;
    if (dir_ok && stop.admits(sc)) return CrossingOutcome::Hit;
    return CrossingOutcome::LandedInvalid;  // caller continues past it
  }
  return CrossingOutcome::None;
}

template <std::size_t N, class RHS, class Recorder>
DriveOutcome<N> drive(const SystemParams& p, RHS rhs, const Vec<N>& y0,
                      const IntegratorOptions& opts, const Section* stop,
                      Recorder&& record) {
  opts.validate();
  detail::Dopri5<N, RHS> rk(rhs, opts.rel_tol, opts.abs_tol);
  rk.init(0.0, y0, opts.initial_step);
  record(0.0, rk.y(), rk.f());

  const auto eq_pts = equilibrium_points(p);
  const auto abscissas = equilibrium_abscissas(p);
  DriveOutcome<N> out;
  out.term = Termination::StepFailure;  // only left on loop exhaustion
  if (near_equilibrium(eq_pts, head(y0), opts.converge_radius)) {
    out.term = Termination::ConvergedToEquilibrium;
    out.label = nearest_label(abscissas, head(y0));
    out.t = 0.0;
    out.y = y0;
    return out;
  }

  const double eps_leave =
      stop ? 1e-9 * std::max(1.0, std::abs(stop->line_offset())) : 0.0;
  bool left_section = stop && std::abs(stop->section_value(head(y0))) > eps_leave;
  CrossDirection want = stop ? stop->direction : CrossDirection::Either;
  double t_skip = -1.0;  // rejected crossings are not re-candidates

  for (int nstep = 0; nstep < kMaxSteps; ++nstep) {
    const double remain = opts.max_time - rk.t();
    if (remain <= 1e-14 * std::max(1.0, std::abs(rk.t()))) {
      out.term = Termination::MaxTime;
      break;
    }
    const auto status = rk.step(remain);
    if (status != detail::Dopri5<N, RHS>::StepStatus::Accepted) {
      out.term = Termination::StepFailure;
      break;
    }

    const State s_now = head(rk.y());
    if (!std::isfinite(s_now.x) || !std::isfinite(s_now.y)) {
      out.term = Termination::StepFailure;
      break;
    }

    if (stop) {
      const double tdir = rhs_dir(rhs);
      const CrossingOutcome c = locate_crossing(rk, p, tdir, *stop, want,
                                                left_section, eps_leave, t_skip);
      if (c == CrossingOutcome::Hit) {
        record(rk.t(), rk.y(), rk.f());
        out.term = Termination::SectionHit;
        out.t = rk.t();
        out.y = rk.y();
        return out;
      }
      if (c == CrossingOutcome::LandedInvalid) {
        t_skip = rk.t() + 1e-10 * std::max(1.0, std::abs(rk.t()));
      }
    }

    record(rk.t(), rk.y(), rk.f());

    const State s_cur = head(rk.y());
    if (weighted_norm(s_cur) > opts.max_radius) {
      out.term = Termination::Escaped;
      break;
    }
    if (near_equilibrium(eq_pts, s_cur, opts.converge_radius)) {
      out.term = Termination::ConvergedToEquilibrium;
      out.label = nearest_label(abscissas, s_cur);
      break;
    }
  }
  out.t = rk.t();
  out.y = rk.y();
  return out;
}

}  // namespace

bool Section::admits(State s) const {
  const double c = coordinate(s);
  if (!(c >= coord_min && c <= coord_max)) return false;
  switch (kind) {
    case SectionKind::PositiveYAxis:
      return s.y > 0.0;
    case SectionKind::NegativeYAxis:
      return s.y < 0.0;
    case SectionKind::PositiveXAxis:
      return s.x > 0.0;
    case SectionKind::NegativeXAxis:
      return s.x < 0.0;
    default:
      return true;
  }
}

State Section::point_at(double coord) const {
  return vertical() ? State{line_offset(), coord} : State{coord, line_offset()};
}

Section Section::negated() const {
  Section n = *this;
  switch (kind) {
    case SectionKind::PositiveYAxis:
      n.kind = SectionKind::NegativeYAxis;
      break;
    case SectionKind::NegativeYAxis:
      n.kind = SectionKind::PositiveYAxis;
      break;
    case SectionKind::PositiveXAxis:
      n.kind = SectionKind::NegativeXAxis;
      break;
    case SectionKind::NegativeXAxis:
      n.kind = SectionKind::PositiveXAxis;
      break;
    case SectionKind::VerticalLine:
    case SectionKind::HorizontalLine:
      n.offset = -offset;
      break;
  }
  n.coord_min = -coord_max;
  n.coord_max = -coord_min;
  switch (direction) {
    case CrossDirection::Increasing:
      n.direction = CrossDirection::Decreasing;
      break;
    case CrossDirection::Decreasing:
      n.direction = CrossDirection::Increasing;
      break;
    case CrossDirection::Either:
      break;
  }
  return n;
}

State Trajectory::at(double t) const {
  if (samples.empty()) throw PreconditionError("empty trajectory");
  if (t <= samples.front().t) return samples.front().s;
  if (t >= samples.back().t) return samples.back().s;
  std::size_t lo = 0, hi = samples.size() - 1;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (samples[mid].t <= t ? lo : hi) = mid;
  }
  const auto& a = samples[lo];
  const auto& b = samples[lo + 1];
  const double h = b.t - a.t;
  const double th = (t - a.t) / h;
  State u;
  const double dx = b.s.x - a.s.x, dy = b.s.y - a.s.y;
  const double qx = (1 - 2 * th) * dx + (th - 1) * h * a.f.x + th * h * b.f.x;
  const double qy = (1 - 2 * th) * dy + (th - 1) * h * a.f.y + th * h * b.f.y;
  u.x = a.s.x + th * dx + th * (th - 1) * qx;
  u.y = a.s.y + th * dy + th * (th - 1) * qy;
  return u;
}

Trajectory integrate(const SystemParams& p, State s0,
                     const IntegratorOptions& opts,
                     const std::optional<Section>& stop, bool backward) {
  Trajectory traj;
  traj.backward = backward;
  const Field2 rhs{&p, backward ? -1.0 : 1.0};
  auto record = [&](double t, const Vec<2>& y, const Vec<2>& f) {
    if (opts.record_samples || traj.samples.size() < 2) {
      traj.samples.push_back({t, {y[0], y[1]}, {f[0], f[1]}});
    } else {
      traj.samples.back() = {t, {y[0], y[1]}, {f[0], f[1]}};
    }
  };
  const Section* sp = stop ? &*stop : nullptr;
  auto out = drive<2>(p, rhs, Vec<2>{s0.x, s0.y}, opts, sp, record);
  traj.termination = out.term;
  if (out.term == Termination::SectionHit) {
    traj.crossing = {out.y[0], out.y[1]};
    traj.crossing_time = out.t;
  }
  traj.converged_label = out.label;
  if (traj.samples.empty() || traj.samples.back().t < out.t) {
    const State fs = eval_field(p, {out.y[0], out.y[1]});
    traj.samples.push_back({out.t, {out.y[0], out.y[1]},
                            backward ? State{-fs.x, -fs.y} : fs});
  }
  return traj;
}

std::optional<ReturnMapResult> try_return_map(const SystemParams& p,
                                              const Section& section,
                                              double y0, bool half,
                                              const IntegratorOptions& opts) {
  const State start = section.point_at(y0);
  const State f0 = eval_field(p, start);
  if (f0.x == 0.0 && f0.y == 0.0) {
    throw PreconditionError("return map started at an equilibrium");
  }

  Section stop = half ? section.negated() : section;
  if (!half && stop.direction == CrossDirection::Either) {
    const double sd = section.vertical() ? f0.x : f0.y;
    if (sd == 0.0) throw PreconditionError("tangential section start");
    stop.direction = sd > 0.0 ? CrossDirection::Increasing
                              : CrossDirection::Decreasing;
  }

  const Field4 rhs{&p, 1.0};
  Vec<4> u0{start.x, start.y, 0.0, 0.0};
  if (section.vertical()) {
    u0[3] = 1.0;
  } else {
    u0[2] = 1.0;
  }
  IntegratorOptions o = opts;
  o.record_samples = false;
  auto out = drive<4>(p, rhs, u0, o, &stop, [](double, const Vec<4>&, const Vec<4>&) {});
  if (out.term != Termination::SectionHit) return std::nullopt;

  const State sc{out.y[0], out.y[1]};
  const State fc = eval_field(p, sc);
  const double sig_f = stop.vertical() ? fc.x : fc.y;
  const double sig_v = stop.vertical() ? out.y[2] : out.y[3];
  // Project the transported tangent onto the section.
  const double px = out.y[2] - fc.x * (sig_v / sig_f);
  const double py = out.y[3] - fc.y * (sig_v / sig_f);
  double value = stop.coordinate(sc);
  double deriv = stop.vertical() ? py : px;
  if (half) {
    value = -value;
    deriv = -deriv;
  }
  return ReturnMapResult{value, deriv, out.t, sc};
}

ReturnMapResult return_map(const SystemParams& p, const Section& section,
                           double y0, bool half, const IntegratorOptions& opts) {
  auto r = try_return_map(p, section, y0, half, opts);
  if (!r) throw NoReturnError("no return to section before escape or max_time");
  return *r;
}

double energy_audit(const SystemParams& p, const Trajectory& traj) {
  if (!p.is_scaled()) {
    throw PreconditionError("energy_audit requires scaled parameters");
  }
  if (traj.samples.size() < 2) return 0.0;
  const double e0 = energy(p, traj.samples.front().s);
  double acc = 0.0;
  double defect = 0.0;
  const double tdir = traj.backward ? -1.0 : 1.0;
  for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
    const auto& a = traj.samples[i];
    const auto& b = traj.samples[i + 1];
    const double h = b.t - a.t;
    // composite Simpson on the dense output, 4 panels per step
    double nodes[5];
    nodes[0] = energy_rate(p, a.s);
    nodes[4] = energy_rate(p, b.s);
    for (int k = 1; k < 4; ++k) {
      nodes[k] = energy_rate(p, traj.at(a.t + 0.25 * k * h));
    }
    acc += tdir * h / 12.0 *
           (nodes[0] + 4 * nodes[1] + 2 * nodes[2] + 4 * nodes[3] + nodes[4]);
    defect = std::max(defect,
                      std::abs(energy(p, b.s) - e0 - acc));
  }
  return defect;
}

std::vector<double> equilibrium_abscissas(const SystemParams& p) {
  std::vector<double> xs{0.0};
  auto push_pair = [&xs](double z) {
    if (z > 0.0) {
      const double r = std::sqrt(z);
      xs.push_back(r);
      xs.push_back(-r);
    }
  };
  if (p.is_scaled()) {
    push_pair(1.0);
    push_pair(-p.scaled_params().a1);
  } else {
    const RawParams& r = p.raw_params();
    const double disc = r.mu2 * r.mu2 - 4.0 * r.mu1;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      push_pair(0.5 * (-r.mu2 + sq));
      push_pair(0.5 * (-r.mu2 - sq));
    }
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return std::abs(a - b) < 1e-14; }),
           xs.end());
  return xs;
}

}  // namespace lienard
