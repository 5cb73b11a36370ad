#include "lienard/infinity.hpp"

#include <cmath>

namespace lienard {

namespace {
const double kThreshold = 2.0 * std::sqrt(3.0);
}

const char* to_string(Chart c) {
  switch (c) {
    case Chart::Ux: return "Ux";
    case Chart::Vx: return "Vx";
    case Chart::Uy: return "Uy";
    case Chart::Vy: return "Vy";
  }
  return "?";
}

std::pair<double, double> ChartField::eval(double u, double v) const {
  double du = 0.0, dv = 0.0;
  double ui = 1.0;
  for (int i = 0; i <= 6; ++i) {
    double uivj = ui;
    for (int j = 0; j <= 5; ++j) {
      du += cu[i][j] * uivj;
      dv += cv[i][j] * uivj;
      uivj *= v;
    }
    ui *= u;
  }
  return {du, dv};
}

std::vector<double> ChartField::equator_polynomial() const {
  std::vector<double> c(7, 0.0);
  for (int i = 0; i <= 6; ++i) c[i] = cu[i][0];
  while (c.size() > 1 && c.back() == 0.0) c.pop_back();
  return c;
}

bool ChartField::equator_invariant() const {
  for (int i = 0; i <= 6; ++i) {
    if (cv[i][0] != 0.0) return false;
  }
  return true;
}

ChartField chart_field(const SystemParams& p, Chart chart) {
  const LienardForms lf = lienard_forms(p);
  ChartField cf;
  cf.chart = chart;
  if (chart == Chart::Ux || chart == Chart::Vx) {
    // u' = -3u^2 - f2 u - g5 - g3 v^2 - f0 u v^2 - g1 v^4,  v' = -u v.
    cf.cu[2][0] = -3.0;
    cf.cu[1][0] = -lf.f2;
    cf.cu[0][0] = -lf.g5;
    cf.cu[0][2] = -lf.g3;
    cf.cu[1][2] = -lf.f0;
    cf.cu[0][4] = -lf.g1;
    cf.cv[1][1] = -1.0;
  } else {
    // u' = 1 + (g5 u^6 + f2 u^3 + g3 u^4 v^2 + f0 u v^2 + g1 u^2 v^4)/3,
    // v' = (g5 u^5 + f2 u^2 + g3 u^3 v^2 + f0 v^2 + g1 u v^4) v / 3.
    cf.cu[0][0] = 1.0;
    cf.cu[6][0] = lf.g5 / 3.0;
    cf.cu[3][0] = lf.f2 / 3.0;
    cf.cu[4][2] = lf.g3 / 3.0;
    cf.cu[1][2] = lf.f0 / 3.0;
    cf.cu[2][4] = lf.g1 / 3.0;
    cf.cv[5][1] = lf.g5 / 3.0;
    cf.cv[2][1] = lf.f2 / 3.0;
    cf.cv[3][3] = lf.g3 / 3.0;
    cf.cv[0][3] = lf.f0 / 3.0;
    cf.cv[1][5] = lf.g1 / 3.0;
  }
  return cf;
}

std::vector<InfinityEquilibrium> infinity_equilibria(const SystemParams& p) {
  const double b = p.b_or_delta();
  const double d = b - kThreshold;
  std::vector<InfinityEquilibrium> out;
  if (std::abs(d) <= 1e-12) {
    // Double equator root u = -b/6 in both x-charts (surface DE).
    for (Chart c : {Chart::Ux, Chart::Vx}) {
      InfinityEquilibrium eq;
      eq.chart = c;
      eq.u = -b / 6.0;
      eq.lambda_tangent = 0.0;
      eq.lambda_radial = -eq.u;
      eq.degenerate = true;
      out.push_back(eq);
    }
    return out;
  }
  if (std::abs(d) <= 1e-9) {
    throw ThresholdAmbiguityError("b within 1e-9 of 2*sqrt(3)");
  }
  if (d < 0.0) return out;
  const double sq = std::sqrt(b * b - 12.0);
  for (Chart c : {Chart::Ux, Chart::Vx}) {
    for (double sign : {+1.0, -1.0}) {
      InfinityEquilibrium eq;
      eq.chart = c;
      eq.u = (-b + sign * sq) / 6.0;
      eq.lambda_tangent = -6.0 * eq.u - b;  // = -sign * sq
      eq.lambda_radial = -eq.u;
      out.push_back(eq);
    }
  }
  return out;
}

EquatorStability equator_stability_probe(const SystemParams& p, double radius,
                                         const IntegratorOptions& opts) {
  if (!(p.b_or_delta() < kThreshold - 1e-9)) {
    throw PreconditionError(
        "equator probe requires b < 2*sqrt(3): the equator must be a closed "
        "orbit");
  }
  if (!(radius > 0.0)) throw PreconditionError("radius must be positive");

  State s{0.0, radius * radius * radius};
  const double target = radius / 2.0;
  double elapsed = 0.0;
  double chunk = 1e-6;
  IntegratorOptions o = opts;
  o.max_radius = std::max(opts.max_radius, 10.0 * radius);
  while (elapsed < opts.max_time) {
    o.max_time = std::min(chunk, opts.max_time - elapsed);
    const Trajectory traj = integrate(p, s, o);
    for (const auto& smp : traj.samples) {
      if (weighted_norm(smp.s) < target) return EquatorStability::Repelling;
    }
    if (traj.termination == Termination::Escaped) {
      return EquatorStability::NotRepelling;
    }
    if (traj.termination == Termination::StepFailure) {
      throw NoConclusionError("integrator failure during equator probe");
    }
    s = traj.samples.back().s;
    elapsed += traj.samples.back().t;
    chunk *= 4.0;
  }
  throw NoConclusionError("equator probe undecided before max_time");
}

State disc_projection(State s) {
  const State q{s.x, std::cbrt(s.y)};
  const double r = std::hypot(q.x, q.y);
  const double f = 1.0 / (1.0 + r);
  return {q.x * f, q.y * f};
}

}  // namespace lienard
