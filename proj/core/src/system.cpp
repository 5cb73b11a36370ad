#include "lienard/system.hpp"

#include <cmath>

namespace lienard {

SystemParams SystemParams::raw(double mu1, double mu2, double mu3, double b) {
  if (!(std::isfinite(mu1) && std::isfinite(mu2) && std::isfinite(mu3) &&
        std::isfinite(b))) {
    throw DomainError("raw parameters must be finite");
  }
  if (b == 0.0) throw DomainError("raw parameters require b != 0");
  SystemParams p;
  p.form_ = ParamForm::Raw;
  if (b < 0.0) {
    // (y,t,mu3,b) -> (-y,-t,-mu3,-b) leaves the orbit structure invariant.
    p.raw_ = RawParams{mu1, mu2, -mu3, -b};
    p.flipped_b_ = true;
  } else {
    p.raw_ = RawParams{mu1, mu2, mu3, b};
  }
  return p;
}

SystemParams SystemParams::scaled(double a1, double a2, double delta) {
  if (!(std::isfinite(a1) && std::isfinite(a2) && std::isfinite(delta))) {
    throw DomainError("scaled parameters must be finite");
  }
  // Omega has delta > 0; delta = 0 is admitted as the Hamiltonian reference
  // limit that the Abelian-integral machinery perturbs from.
  if (!(delta >= 0.0)) throw DomainError("scaled parameters require delta >= 0");
  if (!(a1 >= -1.0)) throw DomainError("scaled parameters require a1 >= -1");
  SystemParams p;
  p.form_ = ParamForm::Scaled;
  p.scaled_ = ScaledParams{a1, a2, delta};
  return p;
}

const RawParams& SystemParams::raw_params() const {
  if (!is_raw()) throw PreconditionError("parameters are not in raw form");
  return raw_;
}

const ScaledParams& SystemParams::scaled_params() const {
  if (!is_scaled()) throw PreconditionError("parameters are not in scaled form");
  return scaled_;
}

// Odd/even factorizations keep the field exactly odd in floating point,
// which the equivariance contract of the flow module relies on.
double restoring(const SystemParams& p, double x) {
  const double x2 = x * x;
  if (p.is_raw()) {
    const RawParams& r = p.raw_params();
    return x * (r.mu1 + x2 * (r.mu2 + x2));
  }
  const ScaledParams& s = p.scaled_params();
  return x * ((s.a1 + x2) * (-1.0 + x2));
}

double restoring_deriv(const SystemParams& p, double x) {
  const double x2 = x * x;
  if (p.is_raw()) {
    const RawParams& r = p.raw_params();
    return r.mu1 + x2 * (3.0 * r.mu2 + 5.0 * x2);
  }
  const ScaledParams& s = p.scaled_params();
  return -s.a1 + x2 * (3.0 * (s.a1 - 1.0) + 5.0 * x2);
}

double damping(const SystemParams& p, double x) {
  const double x2 = x * x;
  if (p.is_raw()) {
    const RawParams& r = p.raw_params();
    return r.mu3 + r.b * x2;
  }
  const ScaledParams& s = p.scaled_params();
  return s.delta * (s.a2 + x2);
}

double damping_primitive(const SystemParams& p, double x) {
  const double x2 = x * x;
  if (p.is_raw()) {
    const RawParams& r = p.raw_params();
    return x * (r.mu3 + r.b * x2 / 3.0);
  }
  const ScaledParams& s = p.scaled_params();
  return s.delta * x * (s.a2 + x2 / 3.0);
}

State eval_field(const SystemParams& p, State s) {
  return {s.y, -restoring(p, s.x) - damping(p, s.x) * s.y};
}

double divergence(const SystemParams& p, State s) {
  return -damping(p, s.x);
}

double damping_deriv(const SystemParams& p, double x) {
  const double c = p.is_raw() ? p.raw_params().b
                              : p.scaled_params().delta;
  return 2.0 * c * x;
}

std::array<double, 4> jacobian(const SystemParams& p, State s) {
  return {0.0, 1.0, -restoring_deriv(p, s.x) - damping_deriv(p, s.x) * s.y,
          -damping(p, s.x)};
}

bool in_scaling_domain(double mu1, double mu2) {
  const double disc = mu2 * mu2 - 4.0 * mu1;
  return disc >= 0.0 && (-mu2 + std::sqrt(disc)) > 0.0;
}

std::pair<SystemParams, double> to_scaled(const SystemParams& p) {
  if (p.is_scaled()) return {p, 1.0};
  const RawParams& r = p.raw_params();
  if (!in_scaling_domain(r.mu1, r.mu2)) {
    throw DomainError("(mu1, mu2) lies outside G2; no scaled form exists");
  }
  const double disc = r.mu2 * r.mu2 - 4.0 * r.mu1;
  const double s2 = 0.5 * (-r.mu2 + std::sqrt(disc));
  const double s = std::sqrt(s2);
  const double a1 = r.mu2 / s2 + 1.0;
  const double a2 = r.mu3 / (r.b * s2);
  return {SystemParams::scaled(a1, a2, r.b), s};
}

SystemParams from_scaled(const SystemParams& p, double s) {
  if (p.is_raw()) return p;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("from_scaled requires a finite scale factor s > 0");
  }
  const ScaledParams& sc = p.scaled_params();
  const double s2 = s * s;
  const double mu2 = (sc.a1 - 1.0) * s2;
  const double mu1 = -sc.a1 * s2 * s2;
  const double mu3 = sc.a2 * sc.delta * s2;
  return SystemParams::raw(mu1, mu2, mu3, sc.delta);
}

double energy(const SystemParams& p, State s) {
  const SystemParams q = p.is_scaled() ? p : to_scaled(p).first;
  const double a1 = q.scaled_params().a1;
  const double x2 = s.x * s.x;
  return x2 * (-a1 / 2.0 + x2 * ((a1 - 1.0) / 4.0 + x2 / 6.0)) +
         0.5 * s.y * s.y;
}

double energy_rate(const SystemParams& p, State s) {
  const SystemParams q = p.is_scaled() ? p : to_scaled(p).first;
  const ScaledParams& sc = q.scaled_params();
  return -sc.delta * (sc.a2 + s.x * s.x) * s.y * s.y;
}

LienardForms lienard_forms(const SystemParams& p) {
  LienardForms lf;
  if (p.is_raw()) {
    const RawParams& r = p.raw_params();
    lf.g1 = r.mu1;
    lf.g3 = r.mu2;
    lf.g5 = 1.0;
    lf.f0 = r.mu3;
    lf.f2 = r.b;
  } else {
    const ScaledParams& s = p.scaled_params();
    lf.g1 = -s.a1;
    lf.g3 = s.a1 - 1.0;
    lf.g5 = 1.0;
    lf.f0 = s.delta * s.a2;
    lf.f2 = s.delta;
  }
  lf.F1 = lf.f0;
  lf.F3 = lf.f2 / 3.0;
  lf.e2 = lf.g1 / 2.0;
  lf.e4 = lf.g3 / 4.0;
  lf.e6 = lf.g5 / 6.0;
  return lf;
}

}  // namespace lienard
