#pragma once

#include <array>
#include <cmath>
#include <utility>

#include "lienard/errors.hpp"

namespace lienard {

/// Phase point of the planar system.
struct State {
  double x = 0.0;
  double y = 0.0;

  friend State operator-(State s) { return {-s.x, -s.y}; }
  friend State operator+(State a, State b) { return {a.x + b.x, a.y + b.y}; }
  friend State operator-(State a, State b) { return {a.x - b.x, a.y - b.y}; }
  friend State operator*(double c, State s) { return {c * s.x, c * s.y}; }
};

enum class ParamForm { Raw, Scaled };

/// Raw quadruple of  x' = y,  y' = -(mu1 x + mu2 x^3 + x^5) - (mu3 + b x^2) y.
struct RawParams {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  double b = 1.0;
};

/// Scaled triple of  x' = y,  y' = -x(a1 + x^2)(-1 + x^2) - delta(a2 + x^2) y.
struct ScaledParams {
  double a1 = 0.0;
  double a2 = 0.0;
  double delta = 1.0;
};

/// Either parameterization of the quintic Lienard family; the single source
/// of truth for every downstream operation.  Raw inputs with b < 0 are
/// normalized at construction through (y,t,mu3,b) -> (-y,-t,-mu3,-b), which
/// preserves orbits up to the time/velocity reflection.
class SystemParams {
 public:
  static SystemParams raw(double mu1, double mu2, double mu3, double b);
  static SystemParams scaled(double a1, double a2, double delta);

  ParamForm form() const { return form_; }
  bool is_raw() const { return form_ == ParamForm::Raw; }
  bool is_scaled() const { return form_ == ParamForm::Scaled; }
  bool normalized_from_negative_b() const { return flipped_b_; }

  const RawParams& raw_params() const;
  const ScaledParams& scaled_params() const;

  /// Damping strength that controls the equator at infinity: b or delta.
  double b_or_delta() const { return is_raw() ? raw_.b : scaled_.delta; }

 private:
  SystemParams() = default;
  ParamForm form_ = ParamForm::Raw;
  RawParams raw_;
  ScaledParams scaled_;
  bool flipped_b_ = false;
};

/// Restoring term g(x); odd quintic for both parameterizations.
double restoring(const SystemParams& p, double x);
/// Derivative g'(x).
double restoring_deriv(const SystemParams& p, double x);
/// Damping coefficient f(x); even quadratic.
double damping(const SystemParams& p, double x);
/// F(x) = integral of f from 0 to x.
double damping_primitive(const SystemParams& p, double x);

/// Time derivative of (x, y) under the active parameterization.
State eval_field(const SystemParams& p, State s);

/// Divergence of the field at s: -mu3 - b x^2 (raw), -delta(a2 + x^2) (scaled).
double divergence(const SystemParams& p, State s);

/// Jacobian of the field at s, row-major [[0,1],[-g'(x)-f'(x)y, -f(x)]].
std::array<double, 4> jacobian(const SystemParams& p, State s);

/// Z2 image (-x, -y); an involution, and the field is odd under it.
inline State symmetry_image(State s) { return -s; }

/// Whether (mu1, mu2) lies in G2, the domain of the scaling transformation.
bool in_scaling_domain(double mu1, double mu2);

/// Scaling conjugacy (x,y,t) -> (s x, s^3 y, t/s^2):
/// returns the scaled triple and the scale factor s.
/// Throws DomainError when (mu1, mu2) is outside G2.
std::pair<SystemParams, double> to_scaled(const SystemParams& p);

/// Inverse of to_scaled for a given scale factor (default s = 1).
SystemParams from_scaled(const SystemParams& p, double s = 1.0);

/// First integral of the delta = 0 system:
/// E(x,y) = x^6/6 + (a1-1)x^4/4 - a1 x^2/2 + y^2/2.
double energy(const SystemParams& p, State s);

/// dE/dt along the scaled field: -delta (a2 + x^2) y^2.
double energy_rate(const SystemParams& p, State s);

/// Coefficient view of g, f, F and the energy integrand (scaled or raw).
struct LienardForms {
  // g(x) = g1 x + g3 x^3 + g5 x^5 (odd), f(x) = f0 + f2 x^2 (even),
  // F(x) = f0 x + f2 x^3/3, int_0^x g = e2 x^2 + e4 x^4 + e6 x^6.
  double g1 = 0.0, g3 = 0.0, g5 = 1.0;
  double f0 = 0.0, f2 = 0.0;
  double F1 = 0.0, F3 = 0.0;
  double e2 = 0.0, e4 = 0.0, e6 = 0.0;
};

LienardForms lienard_forms(const SystemParams& p);

}  // namespace lienard
