#include "lienard/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "lienard/flow.hpp"

namespace lienard {

namespace {

const double kDegenerateSplit = 2.0 * std::sqrt(3.0);

// Raw view with s = 1; built directly so the delta = 0 Hamiltonian limit
// (b = 0) classifies as the limiting Table-1 rows instead of being rejected.
RawParams as_raw(const SystemParams& p) {
  if (p.is_raw()) return p.raw_params();
  const ScaledParams& sc = p.scaled_params();
  return RawParams{-sc.a1, sc.a1 - 1.0, sc.a2 * sc.delta, sc.delta};
}

// Exact-comparison-within-tol: |r| <= snap counts as on-surface, snap < |r|
// <= tol is ambiguous when the two sides carry different labels.
enum class Zone { On, Ambiguous, Off };

Zone zone(double r, double tol) {
  const double snap = tol * 1e-3;
  const double a = std::abs(r);
  if (a <= snap) return Zone::On;
  if (a <= tol) return Zone::Ambiguous;
  return Zone::Off;
}

[[noreturn]] void ambiguous(const char* what) {
  throw ToleranceAmbiguityError(std::string("parameter point lies within tol "
                                            "of two classification rows: ") +
                                what);
}

double origin_focal(const RawParams& r) {
  return -r.b / (8.0 * std::sqrt(r.mu1));
}

double outer_focal(const RawParams& r) {
  const double disc = r.mu2 * r.mu2 - 4.0 * r.mu1;
  const double sq = std::sqrt(disc);
  return r.b * (2.0 * sq - r.mu2) /
         (4.0 * sq * std::sqrt(disc - r.mu2 * sq));
}

struct ClassifyResult {
  ClassKind kind;
  std::optional<double> focal;
  bool inferred = false;
};

ClassifyResult classify_impl(const RawParams& r, const Equilibrium& eq,
                             double tol, bool strict) {
  const double disc = r.mu2 * r.mu2 - 4.0 * r.mu1;

  if (eq.label == EquilibriumLabel::El1 || eq.label == EquilibriumLabel::Er1) {
    return {ClassKind::Saddle, std::nullopt};
  }

  if (eq.label == EquilibriumLabel::E0) {
    const Zone z1 = zone(r.mu1, tol);
    if (z1 == Zone::Ambiguous && strict) ambiguous("mu1 ~ 0");
    if (z1 == Zone::On || (z1 == Zone::Ambiguous && !strict)) {
      // mu1 = 0 block of Table 1.
      const Zone z2 = zone(r.mu2, tol);
      const Zone z3 = zone(r.mu3, tol);
      const bool mu2_zero = z2 == Zone::On || (z2 == Zone::Ambiguous && !strict);
      if (z2 == Zone::Ambiguous && strict) ambiguous("mu2 ~ 0 at mu1 = 0");
      if (!mu2_zero && r.mu2 < 0.0) return {ClassKind::DegenerateSaddle, std::nullopt};
      if (z3 == Zone::Ambiguous && strict) ambiguous("mu3 ~ 0 at mu1 = 0");
      const bool mu3_zero = z3 == Zone::On || (z3 == Zone::Ambiguous && !strict);
      if (!mu3_zero) {
        return {r.mu3 > 0.0 ? ClassKind::StableDegenerateNode
                            : ClassKind::UnstableDegenerateNode,
                std::nullopt};
      }
      if (!mu2_zero) return {ClassKind::StableFocusDegenerate, std::nullopt};
      // mu1 = mu2 = mu3 = 0: split on b vs 2*sqrt(3).
      const Zone zb = zone(r.b - kDegenerateSplit, tol);
      if (zb == Zone::Ambiguous && strict) ambiguous("b ~ 2*sqrt(3)");
      if (zb == Zone::On || r.b > kDegenerateSplit) {
        return {ClassKind::StableDegenerateNode, std::nullopt, true};
      }
      return {ClassKind::StableFocusDegenerate, std::nullopt};
    }
    if (r.mu1 < 0.0) return {ClassKind::Saddle, std::nullopt};
    // mu1 > 0: antisaddle, decided by the trace mu3.
    const Zone z3 = zone(r.mu3, tol);
    if (z3 == Zone::Ambiguous && strict) ambiguous("mu3 ~ 0 (Hopf H1)");
    if (z3 == Zone::On || (z3 == Zone::Ambiguous && !strict)) {
      return {ClassKind::StableWeakFocusOrder1, origin_focal(r)};
    }
    return {r.mu3 > 0.0 ? ClassKind::Sink : ClassKind::Source, std::nullopt};
  }

  // Outer pair El2 / Er2.
  const double disc_scale = std::max(1.0, r.mu2 * r.mu2);
  const Zone zd = zone(disc / disc_scale, tol);
  if (zd == Zone::Ambiguous && strict) ambiguous("Delta ~ 0 (SN)");
  if (zd == Zone::On || (zd == Zone::Ambiguous && !strict) || eq.double_root) {
    // Saddle-node / cusp row: mu2 = -2 sqrt(mu1) < 0.
    const double k = r.mu3 - r.b * r.mu2 / 2.0;
    const Zone zk = zone(k / std::max(1.0, std::abs(r.b * r.mu2 / 2.0)), tol);
    if (zk == Zone::Ambiguous && strict) ambiguous("mu3 ~ b*mu2/2 (BT)");
    if (zk == Zone::On || (zk == Zone::Ambiguous && !strict)) {
      return {ClassKind::Cusp, std::nullopt};
    }
    return {k > 0.0 ? ClassKind::SaddleNodeStableSector
                    : ClassKind::SaddleNodeUnstableSector,
            std::nullopt};
  }
  const double sq = std::sqrt(disc);
  const double h2 = r.b * (r.mu2 - sq) / 2.0;  // Hopf H2 level for mu3
  const double rt = r.mu3 - h2;
  const Zone zt = zone(rt / std::max(1.0, std::abs(h2)), tol);
  if (zt == Zone::Ambiguous && strict) ambiguous("mu3 ~ H2 level");
  if (zt == Zone::On || (zt == Zone::Ambiguous && !strict)) {
    return {ClassKind::UnstableWeakFocusOrder1, outer_focal(r)};
  }
  return {rt > 0.0 ? ClassKind::Sink : ClassKind::Source, std::nullopt};
}

}  // namespace

const char* to_string(EquilibriumLabel label) {
  switch (label) {
    case EquilibriumLabel::El2: return "El2";
    case EquilibriumLabel::El1: return "El1";
    case EquilibriumLabel::E0: return "E0";
    case EquilibriumLabel::Er1: return "Er1";
    case EquilibriumLabel::Er2: return "Er2";
  }
  return "?";
}

const char* to_string(ClassKind kind) {
  switch (kind) {
    case ClassKind::Sink: return "sink";
    case ClassKind::Source: return "source";
    case ClassKind::Saddle: return "saddle";
    case ClassKind::StableWeakFocusOrder1: return "stable weak focus of order one";
    case ClassKind::UnstableWeakFocusOrder1: return "unstable weak focus of order one";
    case ClassKind::SaddleNodeStableSector: return "saddle-node with stable nodal sector";
    case ClassKind::SaddleNodeUnstableSector: return "saddle-node with unstable nodal sector";
    case ClassKind::Cusp: return "cusp";
    case ClassKind::StableDegenerateNode: return "stable degenerate node";
    case ClassKind::UnstableDegenerateNode: return "unstable degenerate node";
    case ClassKind::DegenerateSaddle: return "degenerate saddle";
    case ClassKind::StableFocusDegenerate: return "stable focus (degenerate)";
  }
  return "?";
}

const char* to_string(Surface s) {
  switch (s) {
    case Surface::P1: return "P1";
    case Surface::P2: return "P2";
    case Surface::SN: return "SN";
    case Surface::H1: return "H1";
    case Surface::H2: return "H2";
    case Surface::DBT1: return "DBT1";
    case Surface::DBT2: return "DBT2";
    case Surface::BT: return "BT";
    case Surface::T: return "T";
    case Surface::DE: return "DE";
  }
  return "?";
}

std::vector<Equilibrium> find_equilibria(const SystemParams& p, double tol) {
  const RawParams r = as_raw(p);
  const double disc = r.mu2 * r.mu2 - 4.0 * r.mu1;
  const auto xs = equilibrium_abscissas(p);

  std::vector<Equilibrium> eqs;
  eqs.reserve(xs.size());
  const std::size_t n = xs.size();
  for (std::size_t i = 0; i < n; ++i) {
    Equilibrium eq;
    eq.x = xs[i];
    eq.discriminant = disc;
    if (n == 1) {
      eq.label = EquilibriumLabel::E0;
    } else if (n == 3) {
      const EquilibriumLabel labels[] = {EquilibriumLabel::El2,
                                         EquilibriumLabel::E0,
                                         EquilibriumLabel::Er2};
      eq.label = labels[i];
      if (i != 1) {
        const double snap = tol * 1e-3 * std::max(1.0, r.mu2 * r.mu2);
        eq.double_root = std::abs(disc) <= snap;
      }
    } else {
      const EquilibriumLabel labels[] = {
          EquilibriumLabel::El2, EquilibriumLabel::El1, EquilibriumLabel::E0,
          EquilibriumLabel::Er1, EquilibriumLabel::Er2};
      eq.label = labels[i];
    }
    // Jacobian data in the native parameterization of p.
    eq.jac_det = restoring_deriv(p, eq.x);
    eq.jac_tr = -damping(p, eq.x);
    const auto res = classify_impl(r, eq, tol, /*strict=*/false);
    eq.kind = res.kind;
    eq.focal_value = res.focal;
    eq.stability_inferred = res.inferred;
    eqs.push_back(eq);
  }
  return eqs;
}

ClassKind classify(const SystemParams& p, const Equilibrium& eq, double tol) {
  return classify_impl(as_raw(p), eq, tol, /*strict=*/true).kind;
}

double first_focal_value(const SystemParams& p, const Equilibrium& eq) {
  if (!(std::abs(eq.jac_tr) <= 1e-10) || !(eq.jac_det > 0.0)) {
    throw NotWeakFocusError("equilibrium is not a weak-focus candidate");
  }
  const RawParams r = as_raw(p);
  if (eq.label == EquilibriumLabel::E0) {
    if (!(r.mu1 > 0.0)) throw NotWeakFocusError("origin needs mu1 > 0");
    return origin_focal(r);
  }
  if (eq.label == EquilibriumLabel::El2 || eq.label == EquilibriumLabel::Er2) {
    return outer_focal(r);
  }
  throw NotWeakFocusError("saddles have no focal value");
}

SurfaceMembership surface_membership(const SystemParams& p, double tol) {
  SurfaceMembership m;
  const double de_level = p.b_or_delta() - kDegenerateSplit;
  if (std::abs(de_level) <= tol) m.residuals[Surface::DE] = de_level;

  if (p.is_raw()) {
    const RawParams& r = p.raw_params();
    const double disc = r.mu2 * r.mu2 - 4.0 * r.mu1;
    const double sn_res = r.mu1 - r.mu2 * r.mu2 / 4.0;
    const double sn_scale = std::max(1.0, r.mu2 * r.mu2);
    if (std::abs(r.mu1) <= tol && r.mu2 > tol) m.residuals[Surface::P1] = r.mu1;
    if (std::abs(r.mu1) <= tol && r.mu2 < -tol) m.residuals[Surface::P2] = r.mu1;
    if (r.mu2 < -tol && std::abs(sn_res) <= tol * sn_scale) {
      m.residuals[Surface::SN] = sn_res;
    }
    if (r.mu1 > tol && std::abs(r.mu3) <= tol) m.residuals[Surface::H1] = r.mu3;
    if (disc >= -tol * sn_scale) {
      const double h2 = r.b * (r.mu2 - std::sqrt(std::max(disc, 0.0))) / 2.0;
      const double res = r.mu3 - h2;
      if (r.mu1 < r.mu2 * r.mu2 / 4.0 + tol * sn_scale &&
          std::abs(res) <= tol * std::max(1.0, std::abs(h2))) {
        m.residuals[Surface::H2] = res;
      }
    }
    if (std::abs(r.mu1) <= tol && std::abs(r.mu3) <= tol) {
      const double res = std::abs(r.mu1) > std::abs(r.mu3) ? r.mu1 : r.mu3;
      if (r.mu2 > tol) m.residuals[Surface::DBT1] = res;
      if (r.mu2 < -tol) m.residuals[Surface::DBT2] = res;
    }
    if (m.contains(Surface::SN)) {
      const double bt_res = r.mu3 - r.b * r.mu2 / 2.0;
      if (std::abs(bt_res) <= tol * std::max(1.0, std::abs(r.b * r.mu2 / 2.0))) {
        m.residuals[Surface::BT] = bt_res;
      }
    }
    return m;
  }

  const ScaledParams& s = p.scaled_params();
  if (std::abs(s.a1) <= tol) m.residuals[Surface::P2] = s.a1;
  if (std::abs(s.a1 + 1.0) <= tol) m.residuals[Surface::T] = s.a1 + 1.0;
  if (std::abs(s.a2) <= tol && s.a1 < -tol && s.a1 >= -1.0 - tol) {
    m.residuals[Surface::H1] = s.a2;
  }
  if (std::abs(s.a2 + 1.0) <= tol && s.a1 >= -1.0 - tol) {
    m.residuals[Surface::H2] = s.a2 + 1.0;  // closure includes the BT corner
  }
  if (std::abs(s.a1) <= tol && std::abs(s.a2) <= tol) {
    m.residuals[Surface::DBT2] =
        std::abs(s.a1) > std::abs(s.a2) ? s.a1 : s.a2;
  }
  if (std::abs(s.a1 + 1.0) <= tol && std::abs(s.a2 + 1.0) <= tol) {
    m.residuals[Surface::BT] =
        std::abs(s.a1 + 1.0) > std::abs(s.a2 + 1.0) ? s.a1 + 1.0 : s.a2 + 1.0;
  }
  return m;
}

}  // namespace lienard
