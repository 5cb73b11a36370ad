#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lienard/system.hpp"

namespace lienard {

enum class EquilibriumLabel { El2, El1, E0, Er1, Er2 };
const char* to_string(EquilibriumLabel label);

enum class ClassKind {
  Sink,
  Source,
  Saddle,
  StableWeakFocusOrder1,
  UnstableWeakFocusOrder1,
  SaddleNodeStableSector,
  SaddleNodeUnstableSector,
  Cusp,
  StableDegenerateNode,
  UnstableDegenerateNode,
  DegenerateSaddle,
  StableFocusDegenerate,
};
const char* to_string(ClassKind kind);

struct Equilibrium {
  double x = 0.0;  // y = 0 always
  EquilibriumLabel label = EquilibriumLabel::E0;
  double jac_det = 0.0;
  double jac_tr = 0.0;
  ClassKind kind = ClassKind::Sink;
  std::optional<double> focal_value;  // present exactly for weak foci
  double discriminant = 0.0;          // Delta = mu2^2 - 4 mu1 (raw form)
  bool double_root = false;           // merged outer pair on SN
  bool stability_inferred = false;    // Table 1 leaves b>=2*sqrt(3) open
};

/// All finite equilibria sorted by abscissa, classified with the given tol.
/// Near-boundary parameter points are resolved to the on-surface row here
/// (classify() is the strict variant that raises ToleranceAmbiguity).
std::vector<Equilibrium> find_equilibria(const SystemParams& p,
                                         double tol = 1e-9);

/// Table-1 row of eq under exact-comparison-within-tol semantics; raises
/// ToleranceAmbiguityError when the point lies within tol of two rows with
/// different labels.
ClassKind classify(const SystemParams& p, const Equilibrium& eq,
                   double tol = 1e-9);

/// First focal (Lyapunov) value at a weak-focus candidate:
/// -b/(8 sqrt(mu1)) at the origin, the Appendix-B closed form at the outer
/// pair.  Raises NotWeakFocusError unless jac_tr ~ 0 and jac_det > 0.
double first_focal_value(const SystemParams& p, const Equilibrium& eq);

enum class Surface { P1, P2, SN, H1, H2, DBT1, DBT2, BT, T, DE };
const char* to_string(Surface s);

struct SurfaceMembership {
  std::map<Surface, double> residuals;  // present surfaces only
  bool contains(Surface s) const { return residuals.count(s) != 0; }
};

/// Membership in the local bifurcation surfaces, reported for the native
/// parameter form (raw: P1,P2,SN,H1,H2,DBT1,DBT2,BT,DE; scaled:
/// P2,T,H1,H2,DBT2,BT,DE).
SurfaceMembership surface_membership(const SystemParams& p, double tol = 1e-9);

}  // namespace lienard
