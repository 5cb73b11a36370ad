#pragma once

#include <array>
#include <utility>
#include <vector>

#include "lienard/flow.hpp"
#include "lienard/system.hpp"

namespace lienard {

/// Directional charts of the weighted Poincare compactification with
/// weights (1,3):  Ux: (x,y) = (1/v, u/v^3),  Uy: (x,y) = (u/v, 1/v^3),
/// and the antipodal images Vx: (-1/v, -u/v^3), Vy: (-u/v, -1/v^3).
/// With the antipodal convention the Vx/Vy equations coincide with Ux/Uy
/// by the Z2 equivariance of the field.
enum class Chart { Ux, Vx, Uy, Vy };
const char* to_string(Chart c);

/// Polynomial chart field after the dtau = dt / v^2 time rescaling.
struct ChartField {
  Chart chart = Chart::Ux;
  // coeff[i][j] multiplies u^i v^j; u-degree <= 6, v-degree <= 5.
  std::array<std::array<double, 6>, 7> cu{};
  std::array<std::array<double, 6>, 7> cv{};

  std::pair<double, double> eval(double u, double v) const;
  /// Coefficients (ascending in u) of the u-equation restricted to v = 0.
  std::vector<double> equator_polynomial() const;
  /// True when every monomial of the v-equation carries a factor v.
  bool equator_invariant() const;
};

ChartField chart_field(const SystemParams& p, Chart chart);

struct InfinityEquilibrium {
  Chart chart = Chart::Ux;
  double u = 0.0;
  double lambda_tangent = 0.0;  // eigenvalue along the equator
  double lambda_radial = 0.0;   // eigenvalue transverse to the equator
  bool degenerate = false;      // double equator root (surface DE)
};

/// Equator equilibria; empty iff b < 2*sqrt(3).  Raises
/// ThresholdAmbiguityError when b is within 1e-9 of the threshold without
/// being exactly on it.
std::vector<InfinityEquilibrium> infinity_equilibria(const SystemParams& p);

enum class EquatorStability { Repelling, NotRepelling };

/// Integrates from weighted radius `radius` on the positive y-axis;
/// Repelling iff the weighted radius drops below radius/2 before max_time.
/// Requires b < 2*sqrt(3) (the equator is a closed orbit).
EquatorStability equator_stability_probe(const SystemParams& p, double radius,
                                         const IntegratorOptions& opts = {});

/// Disc rendering map: (x,y) -> (x, cbrt(y)) followed by r -> r/(1+r).
State disc_projection(State s);

}  // namespace lienard
