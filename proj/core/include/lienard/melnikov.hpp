#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lienard/system.hpp"

namespace lienard {

/// Critical energies of the delta = 0 Hamiltonian:
/// e1 = min{0, -a1/4 - 1/12},  e2 = a1^2/4 + a1^3/12.
/// Levels e > e2 are the large closed orbits surrounding all five equilibria.
struct EnergyBounds {
  double e1 = 0.0;
  double e2 = 0.0;
};

EnergyBounds energy_bounds(double a1);

/// One energy level's quadrature results.  I_i = loop integral of x^i y dx,
/// dI_i = loop integral of x^i / y dx; both are computed along the
/// Hamiltonian flow over one period, where dx = y dt removes the endpoint
/// singularity (I_i = int x^i y^2 dt, dI_i = int x^i dt).
struct AbelianRow {
  double a1 = 0.0;
  double e = 0.0;
  double eta = 0.0;     // rightmost x-axis intersection of the level curve
  double period = 0.0;  // = dI0
  double I0 = 0.0, I2 = 0.0, I4 = 0.0;
  double dI0 = 0.0, dI2 = 0.0, dI4 = 0.0, dI6 = 0.0, dI8 = 0.0, dI10 = 0.0;
  double I_odd = 0.0;   // int x y^2 dt; vanishes by symmetry
  double Z = 0.0;       // (3/4)(a1 - 1) I2 + I4
  double dZ = 0.0;
  double w = 0.0;       // dZ / dI0
  double P = 0.0;       // I2 / I0; Appendix C writes P(h) for P(e)

  double M(double a2) const { return a2 * I0 + I2; }
};

struct MelnikovOptions {
  // Tighter than the flow defaults: the (D2) stencil divides quadrature
  // noise by 1e-4 * e.
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
};

AbelianRow abelian_integrals(double a1, double e,
                             const MelnikovOptions& opts = {});

/// Residuals of the printed first-order identities at (a1, e) plus the
/// second-order system (D2) checked by a 5-point stencil in e of the
/// directly quadratured first derivatives.
std::map<std::string, double> picard_fuchs_residuals(
    double a1, double e, const MelnikovOptions& opts = {});

/// Asymptotic seed w(e) = a1(3+a1)/4 + 3 a1 (1+a1) / log(e - e2).
double riccati_seed(double a1, double e);

/// Integrates the Riccati equation for w = Z'/I0' in e from e2 + 1e-6 and
/// returns (e, w) on the requested ascending grid (grid in (e2+1e-6, inf)).
std::vector<std::pair<double, double>> riccati_w(
    double a1, const std::vector<double>& e_grid,
    const MelnikovOptions& opts = {});

struct ZeroCount {
  int count = 0;
  std::vector<double> zeros;
  std::vector<double> P_at_zeros;
};

/// Sign-change scan of M(e) = a2 I0(e) + I2(e) over n grid points with
/// secant refinement to 1e-10 in e.
ZeroCount melnikov_zero_count(double a1, double a2, double e_min, double e_max,
                              int n, const MelnikovOptions& opts = {});

}  // namespace lienard
