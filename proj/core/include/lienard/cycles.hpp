#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lienard/equilibria.hpp"
#include "lienard/flow.hpp"

namespace lienard {

enum class CycleKind { SmallAroundOrigin, SmallAroundRight, SmallAroundLeft, Large };
const char* to_string(CycleKind k);

enum class CycleStability { Stable, Unstable, SemiStable };
const char* to_string(CycleStability s);

struct LimitCycle {
  State section_point{};     // on the defining section
  double period = 0.0;
  double multiplier = 1.0;   // full return-map derivative at the fixed point
  CycleKind kind = CycleKind::Large;
  CycleStability stability = CycleStability::Stable;
  std::vector<EquilibriumLabel> enclosed;
  double x_left = 0.0;       // x-axis crossings of the orbit
  double x_right = 0.0;
  bool symmetric = false;    // found as a half-map fixed point

  double max_abs_x() const { return std::max(std::abs(x_left), std::abs(x_right)); }
};

struct ScanPoint {
  double s = 0.0;       // section coordinate of the grid point
  double value = 0.0;   // P(s) - s; NaN when the map did not return
  bool ok = false;
};

struct ScanOptions {
  double y_min = 1e-4;
  double y_max = 16.0;
  int y_points = 200;
  double x_offset_min = 1e-4;  // right-scan grid offset above the equilibrium
  double x_max = 6.0;
  int x_points = 120;
  int refine_levels = 2;       // adaptive midpoint insertion depth
  IntegratorOptions integrator = scan_integrator_defaults();
  int jobs = 1;

  static IntegratorOptions scan_integrator_defaults() {
    IntegratorOptions o;
    o.max_time = 400.0;
    o.record_samples = false;
    o.converge_radius = 1e-5;  // orbits captured by a sink stop returning
    return o;
  }
};

struct CycleCensus {
  std::vector<LimitCycle> cycles;
  std::vector<ScanPoint> half_scan;
  std::vector<ScanPoint> right_scan;
  std::vector<std::pair<double, double>> unresolved;  // NoReturn brackets
  std::vector<std::string> certificates;
  bool scan_incomplete = false;

  int n_small() const;
  int n_large() const;
  int total() const { return static_cast<int>(cycles.size()); }
};

/// Bendixson-Dulac: true iff mu3 >= 0 (raw) / a2 >= 0 (scaled); the
/// divergence is then <= 0 with equality only on x = 0 and no cycles exist.
bool bendixson_dulac_certificate(const SystemParams& p);

/// sqrt(-3 a2) for scaled parameters with a2 < 0; absent otherwise.
std::optional<double> strip_certificate(const SystemParams& p);

/// Scans the half-return map on the positive y-axis (symmetric cycles) and
/// the full return map on the x-axis section through the right outer
/// equilibrium (asymmetric small cycles), brackets every sign change,
/// Newton-refines, and assembles the deduplicated census.
CycleCensus count_cycles(const SystemParams& p, const ScanOptions& opts = {});

/// Integral of f(x) dt over one period of the refined cycle; equals
/// -log(multiplier).
double cycle_stability_integral(const SystemParams& p, const LimitCycle& cyc,
                                const IntegratorOptions& opts = {});

}  // namespace lienard
