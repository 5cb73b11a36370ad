#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lienard/system.hpp"

namespace lienard {

struct IntegratorOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_time = 1000.0;
  double max_radius = 1e6;  // bound on the weighted norm max(|x|, |y|^(1/3))
  double initial_step = 1e-4;
  bool record_samples = true;
  // Capture radius for ConvergedToEquilibrium at antisaddles; saddles always
  // use the tight 1e-9 so manifold shots and near-saddle passages survive.
  double converge_radius = 1e-9;

  void validate() const {
    if (!(rel_tol >= 1e-14 && abs_tol > 0.0 && max_time > 0.0 &&
          max_radius > 0.0 && initial_step > 0.0)) {
      throw PreconditionError("integrator options out of range");
    }
  }
};

enum class SectionKind {
  PositiveYAxis,
  NegativeYAxis,
  PositiveXAxis,
  NegativeXAxis,
  VerticalLine,
  HorizontalLine,
};

enum class CrossDirection { Increasing, Decreasing, Either };

/// A one-dimensional section with a crossing-direction filter.  The section
/// function is x - offset for the vertical kinds and y - offset for the
/// horizontal kinds; the crossing coordinate is the in-section coordinate
/// (y and x respectively), optionally restricted to [coord_min, coord_max].
struct Section {
  SectionKind kind = SectionKind::PositiveYAxis;
  double offset = 0.0;
  CrossDirection direction = CrossDirection::Either;
  double coord_min = -std::numeric_limits<double>::infinity();
  double coord_max = std::numeric_limits<double>::infinity();

  bool vertical() const {
    return kind == SectionKind::PositiveYAxis ||
           kind == SectionKind::NegativeYAxis ||
           kind == SectionKind::VerticalLine;
  }
  double section_value(State s) const {
    return vertical() ? s.x - line_offset() : s.y - line_offset();
  }
  double line_offset() const {
    return (kind == SectionKind::VerticalLine ||
            kind == SectionKind::HorizontalLine)
               ? offset
               : 0.0;
  }
  double coordinate(State s) const { return vertical() ? s.y : s.x; }
  bool admits(State s) const;
  State point_at(double coord) const;
  /// Antipodal section under (x,y) -> (-x,-y).
  Section negated() const;
};

enum class Termination {
  MaxTime,
  SectionHit,
  Escaped,
  ConvergedToEquilibrium,
  StepFailure,
};

struct TrajectorySample {
  double t;
  State s;
  State f;  // field at s, for dense output
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Termination termination = Termination::MaxTime;
  bool backward = false;
  State crossing{};
  double crossing_time = 0.0;
  std::string converged_label;

  double t_begin() const { return samples.front().t; }
  double t_end() const { return samples.back().t; }
  /// Cubic-Hermite dense evaluation between recorded samples.
  State at(double t) const;
};

/// Weighted norm matching the (1,3) quasi-homogeneous structure.
inline double weighted_norm(State s) {
  return std::max(std::abs(s.x), std::cbrt(std::abs(s.y)));
}

/// Integrate the field from s0.  When stop is set, terminates at the first
/// admissible section crossing, with the crossing state refined onto the
/// section.  backward integrates the time-reversed field (samples still
/// carry increasing t; they trace the orbit in reverse).
Trajectory integrate(const SystemParams& p, State s0,
                     const IntegratorOptions& opts,
                     const std::optional<Section>& stop = {},
                     bool backward = false);

struct ReturnMapResult {
  double value = 0.0;       // section coordinate of the (half-)return
  double derivative = 0.0;  // d value / d start coordinate, variational
  double time = 0.0;        // elapsed time to the crossing
  State crossing{};         // crossing state (before symmetry for half maps)
};

/// First return of the section coordinate.  Full map: first return to the
/// same section, same direction as the departure.  Half map: first crossing
/// of the negated section composed with the Z2 symmetry, so fixed points are
/// exactly the symmetric closed orbits.
ReturnMapResult return_map(const SystemParams& p, const Section& section,
                           double y0, bool half,
                           const IntegratorOptions& opts = {});

/// Non-throwing variant for scans; empty on NoReturn.
std::optional<ReturnMapResult> try_return_map(const SystemParams& p,
                                              const Section& section,
                                              double y0, bool half,
                                              const IntegratorOptions& opts = {});

/// Max over samples of |E(t) - E(0) - integral of energy_rate|, with the
/// integral taken by per-step Simpson quadrature on the dense output.
double energy_audit(const SystemParams& p, const Trajectory& traj);

/// Abscissas of the finite equilibria, ascending (shared helper).
std::vector<double> equilibrium_abscissas(const SystemParams& p);

}  // namespace lienard
