#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>

#include "lienard/cycles.hpp"
#include "lienard/equilibria.hpp"
#include "lienard/flow.hpp"

namespace lienard {

enum class ManifoldBranch { UnstableRight, UnstableLeft, StableRight, StableLeft };
const char* to_string(ManifoldBranch b);

struct ShotOptions {
  double epsilon = 1e-7;         // seed offset, relative to max(1, |x_saddle|)
  double center_epsilon = 1e-2;  // seed for center-direction branches
  bool richardson_check = true;  // redo at epsilon/2 and keep the finer shot
  IntegratorOptions integrator = shot_integrator_defaults();

  static IntegratorOptions shot_integrator_defaults() {
    IntegratorOptions o;
    o.max_time = 400.0;
    o.record_samples = false;
    return o;
  }
};

/// Integrates along an invariant-manifold branch of a saddle (or along the
/// center branch of a saddle-node / degenerate saddle) until the target
/// section; returns the first admissible crossing.
State manifold_shot(const SystemParams& p, const Equilibrium& saddle,
                    ManifoldBranch branch, const Section& target,
                    const ShotOptions& opts = {});

/// Signed connection mismatches; zero signals the corresponding loop.
enum class MismatchKind {
  FigureEight,          // x_A - x_B at E0's right branches (a1 >= 0)
  SmallRightHomoclinic, // x_P - x_Q at Er1 (-1 < a1 < 0)
  TwoSaddleOuter,       // x_M - x_P, big 2-saddle loop over all antisaddles
  SmallOriginLoop,      // y_Q + y_S at El1's right branches
  SaddleNodeLoopUpper,  // y_A + y_Bbar at El2, a1 = -1
  SaddleNodeLoopLower,  // y_A + y_Bunder at El2, a1 = -1
};
const char* to_string(MismatchKind k);

double mismatch(const SystemParams& p, MismatchKind kind,
                const ShotOptions& opts = {});

enum class CurveKind { Phi1, Phi2, Phi3, Phi4, Phi5, P1sn, P2sn };
const char* to_string(CurveKind k);

struct CurvePoint {
  CurveKind kind = CurveKind::Phi1;
  double a1 = 0.0;
  double delta = 1.0;
  double a2_star = 0.0;
  double bracket_width = 0.0;
  double residual = 0.0;  // |mismatch| at a2_star; |multiplier - 1| for Phi5
};

/// Bisection on the mismatch sign (Phi1..Phi4, P1sn, P2sn) or on the 2->0
/// transition of the paired large cycles (Phi5).  Raises BadBracketError
/// when the bracket endpoints agree in sign.
CurvePoint trace_curve(CurveKind kind, double a1, double delta,
                       std::pair<double, double> bracket, double tol = 1e-8,
                       const ShotOptions& opts = {});

/// Read-mostly cache of traced curve points keyed by (kind, a1, delta)
/// rounded to 1e-10; insert-if-absent under a mutex.
class CurveCache {
 public:
  CurvePoint get(CurveKind kind, double a1, double delta,
                 std::pair<double, double> bracket, double tol = 1e-8,
                 const ShotOptions& opts = {});
  static CurveCache& global();

 private:
  std::mutex mu_;
  std::map<std::tuple<int, long long, long long>, CurvePoint> map_;
};

/// a* of Prop. p12: the root of phi3(a, delta) - a, cached per delta.
double a_star(double delta, CurveCache& cache = CurveCache::global());

/// Coarse region label: I..XI for delta < 2*sqrt(3), R1..R11 for
/// delta >= 2*sqrt(3), or a boundary tag (P, T, H1, H2, DE, HL1, HL2,
/// HE1, HE2, DL) when within boundary_tol of a bifurcation set.
std::string region_classify(double a1, double a2, double delta,
                            double boundary_tol = 1e-6,
                            CurveCache& cache = CurveCache::global());

}  // namespace lienard
