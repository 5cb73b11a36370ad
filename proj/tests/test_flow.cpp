#include <doctest.h>

#include <cmath>
#include <random>

#include "lienard/flow.hpp"

using namespace lienard;

namespace {
IntegratorOptions quiet() {
  IntegratorOptions o;
  o.record_samples = false;
  return o;
}
}  // namespace

TEST_CASE("Hamiltonian case conserves energy") {
  auto p = SystemParams::scaled(-0.5, 0.0, 0.0);
  IntegratorOptions o;
  o.max_time = 100.0;
  const Trajectory t = integrate(p, {0.4, 0.0}, o);
  REQUIRE(t.termination == Termination::MaxTime);
  const double drift =
      std::abs(energy(p, t.samples.back().s) - energy(p, t.samples.front().s));
  CHECK(drift < 1e-9);
  CHECK(energy_audit(p, t) < 1e-9);
}

TEST_CASE("immediate convergence at an equilibrium start") {
  auto p = SystemParams::scaled(0.5, -1.1, 1.0);
  const Trajectory t = integrate(p, {0.0, 0.0}, quiet());
  CHECK(t.termination == Termination::ConvergedToEquilibrium);
  CHECK(t.converged_label == "E0");
}

TEST_CASE("example 4 orbit spirals outward and stays bounded") {
  auto p = SystemParams::scaled(0.5, -1.1, 1.0);
  IntegratorOptions o = quiet();
  o.max_time = 60.0;
  const Trajectory t = integrate(p, {0.01, 0.0}, o);
  CHECK(t.termination == Termination::MaxTime);
  double max_r = 0.0;
  for (const auto& s : t.samples) max_r = std::max(max_r, weighted_norm(s.s));
  CHECK(max_r > 0.5);   // left the source neighborhood
  CHECK(max_r < 10.0);  // trapped by the stable large cycle
}

TEST_CASE("equivariance: orbits of -s0 are the negated orbits of s0") {
  auto p = SystemParams::scaled(-0.5, -0.95, 1.0);
  IntegratorOptions o;
  o.max_time = 25.0;
  const Trajectory a = integrate(p, {0.37, 0.21}, o);
  const Trajectory b = integrate(p, {-0.37, -0.21}, o);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].t == b.samples[i].t);
    CHECK(std::abs(a.samples[i].s.x + b.samples[i].s.x) <= 1e-9);
    CHECK(std::abs(a.samples[i].s.y + b.samples[i].s.y) <= 1e-9);
  }
}

TEST_CASE("scaling conjugacy maps raw orbits onto scaled orbits") {
  const double mu1 = -3.0, mu2 = -2.0, mu3 = 3.0, b = 1.0;
  auto praw = SystemParams::raw(mu1, mu2, mu3, b);
  auto [pscaled, s] = to_scaled(praw);
  const State x0{0.9, 0.4};

  IntegratorOptions oraw = quiet();
  oraw.max_time = 5.0;
  const Trajectory traw = integrate(praw, x0, oraw);
  REQUIRE(traw.termination == Termination::MaxTime);

  IntegratorOptions osc = quiet();
  osc.max_time = 5.0 * s * s;
  osc.record_samples = true;
  const Trajectory tsc =
      integrate(pscaled, {x0.x / s, x0.y / (s * s * s)}, osc);
  REQUIRE(tsc.termination == Termination::MaxTime);

  // Compare the raw endpoint against the scaled dense output at T = s^2 t.
  const State end_raw = traw.samples.back().s;
  const State end_sc = tsc.at(5.0 * s * s);
  CHECK(end_raw.x == doctest::Approx(s * end_sc.x).epsilon(1e-7));
  CHECK(end_raw.y == doctest::Approx(s * s * s * end_sc.y).epsilon(1e-7));
}

TEST_CASE("reverse-time integration returns to the start") {
  auto p = SystemParams::scaled(-0.5, -0.85, 1.0);
  IntegratorOptions o = quiet();
  o.max_time = 15.0;
  const Trajectory fwd = integrate(p, {0.3, 0.1}, o);
  REQUIRE(fwd.termination == Termination::MaxTime);
  const State end = fwd.samples.back().s;
  const Trajectory bwd = integrate(p, end, o, {}, /*backward=*/true);
  REQUIRE(bwd.termination == Termination::MaxTime);
  const State back = bwd.samples.back().s;
  CHECK(back.x == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(back.y == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("half map contracts at the stable weak focus") {
  auto p = SystemParams::raw(1.0, 0.0, 0.0, 1.0);
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  for (double y0 : {1e-3, 1e-2}) {
    const auto r = return_map(p, sec, y0, /*half=*/true);
    CHECK(r.value < y0);
    CHECK(r.value > 0.0);
  }
}

TEST_CASE("return map derivative matches central differences") {
  auto p = SystemParams::scaled(0.5, -1.1, 1.0);
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.3, 2.0);
  for (int i = 0; i < 6; ++i) {
    const double y0 = u(rng);
    const auto r = return_map(p, sec, y0, true);
    const double h = 1e-6 * std::max(1.0, y0);
    const auto rp = return_map(p, sec, y0 + h, true);
    const auto rm = return_map(p, sec, y0 - h, true);
    const double fd = (rp.value - rm.value) / (2 * h);
    CHECK(r.derivative == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("Hamiltonian half map is the identity") {
  auto p = SystemParams::scaled(-0.5, 0.0, 0.0);
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  for (double y0 : {0.5, 1.0, 2.0}) {
    const auto r = return_map(p, sec, y0, true);
    CHECK(r.value == doctest::Approx(y0).epsilon(1e-8));
  }
}

TEST_CASE("section crossing lands on the section to 1e-12") {
  auto p = SystemParams::scaled(0.5, -0.7, 1.0);
  Section sec;
  sec.kind = SectionKind::PositiveXAxis;
  IntegratorOptions o = quiet();
  const Trajectory t = integrate(p, {0.0, 1.7}, o, sec);
  REQUIRE(t.termination == Termination::SectionHit);
  CHECK(std::abs(t.crossing.y) <= 1e-12);
  CHECK(t.crossing.x > 0.0);
}

TEST_CASE("energy audit stays small at default tolerances") {
  auto p = SystemParams::scaled(-0.5, -0.1, 1.0);
  IntegratorOptions o;
  o.max_time = 50.0;
  const Trajectory t = integrate(p, {0.2, 0.0}, o);
  REQUIRE(t.termination == Termination::MaxTime);
  CHECK(energy_audit(p, t) < 1e-7);
}

TEST_CASE("escape detection uses the weighted norm") {
  auto p = SystemParams::raw(1.0, 0.0, 0.5, 4.0);
  IntegratorOptions o = quiet();
  o.max_radius = 10.0;
  o.max_time = 50.0;
  // Backward time makes infinity attracting for b < 2*sqrt(3); for b = 4 a
  // far-out forward orbit heads to an equator equilibrium and escapes.
  const Trajectory t = integrate(p, {0.0, 500.0}, o, {}, true);
  CHECK((t.termination == Termination::Escaped ||
         t.termination == Termination::MaxTime));
}

TEST_CASE("NoReturn is reported for doomed starts") {
  // At the Bendixson-Dulac regime every orbit sinks; a half map far inside
  // the single-equilibrium basin still returns, so probe the converged path.
  auto p = SystemParams::raw(1.0, 1.0, 0.5, 1.0);
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  IntegratorOptions o = quiet();
  o.max_time = 5.0;  // too short for a full revolution at tiny amplitude?
  const auto r = try_return_map(p, sec, 1e-3, true, o);
  // Either it returns (fine) or reports NoReturn; both must be well-formed.
  if (r) {
    CHECK(r->value > 0.0);
  } else {
    CHECK(!r.has_value());
  }
}
