#include <doctest.h>

#include <cmath>

#include "lienard/infinity.hpp"

using namespace lienard;

TEST_CASE("equator is invariant in every chart") {
  for (Chart c : {Chart::Ux, Chart::Vx, Chart::Uy, Chart::Vy}) {
    auto cf = chart_field(SystemParams::raw(0.7, -1.3, 0.2, 2.0), c);
    CHECK(cf.equator_invariant());
  }
}

TEST_CASE("equator equilibria appear exactly at b >= 2 sqrt(3)") {
  SUBCASE("b = 1: no real equator roots in Ux") {
    auto cf = chart_field(SystemParams::raw(1.0, 0.0, 0.0, 1.0), Chart::Ux);
    const auto poly = cf.equator_polynomial();  // -3u^2 - bu - 1
    REQUIRE(poly.size() == 3);
    const double disc = poly[1] * poly[1] - 4.0 * poly[0] * poly[2];
    CHECK(disc < 0.0);
    CHECK(infinity_equilibria(SystemParams::raw(1.0, 0.0, 0.0, 1.0)).empty());
  }
  SUBCASE("b = 4: equator equilibria exist") {
    auto eqs = infinity_equilibria(SystemParams::raw(1.0, 0.0, 0.0, 4.0));
    CHECK(eqs.size() == 4);  // saddle + node in Ux, mirrored in Vx
    for (const auto& e : eqs) {
      CHECK(e.u < 0.0);
      CHECK(e.lambda_radial > 0.0);
    }
  }
  SUBCASE("exactly on the threshold: flagged degenerate") {
    auto eqs = infinity_equilibria(
        SystemParams::scaled(0.0, 0.0, 2.0 * std::sqrt(3.0)));
    REQUIRE(!eqs.empty());
    CHECK(eqs.front().degenerate);
  }
  SUBCASE("near-threshold ambiguity") {
    CHECK_THROWS_AS(
        infinity_equilibria(SystemParams::scaled(
            0.0, 0.0, 2.0 * std::sqrt(3.0) + 1e-10)),
        ThresholdAmbiguityError);
  }
  SUBCASE("sweep across the threshold") {
    for (double b : {0.5, 1.0, 2.0, 3.0, 3.4}) {
      CHECK(infinity_equilibria(SystemParams::raw(0.3, 0.4, 0.1, b)).empty());
    }
    for (double b : {3.5, 4.0, 6.0}) {
      CHECK(!infinity_equilibria(SystemParams::raw(0.3, 0.4, 0.1, b)).empty());
    }
  }
}

TEST_CASE("chart fields agree with the affine field through the transitions") {
  auto p = SystemParams::raw(0.4, -0.9, 0.3, 1.7);
  auto ux = chart_field(p, Chart::Ux);
  auto uy = chart_field(p, Chart::Uy);

  for (double x : {2.0, 3.5, 7.0}) {
    for (double y : {1.0, 5.0, 40.0}) {
      const State f = eval_field(p, {x, y});
      {
        // Ux: u = y/x^3, v = 1/x;  du/dt = ydot/x^3 - 3 y xdot/x^4,
        // dv/dt = -xdot/x^2; the chart field carries dtau = dt * v^2.
        const double u = y / (x * x * x), v = 1.0 / x;
        const auto [du, dv] = ux.eval(u, v);
        const double du_dt = f.y / (x * x * x) - 3.0 * y * f.x / (x * x * x * x);
        const double dv_dt = -f.x / (x * x);
        // chart time: dtau = dt / v^2, so eval() returns v^2 * d(.)/dt
        CHECK(std::abs(du - v * v * du_dt) <= 1e-9 * std::max(1.0, std::abs(du)));
        CHECK(std::abs(dv - v * v * dv_dt) <= 1e-9 * std::max(1.0, std::abs(dv)));
      }
      {
        // Uy: u = x / y^(1/3), v = 1 / y^(1/3).
        const double c = std::cbrt(y);
        const double u = x / c, v = 1.0 / c;
        const auto [du, dv] = uy.eval(u, v);
        const double dydt3 = f.y / (3.0 * std::pow(y, 4.0 / 3.0));
        const double du_dt = f.x / c - x * dydt3;
        const double dv_dt = -dydt3;
        CHECK(std::abs(du - v * v * du_dt) <= 1e-9 * std::max(1.0, std::abs(du)));
        CHECK(std::abs(dv - v * v * dv_dt) <= 1e-9 * std::max(1.0, std::abs(dv)));
      }
    }
  }
}

TEST_CASE("equator stability probe") {
  SUBCASE("repelling for b = 1") {
    auto r = equator_stability_probe(SystemParams::raw(1.0, 0.0, 0.0, 1.0), 100.0);
    CHECK(r == EquatorStability::Repelling);
  }
  SUBCASE("repelling with mu3 < 0 (unique-cycle regime)") {
    auto r = equator_stability_probe(SystemParams::raw(1.0, 0.0, -1.0, 1.0), 100.0);
    CHECK(r == EquatorStability::Repelling);
  }
  SUBCASE("precondition violation for b = 4") {
    CHECK_THROWS_AS(
        equator_stability_probe(SystemParams::raw(1.0, 0.0, 0.0, 4.0), 100.0),
        PreconditionError);
  }
}

TEST_CASE("disc projection is bounded and monotone in radius") {
  const State a = disc_projection({1.0, 1.0});
  const State b = disc_projection({100.0, 1e6});
  CHECK(std::hypot(a.x, a.y) < 1.0);
  CHECK(std::hypot(b.x, b.y) < 1.0);
  CHECK(std::hypot(b.x, b.y) > std::hypot(a.x, a.y));
}
