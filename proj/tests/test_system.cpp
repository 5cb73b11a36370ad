#include <doctest.h>

#include <cmath>
#include <random>

#include "lienard/system.hpp"

using namespace lienard;

TEST_CASE("field evaluation at pinned points") {
  // Origin and the outer zeros of x(a1+x^2)(-1+x^2) are rest points.
  auto p1 = SystemParams::scaled(1.0, 0.0, 1.0);
  const State f1 = eval_field(p1, {0.0, 0.0});
  CHECK(f1.x == 0.0);
  CHECK(f1.y == 0.0);

  auto p2 = SystemParams::scaled(-0.5, 0.0, 1.0);
  const State f2 = eval_field(p2, {1.0, 0.0});
  CHECK(f2.x == 0.0);
  CHECK(f2.y == 0.0);

  // Direct evaluation of the raw quadruple at (1,1):
  // (y, -(mu1 + mu2 + 1) - (mu3 + b)) = (1, -5).
  auto p3 = SystemParams::raw(1.0, 1.0, 1.0, 1.0);
  const State f3 = eval_field(p3, {1.0, 1.0});
  CHECK(f3.x == 1.0);
  CHECK(f3.y == doctest::Approx(-5.0));
}

TEST_CASE("divergence closed forms") {
  auto p1 = SystemParams::raw(0.0, 0.0, 0.0, 1.0);
  CHECK(divergence(p1, {0.0, 3.0}) == 0.0);
  auto p2 = SystemParams::raw(0.0, 0.0, 1.0, 2.0);
  CHECK(divergence(p2, {1.0, -1.0}) == doctest::Approx(-3.0));
  auto p3 = SystemParams::scaled(0.3, -1.0, 1.0);
  CHECK(divergence(p3, {1.0, 0.5}) == doctest::Approx(0.0));
}

TEST_CASE("divergence equals the trace of a differenced Jacobian") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::uniform_real_distribution<double> ua(-1.0, 1.5);
  for (int i = 0; i < 20; ++i) {
    auto p = SystemParams::scaled(ua(rng), u(rng), 0.5 + std::abs(u(rng)));
    const State s{u(rng), u(rng)};
    const double h = 1e-6;
    const State fxp = eval_field(p, {s.x + h, s.y});
    const State fxm = eval_field(p, {s.x - h, s.y});
    const State fyp = eval_field(p, {s.x, s.y + h});
    const State fym = eval_field(p, {s.x, s.y - h});
    const double tr = (fxp.x - fxm.x) / (2 * h) + (fyp.y - fym.y) / (2 * h);
    CHECK(divergence(p, s) == doctest::Approx(tr).epsilon(1e-6));
  }
}

TEST_CASE("scaling transformation to_scaled") {
  SUBCASE("s = 1 example") {
    auto [q, s] = to_scaled(SystemParams::raw(-1.0, 0.0, 0.0, 1.0));
    CHECK(s == doctest::Approx(1.0));
    CHECK(q.scaled_params().a1 == doctest::Approx(1.0));
    CHECK(q.scaled_params().a2 == doctest::Approx(0.0));
    CHECK(q.scaled_params().delta == doctest::Approx(1.0));
  }
  SUBCASE("s = sqrt(3) example") {
    auto [q, s] = to_scaled(SystemParams::raw(-3.0, -2.0, 3.0, 1.0));
    CHECK(s == doctest::Approx(std::sqrt(3.0)));
    CHECK(q.scaled_params().a1 == doctest::Approx(1.0 / 3.0));
    CHECK(q.scaled_params().a2 == doctest::Approx(1.0));
    CHECK(q.scaled_params().delta == doctest::Approx(1.0));
  }
  SUBCASE("G1 points are rejected") {
    CHECK_THROWS_AS(to_scaled(SystemParams::raw(1.0, 0.0, 0.0, 1.0)),
                    DomainError);
  }
}

TEST_CASE("to_scaled round-trips through from_scaled on G2 samples") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  int tested = 0;
  while (tested < 50) {
    const double mu1 = u(rng), mu2 = u(rng), mu3 = u(rng);
    const double b = 0.2 + std::abs(u(rng));
    if (!in_scaling_domain(mu1, mu2)) continue;
    ++tested;
    auto p = SystemParams::raw(mu1, mu2, mu3, b);
    auto [q, s] = to_scaled(p);
    const RawParams back = from_scaled(q, s).raw_params();
    CHECK(back.mu1 == doctest::Approx(mu1).epsilon(1e-12));
    CHECK(back.mu2 == doctest::Approx(mu2).epsilon(1e-12));
    CHECK(back.mu3 == doctest::Approx(mu3).epsilon(1e-12));
    CHECK(back.b == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("symmetry image is an involution and the field is odd") {
  CHECK(symmetry_image({1.0, 2.0}).x == -1.0);
  CHECK(symmetry_image({1.0, 2.0}).y == -2.0);
  CHECK(symmetry_image({0.0, 0.0}).x == 0.0);
  const State twice = symmetry_image(symmetry_image({0.3, -0.7}));
  CHECK(twice.x == 0.3);
  CHECK(twice.y == -0.7);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> ua(-1.0, 2.0);
  for (int i = 0; i < 40; ++i) {
    auto p = (i % 2 == 0)
                 ? SystemParams::scaled(ua(rng), u(rng), 0.1 + std::abs(u(rng)))
                 : SystemParams::raw(u(rng), u(rng), u(rng),
                                     0.1 + std::abs(u(rng)));
    const State s{u(rng), u(rng)};
    const State a = eval_field(p, symmetry_image(s));
    const State b = eval_field(p, s);
    CHECK(a.x == -b.x);  // exact in floating point
    CHECK(a.y == -b.y);
  }
}

TEST_CASE("energy and energy rate") {
  SUBCASE("e2 closed form at the saddle level") {
    auto p = SystemParams::scaled(-0.5, 0.0, 1.0);
    const double a1 = -0.5;
    const double e2 = a1 * a1 / 4.0 + a1 * a1 * a1 / 12.0;
    CHECK(energy(p, {std::sqrt(0.5), 0.0}) == doctest::Approx(e2).epsilon(1e-14));
    CHECK(e2 == doctest::Approx(0.0520833333333).epsilon(1e-9));
  }
  SUBCASE("kinetic-only state") {
    auto p = SystemParams::scaled(0.7, 0.2, 2.0);
    CHECK(energy(p, {0.0, 1.0}) == doctest::Approx(0.5));
  }
  SUBCASE("Hamiltonian limit of the rate") {
    // delta = 0 is outside the scaled-form domain; check the analytic rate
    // on a raw-form G2 point with mu3 = 0, a2 = 0 instead at sampled states:
    // rate = -delta (a2 + x^2) y^2 vanishes iff a2 = -x^2 or y = 0.
    auto p = SystemParams::scaled(-0.5, -1.0, 1.0);
    CHECK(energy_rate(p, {1.0, 2.0}) == doctest::Approx(0.0));
    CHECK(energy_rate(p, {0.5, 0.0}) == doctest::Approx(0.0));
  }
  SUBCASE("rate equals the chain-rule derivative along the field") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    std::uniform_real_distribution<double> ua(-1.0, 1.5);
    for (int i = 0; i < 30; ++i) {
      auto p = SystemParams::scaled(ua(rng), u(rng), 0.1 + std::abs(u(rng)));
      const State s{u(rng), u(rng)};
      const double h = 1e-7;
      const State f = eval_field(p, s);
      const State sp{s.x + h * f.x, s.y + h * f.y};
      const State sm{s.x - h * f.x, s.y - h * f.y};
      const double dE = (energy(p, sp) - energy(p, sm)) / (2 * h);
      CHECK(energy_rate(p, s) == doctest::Approx(dE).epsilon(1e-6));
    }
  }
}

TEST_CASE("parameter validation and b-normalization") {
  CHECK_THROWS_AS(SystemParams::scaled(0.0, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(SystemParams::scaled(-1.5, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(SystemParams::raw(0.0, 0.0, 0.0, 0.0), DomainError);
  auto p = SystemParams::raw(1.0, 0.0, 0.5, -1.0);
  CHECK(p.normalized_from_negative_b());
  CHECK(p.raw_params().b == 1.0);
  CHECK(p.raw_params().mu3 == -0.5);
}

TEST_CASE("Lienard forms expose consistent coefficients") {
  auto p = SystemParams::scaled(-0.5, 0.25, 2.0);
  const LienardForms lf = lienard_forms(p);
  CHECK(lf.g5 == 1.0);
  CHECK(lf.g3 == doctest::Approx(-1.5));
  CHECK(lf.g1 == doctest::Approx(0.5));
  CHECK(lf.f0 == doctest::Approx(0.5));
  CHECK(lf.f2 == doctest::Approx(2.0));
  // F(0) = 0 and parity are structural: check g odd / f even by evaluation.
  for (double x : {0.3, 1.1, 2.4}) {
    CHECK(restoring(p, -x) == -restoring(p, x));
    CHECK(damping(p, -x) == damping(p, x));
    CHECK(damping_primitive(p, 0.0) == 0.0);
    CHECK(lf.F1 * x + lf.F3 * x * x * x ==
          doctest::Approx(damping_primitive(p, x)).epsilon(1e-14));
  }
}
