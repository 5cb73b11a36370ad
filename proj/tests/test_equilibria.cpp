#include <doctest.h>

#include <cmath>

#include "lienard/equilibria.hpp"
#include "lienard/flow.hpp"

using namespace lienard;

namespace {
const Equilibrium& by_label(const std::vector<Equilibrium>& eqs,
                            EquilibriumLabel l) {
  for (const auto& e : eqs) {
    if (e.label == l) return e;
  }
  REQUIRE(false);
  return eqs.front();
}

bool in_g1(double mu1, double mu2) {
  const double disc = mu2 * mu2 - 4.0 * mu1;
  return (disc < 0.0 && mu2 < 0.0) || (mu1 >= 0.0 && mu2 >= 0.0);
}
}  // namespace

TEST_CASE("equilibrium abscissas") {
  SUBCASE("five roots of x(a1+x^2)(x^2-1) for a1 = -0.5") {
    auto eqs = find_equilibria(SystemParams::scaled(-0.5, -0.1, 1.0));
    REQUIRE(eqs.size() == 5);
    CHECK(eqs[0].x == doctest::Approx(-1.0));
    CHECK(eqs[1].x == doctest::Approx(-std::sqrt(0.5)));
    CHECK(eqs[2].x == doctest::Approx(0.0));
    CHECK(eqs[3].x == doctest::Approx(std::sqrt(0.5)));
    CHECK(eqs[4].x == doctest::Approx(1.0));
  }
  SUBCASE("unique equilibrium inside G1") {
    auto eqs = find_equilibria(SystemParams::raw(1.0, 1.0, -0.3, 1.0));
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].x == 0.0);
  }
  SUBCASE("double outer roots on the SN surface") {
    auto eqs = find_equilibria(SystemParams::raw(1.0, -2.0, 0.5, 1.0));
    REQUIRE(eqs.size() == 3);
    CHECK(by_label(eqs, EquilibriumLabel::El2).double_root);
    CHECK(by_label(eqs, EquilibriumLabel::Er2).double_root);
  }
}

TEST_CASE("counts partition as Theorem Result1 states over a grid") {
  for (int i = 0; i < 100; ++i) {
    for (int j = 0; j < 100; ++j) {
      const double mu1 = -2.0 + 4.0 * i / 99.0;
      const double mu2 = -2.0 + 4.0 * j / 99.0;
      const auto eqs = find_equilibria(SystemParams::raw(mu1, mu2, 0.1, 1.0));
      if (in_g1(mu1, mu2)) {
        CHECK(eqs.size() == 1);
      } else {
        CHECK(eqs.size() >= 3);
      }
    }
  }
}

TEST_CASE("classification of pinned Table-1 rows") {
  SUBCASE("stable weak focus at the origin on H1") {
    auto p = SystemParams::raw(1.0, 0.0, 0.0, 1.0);
    auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].kind == ClassKind::StableWeakFocusOrder1);
    REQUIRE(eqs[0].focal_value.has_value());
    CHECK(*eqs[0].focal_value == doctest::Approx(-0.125));
  }
  SUBCASE("cusps on SN with mu3 = b mu2 / 2") {
    auto p = SystemParams::raw(1.0, -2.0, -1.0, 1.0);
    auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 3);
    CHECK(by_label(eqs, EquilibriumLabel::Er2).kind == ClassKind::Cusp);
    CHECK(by_label(eqs, EquilibriumLabel::El2).kind == ClassKind::Cusp);
    CHECK(by_label(eqs, EquilibriumLabel::E0).kind == ClassKind::Source);
  }
  SUBCASE("saddle origin with sink outer pair for mu1 < 0") {
    auto p = SystemParams::raw(-1.0, 0.5, 0.8, 1.0);
    auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 3);
    CHECK(by_label(eqs, EquilibriumLabel::E0).kind == ClassKind::Saddle);
    CHECK(by_label(eqs, EquilibriumLabel::Er2).kind == ClassKind::Sink);
  }
  SUBCASE("five equilibria with weak foci on H2") {
    const double mu1 = 0.75, mu2 = -2.0, b = 1.0;
    const double disc = mu2 * mu2 - 4.0 * mu1;
    const double mu3 = b * (mu2 - std::sqrt(disc)) / 2.0;
    auto eqs = find_equilibria(SystemParams::raw(mu1, mu2, mu3, b));
    REQUIRE(eqs.size() == 5);
    const auto& er2 = by_label(eqs, EquilibriumLabel::Er2);
    CHECK(er2.kind == ClassKind::UnstableWeakFocusOrder1);
    REQUIRE(er2.focal_value.has_value());
    CHECK(*er2.focal_value > 0.0);
    CHECK(by_label(eqs, EquilibriumLabel::Er1).kind == ClassKind::Saddle);
    CHECK(by_label(eqs, EquilibriumLabel::E0).kind == ClassKind::Source);
  }
  SUBCASE("degenerate rows at mu1 = 0") {
    auto a = find_equilibria(SystemParams::raw(0.0, 1.0, 0.5, 1.0));
    CHECK(a[0].kind == ClassKind::StableDegenerateNode);
    auto b = find_equilibria(SystemParams::raw(0.0, 1.0, 0.0, 1.0));
    CHECK(b[0].kind == ClassKind::StableFocusDegenerate);
    auto c = find_equilibria(SystemParams::raw(0.0, -1.0, 0.3, 1.0));
    CHECK(by_label(c, EquilibriumLabel::E0).kind == ClassKind::DegenerateSaddle);
    CHECK(by_label(c, EquilibriumLabel::Er2).kind == ClassKind::Sink);
  }
  SUBCASE("b split at the fully degenerate origin") {
    auto lo = find_equilibria(SystemParams::raw(0.0, 0.0, 0.0, 1.0));
    CHECK(lo[0].kind == ClassKind::StableFocusDegenerate);
    CHECK_FALSE(lo[0].stability_inferred);
    auto hi = find_equilibria(SystemParams::raw(0.0, 0.0, 0.0, 4.0));
    CHECK(hi[0].kind == ClassKind::StableDegenerateNode);
    CHECK(hi[0].stability_inferred);  // Table 1 is silent on its stability
  }
}

TEST_CASE("strict classify raises ToleranceAmbiguity near row boundaries") {
  auto p = SystemParams::raw(1.0, 0.0, 1e-11, 1.0);  // within tol of H1
  auto eqs = find_equilibria(p);
  CHECK_THROWS_AS(classify(p, eqs[0], 1e-9), ToleranceAmbiguityError);
  // Exactly on the surface: clean.
  auto q = SystemParams::raw(1.0, 0.0, 0.0, 1.0);
  auto eqs2 = find_equilibria(q);
  CHECK(classify(q, eqs2[0], 1e-9) == ClassKind::StableWeakFocusOrder1);
  // Far from the surface: clean.
  auto r = SystemParams::raw(1.0, 0.0, 0.5, 1.0);
  auto eqs3 = find_equilibria(r);
  CHECK(classify(r, eqs3[0], 1e-9) == ClassKind::Sink);
}

TEST_CASE("first focal value") {
  SUBCASE("origin closed form") {
    auto p = SystemParams::raw(4.0, 0.0, 0.0, 2.0);
    auto eqs = find_equilibria(p);
    CHECK(first_focal_value(p, eqs[0]) == doctest::Approx(-0.125));
  }
  SUBCASE("origin focal value is always negative") {
    for (double mu1 : {0.3, 1.0, 5.0}) {
      for (double b : {0.5, 1.0, 4.0}) {
        auto p = SystemParams::raw(mu1, 0.5, 0.0, b);
        auto eqs = find_equilibria(p);
        CHECK(first_focal_value(p, eqs[0]) < 0.0);
      }
    }
  }
  SUBCASE("outer pair focal value is positive on H2") {
    const double mu1 = -1.0, mu2 = 0.4, b = 2.0;
    const double mu3 = b * (mu2 - std::sqrt(mu2 * mu2 - 4 * mu1)) / 2.0;
    auto p = SystemParams::raw(mu1, mu2, mu3, b);
    auto eqs = find_equilibria(p);
    const auto& er2 = by_label(eqs, EquilibriumLabel::Er2);
    CHECK(first_focal_value(p, er2) > 0.0);
  }
  SUBCASE("NotWeakFocus away from the Hopf surfaces") {
    auto p = SystemParams::raw(1.0, 0.0, 0.7, 1.0);
    auto eqs = find_equilibria(p);
    CHECK_THROWS_AS(first_focal_value(p, eqs[0]), NotWeakFocusError);
  }
}

TEST_CASE("Jacobian data matches a differenced Jacobian of the field") {
  auto p = SystemParams::scaled(-0.5, -0.85, 1.0);
  for (const auto& eq : find_equilibria(p)) {
    const double h = 1e-6;
    const State e{eq.x, 0.0};
    const State fxp = eval_field(p, {e.x + h, 0.0});
    const State fxm = eval_field(p, {e.x - h, 0.0});
    const State fyp = eval_field(p, {e.x, h});
    const State fym = eval_field(p, {e.x, -h});
    const double j11 = (fxp.x - fxm.x) / (2 * h);
    const double j12 = (fyp.x - fym.x) / (2 * h);
    const double j21 = (fxp.y - fxm.y) / (2 * h);
    const double j22 = (fyp.y - fym.y) / (2 * h);
    CHECK(eq.jac_det == doctest::Approx(j11 * j22 - j12 * j21).epsilon(1e-6));
    CHECK(eq.jac_tr == doctest::Approx(j11 + j22).epsilon(1e-6));
  }
}

TEST_CASE("classification is invariant under the raw/scaled conversion") {
  const double mu1 = -3.0, mu2 = -2.0, mu3 = -1.0, b = 1.0;
  auto praw = SystemParams::raw(mu1, mu2, mu3, b);
  auto [pscaled, s] = to_scaled(praw);
  auto raw_eqs = find_equilibria(praw);
  auto sc_eqs = find_equilibria(pscaled);
  REQUIRE(raw_eqs.size() == sc_eqs.size());
  for (std::size_t i = 0; i < raw_eqs.size(); ++i) {
    CHECK(raw_eqs[i].kind == sc_eqs[i].kind);
    CHECK(raw_eqs[i].x == doctest::Approx(s * sc_eqs[i].x).epsilon(1e-12));
  }
}

TEST_CASE("weak-focus stability agrees with the half-return map") {
  auto p = SystemParams::raw(1.0, 0.0, 0.0, 1.0);
  auto eqs = find_equilibria(p);
  REQUIRE(eqs[0].kind == ClassKind::StableWeakFocusOrder1);
  Section sec;
  sec.kind = SectionKind::PositiveYAxis;
  for (double y0 : {1e-3, 1e-2}) {
    CHECK(return_map(p, sec, y0, true).value < y0);
  }
}

TEST_CASE("surface membership") {
  SUBCASE("pitchfork P1") {
    auto m = surface_membership(SystemParams::raw(0.0, 1.0, 0.5, 1.0), 1e-9);
    CHECK(m.contains(Surface::P1));
    CHECK(m.residuals.size() == 1);
  }
  SUBCASE("SN + H2 + BT corner") {
    const double mu2 = -2.0, b = 1.0;
    auto m = surface_membership(
        SystemParams::raw(mu2 * mu2 / 4.0, mu2, b * mu2 / 2.0, b), 1e-9);
    CHECK(m.contains(Surface::SN));
    CHECK(m.contains(Surface::H2));
    CHECK(m.contains(Surface::BT));
    CHECK_FALSE(m.contains(Surface::P1));
    CHECK_FALSE(m.contains(Surface::H1));
  }
  SUBCASE("DE at delta = 2 sqrt(3)") {
    auto m = surface_membership(
        SystemParams::scaled(0.5, -0.5, 2.0 * std::sqrt(3.0)), 1e-9);
    CHECK(m.contains(Surface::DE));
    CHECK(m.residuals.size() == 1);
  }
  SUBCASE("scaled T and H1") {
    auto t = surface_membership(SystemParams::scaled(-1.0, -0.5, 1.0), 1e-9);
    CHECK(t.contains(Surface::T));
    auto h = surface_membership(SystemParams::scaled(-0.5, 0.0, 1.0), 1e-9);
    CHECK(h.contains(Surface::H1));
    auto bt = surface_membership(SystemParams::scaled(-1.0, -1.0, 1.0), 1e-9);
    CHECK(bt.contains(Surface::BT));
    CHECK(bt.contains(Surface::T));
    CHECK(bt.contains(Surface::H2));
  }
}
