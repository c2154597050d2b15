#include "aselab/limits.hpp"

#include <cmath>
#include <numbers>

#include "aselab/quadrature.hpp"
#include "doctest.h"

using namespace aselab;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

double gamma_by_quadrature(const PathLossModel& model) {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  if (const auto* mp = std::get_if<MinPowerLaw>(&model))
    opts.breakpoints = {mp->crossover()};
  auto q = integrate_semi_infinite(
      [&](double r) { return r * eval_pathloss(model, r); }, 0.0, opts);
  REQUIRE(q.status == QuadStatus::converged);
  return q.value;
}

}  // namespace

TEST_CASE("area integrals for the canonical parameter sets") {
  CHECK(gamma_integral(ShiftedPowerLaw{1, 1, 4}) ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(gamma_integral(StretchedExp{1, 1, 1}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_integral(MinPowerLaw{1, 1, 4}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gamma_integral(InversePoly{1, 1, 4}) ==
        doctest::Approx(kPi / 4.0).epsilon(1e-9));
  CHECK(std::isinf(gamma_integral(ShiftedPowerLaw{1, 1, 2})));
}

TEST_CASE("saturation limits for the canonical parameter sets") {
  auto elevated = ase_limit(ElevatedPowerLaw{1, 1, 4});
  CHECK(elevated.general_value ==
        doctest::Approx(1.0 / (kPi * kLn2)).epsilon(1e-10));
  REQUIRE(elevated.closed_form_value.has_value());
  CHECK(*elevated.agreement < 1e-8);

  auto shifted = ase_limit(ShiftedPowerLaw{1, 1, 4});
  CHECK(shifted.general_value ==
        doctest::Approx(3.0 / (kPi * kLn2)).epsilon(1e-10));
  CHECK(shifted.gamma == doctest::Approx(1.0 / 6.0));

  auto stretched = ase_limit(StretchedExp{1, 1, 1});
  CHECK(stretched.general_value ==
        doctest::Approx(1.0 / (2.0 * kPi * kLn2)).epsilon(1e-10));
}

TEST_CASE("tabulated closed forms evaluate as printed") {
  CHECK(*table1_limit(MinPowerLaw{1, 1, 4}) ==
        doctest::Approx(1.0 / (2.0 * kPi * kLn2)).epsilon(1e-12));
  CHECK(*table1_limit(InversePoly{1, 1, 4}) ==
        doctest::Approx(2.0 / (kPi * kPi * kLn2)).epsilon(1e-12));
  CHECK(*table1_limit(ElevatedPowerLaw{1, 2, 4}) ==
        doctest::Approx(1.0 / (4.0 * kPi * kLn2)).epsilon(1e-12));
  CHECK_FALSE(table1_limit(UnboundedPowerLaw{1, 4}).has_value());
  CHECK_FALSE(
      table1_limit(MultiSlope{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}}).has_value());
}

TEST_CASE("closed forms agree with the quadrature route across the grid") {
  // |table value - l0/(2 pi ln2 gamma_quadrature)| / value < 1e-8.
  auto check_model = [&](const PathLossModel& model) {
    const auto table = table1_limit(model);
    REQUIRE(table.has_value());
    const double general =
        l_zero(model) / (2.0 * kPi * kLn2 * gamma_by_quadrature(model));
    CHECK(std::fabs(*table - general) / std::fabs(general) < 1e-8);
  };
  for (double eta : {2.5, 3.0, 4.0, 6.0})
    for (double c0 : {0.5, 1.0, 2.0})
      for (double a : {0.1, 1.0, 10.0}) {
        check_model(MinPowerLaw{a, c0, eta});
        check_model(ShiftedPowerLaw{a, c0, eta});
        check_model(InversePoly{a, c0, eta});
        check_model(ElevatedPowerLaw{a, c0, eta});
      }
  for (double beta : {0.5, 1.0, 1.5, 2.0})
    for (double alpha : {0.5, 1.0, 2.0})
      for (double a : {0.1, 1.0, 10.0})
        check_model(StretchedExp{a, alpha, beta});
}

TEST_CASE("limit is invariant in the gain scale") {
  auto limit_for = [](PathLossModel m) { return ase_limit(m).general_value; };
  const std::vector<std::function<PathLossModel(double)>> families = {
      [](double a) { return PathLossModel(MinPowerLaw{a, 1, 4}); },
      [](double a) { return PathLossModel(ShiftedPowerLaw{a, 1, 4}); },
      [](double a) { return PathLossModel(InversePoly{a, 1, 4}); },
      [](double a) { return PathLossModel(ElevatedPowerLaw{a, 1, 4}); },
      [](double a) {
        return PathLossModel(MultiSlope{{{a, 0.0}, {a, 4.0}}, {1.0}});
      }};
  for (const auto& family : families) {
    const double base = limit_for(family(1.0));
    for (double a : {0.1, 10.0}) {
      CHECK(std::fabs(limit_for(family(a)) - base) <= 1e-12 * base);
    }
  }
}

TEST_CASE("limit scales with the inverse square of the distance constant") {
  for (double eta : {3.0, 4.0}) {
    const double shifted_ratio = ase_limit(ShiftedPowerLaw{1, 1, eta}).general_value /
                                 ase_limit(ShiftedPowerLaw{1, 2, eta}).general_value;
    CHECK(std::fabs(shifted_ratio - 4.0) < 1e-10);
    const double elevated_ratio =
        ase_limit(ElevatedPowerLaw{1, 1, eta}).general_value /
        ase_limit(ElevatedPowerLaw{1, 2, eta}).general_value;
    CHECK(std::fabs(elevated_ratio - 4.0) < 1e-10);
  }
}

TEST_CASE("two-slope limit matches the capped power law") {
  MinPowerLaw reference{1, 1, 4};
  MultiSlope twoslope{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}};
  auto ms = multislope_limit(twoslope);
  CHECK(ms.value ==
        doctest::Approx(*table1_limit(reference)).epsilon(1e-10));
  CHECK(ms.value == doctest::Approx(1.0 / (2.0 * kPi * kLn2)).epsilon(1e-10));
}

TEST_CASE("continuity-matched two-slope limit") {
  // Head gain 1 out to radius 2, then 16 r^-4 (continuous at the boundary):
  // gamma = 1*2^2/2 + 16*2^-2/2 = 4.
  MultiSlope model{{{1.0, 0.0}, {16.0, 4.0}}, {2.0}};
  CHECK(gamma_integral(model) == doctest::Approx(4.0).epsilon(1e-12));
  auto ms = multislope_limit(model);
  CHECK(ms.value == doctest::Approx(1.0 / (8.0 * kPi * kLn2)).epsilon(1e-10));
}

TEST_CASE("three-slope limit and the published form's tail term") {
  // Continuity-matched: 1 on [0,1), r^-3 on [1,10), 10 r^-4 beyond.
  // gamma = 1/2 + (1 - 1/10) + 10 * 10^-2 / 2 = 1.45; the published form's
  // tail term uses eta_n instead of eta_n - 2, giving 1.425.
  MultiSlope model{{{1.0, 0.0}, {1.0, 3.0}, {10.0, 4.0}}, {1.0, 10.0}};
  CHECK(gamma_integral(model) == doctest::Approx(1.45).epsilon(1e-12));
  auto ms = multislope_limit(model);
  CHECK(ms.value ==
        doctest::Approx(1.0 / (2.0 * kPi * kLn2 * 1.45)).epsilon(1e-10));
  CHECK(ms.as_printed ==
        doctest::Approx(1.0 / (2.0 * kPi * kLn2 * 1.425)).epsilon(1e-10));
  CHECK(ms.rel_difference ==
        doctest::Approx(std::fabs(1.45 / 1.425 - 1.0)).epsilon(1e-8));
  // The n=2 case shows the printed tail term contradicts the capped-power-law
  // limit, which the gamma route reproduces.
  auto twoslope = multislope_limit(MultiSlope{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}});
  CHECK(twoslope.rel_difference > 0.1);
}

TEST_CASE("infeasible models are rejected with the failed property") {
  try {
    ase_limit(UnboundedPowerLaw{1, 4});
    FAIL("expected InfeasibleModelError");
  } catch (const InfeasibleModelError& e) {
    CHECK(e.property() == 1);
  }
  try {
    ase_limit(ShiftedPowerLaw{1, 1, 2});
    FAIL("expected InfeasibleModelError");
  } catch (const InfeasibleModelError& e) {
    CHECK(e.property() == 3);
  }
  CHECK_THROWS_AS(multislope_limit(MultiSlope{{{1.0, 0.0}, {1.0, 2.0}}, {1.0}}),
                  InfeasibleModelError);
}
