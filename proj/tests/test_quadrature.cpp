#include "aselab/quadrature.hpp"

#include <cmath>

#include "aselab/pathloss.hpp"
#include "doctest.h"

using namespace aselab;

TEST_CASE("gamma-type reference integrals") {
  auto r1 = integrate_semi_infinite(
      [](double r) { return r * std::exp(-r); }, 0.0, 1e-10);
  CHECK(r1.status == QuadStatus::converged);
  CHECK(r1.value == doctest::Approx(1.0).epsilon(1e-9));

  // Antiderivative of r(1+r)^-4 is -(1+r)^-2/2 + (1+r)^-3/3, so the
  // integral over [0, inf) is 1/2 - 1/3 = 1/6.
  auto r2 = integrate_semi_infinite(
      [](double r) { return r * std::pow(1.0 + r, -4.0); }, 0.0, 1e-10);
  CHECK(r2.status == QuadStatus::converged);
  CHECK(r2.value == doctest::Approx(1.0 / 6.0).epsilon(1e-9));
}

TEST_CASE("logarithmic divergence is detected") {
  auto r = integrate_semi_infinite(
      [](double r) { return r * std::pow(1.0 + r, -2.0); }, 0.0, 1e-8);
  CHECK(r.status == QuadStatus::diverged);
}

TEST_CASE("growing tails are detected") {
  auto r = integrate_semi_infinite([](double r) { return 1.0 + r; }, 0.0, 1e-8);
  CHECK(r.status == QuadStatus::diverged);
}

TEST_CASE("linearity within tolerance") {
  const double tol = 1e-9;
  auto base = integrate_semi_infinite(
      [](double r) { return r * std::exp(-r * r); }, 0.0, tol);
  for (double c : {0.5, 3.0}) {
    auto scaled = integrate_semi_infinite(
        [c](double r) { return c * r * std::exp(-r * r); }, 0.0, tol);
    CHECK(std::fabs(scaled.value - c * base.value) <=
          2.0 * tol * std::fabs(scaled.value));
  }
}

TEST_CASE("substitution invariance for the area integral") {
  // int r L(r) dr equals int L(sqrt(u))/2 du under u = r^2.
  const double tol = 1e-9;
  PathLossModel model = ShiftedPowerLaw{1.0, 1.0, 4.0};
  auto direct = integrate_semi_infinite(
      [&](double r) { return r * eval_pathloss(model, r); }, 0.0, tol);
  auto substituted = integrate_semi_infinite(
      [&](double u) { return 0.5 * eval_pathloss(model, std::sqrt(u)); }, 0.0,
      tol);
  CHECK(direct.status == QuadStatus::converged);
  CHECK(substituted.status == QuadStatus::converged);
  CHECK(std::fabs(direct.value - substituted.value) <=
        4.0 * tol * std::fabs(direct.value));
}

TEST_CASE("divergence detector stays quiet on feasible area integrands") {
  std::vector<PathLossModel> models;
  for (double eta : {2.5, 3.0, 4.0, 6.0})
    for (double c0 : {0.5, 1.0, 2.0})
      for (double a : {0.1, 1.0, 10.0}) {
        models.push_back(MinPowerLaw{a, c0, eta});
        models.push_back(ShiftedPowerLaw{a, c0, eta});
        models.push_back(InversePoly{a, c0, eta});
        models.push_back(ElevatedPowerLaw{a, c0, eta});
      }
  for (double beta : {0.5, 1.0, 1.5, 2.0})
    for (double alpha : {0.5, 1.0, 2.0})
      models.push_back(StretchedExp{1.0, alpha, beta});
  for (const auto& model : models) {
    auto res = integrate_semi_infinite(
        [&](double r) { return r * eval_pathloss(model, r); }, 0.0, 1e-10);
    CHECK(res.status != QuadStatus::diverged);
  }
}

TEST_CASE("double integrals over the positive quadrant") {
  auto separable = integrate_double(
      [](double r, double t) { return r * t * std::exp(-r * r - t * t); },
      1e-8);
  CHECK(separable.status == QuadStatus::converged);
  CHECK(separable.value == doctest::Approx(0.25).epsilon(1e-7));

  auto expo = integrate_double(
      [](double r, double t) { return std::exp(-r - t); }, 1e-8);
  CHECK(expo.status == QuadStatus::converged);
  CHECK(expo.value == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("NaN integrands raise with the offending abscissa") {
  bool threw = false;
  try {
    integrate_semi_infinite(
        [](double r) {
          return r > 2.0 ? std::numeric_limits<double>::quiet_NaN()
                         : std::exp(-r);
        },
        0.0, 1e-8);
  } catch (const IntegrandError& e) {
    threw = true;
    CHECK(e.abscissa() > 2.0);
  }
  CHECK(threw);
}

TEST_CASE("budget exhaustion reports inconclusive") {
  QuadOptions opts;
  opts.rel_tol = 1e-12;
  opts.max_panels = 6;
  auto r = integrate_semi_infinite(
      [](double r) { return std::exp(-r) * std::cos(40.0 * r) *
                            std::cos(40.0 * r) * r; },
      0.0, opts);
  CHECK(r.status == QuadStatus::inconclusive);
}

TEST_CASE("tolerance range is enforced") {
  CHECK_THROWS_AS(integrate_semi_infinite([](double) { return 0.0; }, 0.0, 0.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(integrate_semi_infinite([](double) { return 0.0; }, 0.0, 1e-15),
                  std::invalid_argument);
}

TEST_CASE("breakpoints let kinked integrands hit tight tolerances") {
  PathLossModel model = MinPowerLaw{1.0, 1.0, 4.0};
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.breakpoints = {1.0};
  auto res = integrate_semi_infinite(
      [&](double r) { return r * eval_pathloss(model, r); }, 0.0, opts);
  CHECK(res.status == QuadStatus::converged);
  CHECK(res.value == doctest::Approx(1.0).epsilon(1e-9));
}
