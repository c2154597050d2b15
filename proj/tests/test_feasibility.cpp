#include "aselab/feasibility.hpp"

#include <cmath>

#include "doctest.h"

using namespace aselab;

TEST_CASE("unbounded power law fails property 1") {
  auto report = check_feasibility(UnboundedPowerLaw{1, 4});
  CHECK_FALSE(report.feasible);
  REQUIRE(report.failed_property.has_value());
  CHECK(*report.failed_property == 1);
  CHECK(std::isinf(report.l_zero));
}

TEST_CASE("slow tails fail property 3") {
  auto report = check_feasibility(ShiftedPowerLaw{1, 1, 2});
  CHECK_FALSE(report.feasible);
  REQUIRE(report.failed_property.has_value());
  CHECK(*report.failed_property == 3);
  CHECK(std::isinf(report.gamma));
  CHECK(report.gamma_status == QuadStatus::diverged);
  CHECK(report.bounded);
}

TEST_CASE("gain exceeding the origin value fails property 2") {
  // Flat head at 1, flat tail at 5 for a while, then a steep drop.
  MultiSlope model{{{1.0, 0.0}, {5.0, 0.0}, {5.0, 5.0}}, {1.0, 10.0}};
  auto report = check_feasibility(model);
  CHECK_FALSE(report.feasible);
  REQUIRE(report.failed_property.has_value());
  CHECK(*report.failed_property == 2);
  CHECK_FALSE(report.bounded);
}

TEST_CASE("feasible shifted power law reports its area integral") {
  auto report = check_feasibility(ShiftedPowerLaw{1, 1, 4});
  CHECK(report.feasible);
  CHECK_FALSE(report.failed_property.has_value());
  CHECK(report.l_zero == doctest::Approx(1.0));
  CHECK(report.bounded);
  CHECK(report.gamma_status == QuadStatus::converged);
  CHECK(report.gamma == doctest::Approx(1.0 / 6.0).epsilon(1e-8));
}

TEST_CASE("feasibility across the model family") {
  auto feasible = [](const PathLossModel& m) {
    return check_feasibility(m).feasible;
  };
  CHECK(feasible(MinPowerLaw{1, 1, 4}));
  CHECK(feasible(InversePoly{1, 1, 4}));
  CHECK(feasible(ElevatedPowerLaw{1, 1, 4}));
  CHECK(feasible(StretchedExp{1, 1, 2}));
  CHECK(feasible(MultiSlope{{{1.0, 0.0}, {1.0, 3.0}, {10.0, 4.0}}, {1.0, 10.0}}));

  CHECK_FALSE(feasible(MinPowerLaw{1, 1, 2}));
  CHECK_FALSE(feasible(ElevatedPowerLaw{1, 1, 2}));
  // Rising first exponent leaves the origin gain unbounded.
  auto report = check_feasibility(MultiSlope{{{1.0, 1.0}, {1.0, 4.0}}, {1.0}});
  CHECK_FALSE(report.feasible);
  CHECK(*report.failed_property == 1);
}

TEST_CASE("composite model passes the gate") {
  LosNlosComposite c;
  c.los.segments = {{1.0, 2.1}, {1.0, 4.0}};
  c.los.boundaries = {10.0};
  c.nlos.segments = {{0.5, 3.0}, {0.5, 4.5}};
  c.nlos.boundaries = {10.0};
  c.p_los = {LosProbability::Kind::exp_decay, 5.0};
  c.elevation = 1.0;
  auto report = check_feasibility(c);
  CHECK(report.feasible);
  CHECK(report.gamma_status == QuadStatus::converged);
  CHECK(report.gamma > 0.0);
}
