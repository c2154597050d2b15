#include "aselab/pathloss.hpp"

#include <cmath>

#include "aselab/quadrature.hpp"
#include "doctest.h"

using namespace aselab;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  return g;
}

LosNlosComposite sample_composite() {
  LosNlosComposite c;
  c.los.segments = {{1.0, 2.1}, {1.0, 4.0}};
  c.los.boundaries = {10.0};
  c.nlos.segments = {{0.5, 3.0}, {0.5, 4.5}};
  c.nlos.boundaries = {10.0};
  c.p_los = {LosProbability::Kind::exp_decay, 5.0};
  c.elevation = 1.0;
  return c;
}

}  // namespace

TEST_CASE("gain evaluation spot values") {
  CHECK(eval_pathloss(MinPowerLaw{1, 1, 4}, 0.5) == doctest::Approx(1.0));
  CHECK(eval_pathloss(MinPowerLaw{1, 1, 4}, 2.0) == doctest::Approx(0.0625));
  CHECK(eval_pathloss(StretchedExp{1, 1, 1}, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("gain at the origin") {
  CHECK(l_zero(ShiftedPowerLaw{2, 1, 4}) == doctest::Approx(2.0));
  CHECK(l_zero(ElevatedPowerLaw{1, 2, 4}) == doctest::Approx(0.0625));
  CHECK(std::isinf(l_zero(UnboundedPowerLaw{1, 4})));
}

TEST_CASE("negative distance is rejected") {
  CHECK_THROWS_AS(eval_pathloss(MinPowerLaw{}, -1.0), std::domain_error);
}

TEST_CASE("feasible variants never exceed the origin gain") {
  std::vector<PathLossModel> models = {
      MinPowerLaw{1, 1, 4}, ShiftedPowerLaw{2, 0.5, 3}, InversePoly{1, 1, 4},
      ElevatedPowerLaw{1, 1, 4}, StretchedExp{1, 1, 1},
      MultiSlope{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}}, sample_composite()};
  for (const auto& model : models) {
    const double l0 = l_zero(model);
    CHECK(eval_pathloss(model, 0.0) <= l0 * (1 + 1e-12));
    for (double r : log_grid(1e-6, 1e6, 1000)) {
      const double g = eval_pathloss(model, r);
      CHECK(g >= 0.0);
      CHECK(g <= l0 * (1 + 1e-12));
    }
  }
}

TEST_CASE("capped power law is continuous at the crossover") {
  MinPowerLaw m{2.0, 0.5, 3.0};
  const double rc = m.crossover();
  const double flat = m.gain_scale * m.cap;
  const double tail = m.gain_scale * std::pow(rc, -m.exponent);
  CHECK(flat == doctest::Approx(tail).epsilon(1e-12));
  CHECK(eval_pathloss(m, rc) == doctest::Approx(flat).epsilon(1e-12));
}

TEST_CASE("two-slope model with flat head reproduces the capped power law") {
  const double a = 2.0, cap = 0.5, eta = 3.0;
  MinPowerLaw reference{a, cap, eta};
  const double rc = reference.crossover();
  MultiSlope twoslope{{{a * cap, 0.0}, {a, eta}}, {rc}};
  for (double r : log_grid(1e-6, 1e6, 1000)) {
    const double want = eval_pathloss(reference, r);
    const double got = eval_pathloss(twoslope, r);
    CHECK(std::fabs(got - want) <= 1e-12 * want);
  }
}

TEST_CASE("composite mean gain lies between the branch gains") {
  const auto c = sample_composite();
  const PathLossModel model = c;
  for (double r : log_grid(1e-3, 1e4, 400)) {
    const double mean = eval_pathloss(model, r);
    const PathLossModel los_only = [&] {
      auto only = c;
      only.nlos = only.los;
      return only;
    }();
    const PathLossModel nlos_only = [&] {
      auto only = c;
      only.los = only.nlos;
      return only;
    }();
    const double lo = eval_pathloss(nlos_only, r);
    const double hi = eval_pathloss(los_only, r);
    CHECK(mean >= lo * (1 - 1e-12));
    CHECK(mean <= hi * (1 + 1e-12));
  }
}

TEST_CASE("link gain sampling") {
  auto rng = Xoshiro256PlusPlus::for_stream(7, 0);

  SUBCASE("deterministic variants match the mean gain") {
    PathLossModel model = ShiftedPowerLaw{1, 1, 4};
    CHECK(sample_link_gain(model, 1.0, rng) ==
          doctest::Approx(eval_pathloss(model, 1.0)));
  }

  SUBCASE("certain LoS always picks the LoS branch") {
    auto c = sample_composite();
    c.p_los = {LosProbability::Kind::clamp, 1e30};
    const PathLossModel model = c;
    PathLossModel los_only = [&] {
      auto only = c;
      only.nlos = only.los;
      return only;
    }();
    for (int i = 0; i < 100; ++i) {
      const double r = 0.3 * i;
      CHECK(sample_link_gain(model, r, rng) ==
            doctest::Approx(eval_pathloss(los_only, r)));
    }
  }

  SUBCASE("empirical LoS fraction follows the probability") {
    auto c = sample_composite();
    c.p_los = {LosProbability::Kind::exp_decay, 1.0};
    const PathLossModel model = c;
    const double r = std::log(2.0);  // p_los = 1/2
    PathLossModel los_only = [&] {
      auto only = c;
      only.nlos = only.los;
      return only;
    }();
    const double los_gain = eval_pathloss(los_only, r);
    int hits = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i)
      if (sample_link_gain(model, r, rng) == los_gain) ++hits;
    CHECK(std::fabs(hits / double(n) - 0.5) < 0.01);
  }
}

TEST_CASE("analytic derivatives agree with central differences") {
  std::vector<PathLossModel> models = {
      UnboundedPowerLaw{1, 4},     MinPowerLaw{1, 1, 4},
      ShiftedPowerLaw{2, 0.5, 3},  InversePoly{1, 1, 4},
      ElevatedPowerLaw{1, 1, 4},   StretchedExp{1, 0.5, 1.5},
      MultiSlope{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}}};
  for (const auto& model : models) {
    for (double r : log_grid(1.5, 1e4, 60)) {
      const auto d = analytic_derivative(model, r);
      REQUIRE(d.has_value());
      const double h = 1e-6 * std::max(r, 1.0);
      const double num =
          (eval_pathloss(model, r + h) - eval_pathloss(model, r - h)) /
          (2.0 * h);
      CHECK(*d == doctest::Approx(num).epsilon(1e-5));
    }
  }
  CHECK_FALSE(analytic_derivative(sample_composite(), 1.0).has_value());
}

TEST_CASE("closed-form areas agree with quadrature") {
  std::vector<PathLossModel> models = {
      MinPowerLaw{1, 1, 4}, ShiftedPowerLaw{1, 1, 4}, ElevatedPowerLaw{1, 1, 4},
      StretchedExp{1, 1, 1}, MultiSlope{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}}};
  for (const auto& model : models) {
    const auto closed = gamma_closed_form(model);
    REQUIRE(closed.has_value());
    auto q = integrate_semi_infinite(
        [&](double r) { return r * eval_pathloss(model, r); }, 0.0, 1e-10);
    CHECK(q.status == QuadStatus::converged);
    CHECK(*closed == doctest::Approx(q.value).epsilon(1e-8));

    for (double radius : {0.0, 0.5, 2.0, 20.0}) {
      QuadOptions opts;
      opts.rel_tol = 1e-10;
      opts.detect_divergence = false;
      auto tail = integrate_semi_infinite(
          [&](double r) { return r * eval_pathloss(model, r); }, radius, opts);
      CHECK(tail_area(model, radius) ==
            doctest::Approx(tail.value).epsilon(1e-8));
    }
  }
}

TEST_CASE("continuity warnings flag mismatched slopes") {
  MultiSlope matched{{{1.0, 0.0}, {1.0, 4.0}}, {1.0}};
  CHECK(continuity_warnings(matched).empty());
  MultiSlope mismatched{{{1.0, 0.0}, {2.0, 4.0}}, {1.0}};
  CHECK(continuity_warnings(mismatched).size() == 1);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(MinPowerLaw{-1, 1, 4}), std::invalid_argument);
  CHECK_THROWS_AS(validate(StretchedExp{1, 1, 2.5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(MultiSlope{{{1, 0}}, {}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(MultiSlope{{{1, 0}, {1, 4}}, {-1.0}}),
                  std::invalid_argument);
  CHECK_NOTHROW(validate(ShiftedPowerLaw{1, 1, 2}));  // infeasible but legal
}
