#pragma once

// The three-property gate for path-loss models: finite gain at the origin,
// gain bounded by it everywhere, and a finite area integral
// gamma = int_0^inf r L(r) dr.

#include <optional>

#include "aselab/pathloss.hpp"
#include "aselab/quadrature.hpp"

namespace aselab {

struct FeasibilitySettings {
  double gamma_tol = 1e-10;
  // Boundedness scan: log grid from scan_min_r to scan_max_r plus r = 0.
  double scan_min_r = 1e-6;
  double scan_max_r = 1e6;
  int points_per_decade = 1000;
};

struct FeasibilityReport {
  double l_zero = 0.0;
  bool bounded = false;           // property 2
  double gamma = 0.0;             // +inf when divergent
  QuadStatus gamma_status = QuadStatus::inconclusive;
  bool feasible = false;
  std::optional<int> failed_property;  // first failed property in {1,2,3}
};

// Property 1 via l_zero finiteness, property 2 via a dense log-grid scan
// L(r) <= L0 * (1 + 1e-12), property 3 via quadrature with divergence
// detection (closed forms short-circuit integrals that diverge at the
// origin, which the tail detector cannot see). A gamma quadrature that runs
// out of budget is reported as inconclusive and does not fail property 3;
// only detected divergence does.
FeasibilityReport check_feasibility(const PathLossModel& model,
                                    const FeasibilitySettings& settings = {});

}  // namespace aselab
