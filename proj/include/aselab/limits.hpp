#pragma once

// Closed-form asymptotic throughput density: the saturation value
// l0 / (2 pi ln2 gamma) that the average area spectral efficiency reaches
// under densification, plus the per-variant closed forms it is checked
// against.

#include <optional>
#include <stdexcept>

#include "aselab/feasibility.hpp"
#include "aselab/pathloss.hpp"

namespace aselab {

class InfeasibleModelError : public std::runtime_error {
 public:
  InfeasibleModelError(const std::string& what, int property)
      : std::runtime_error(what), property_(property) {}
  int property() const { return property_; }

 private:
  int property_;
};

struct AseLimit {
  double general_value = 0.0;  // l_zero / (2 pi ln2 gamma)
  std::optional<double> closed_form_value;
  double gamma = 0.0;
  double l_zero = 0.0;
  // |general - closed| / |general| when a closed form exists.
  std::optional<double> agreement;
};

// gamma = int_0^inf r L(r) dr. Uses the analytic form when the variant has
// one and cross-checks it against quadrature; falls back to quadrature
// alone otherwise. Divergent integrals return +infinity.
double gamma_integral(const PathLossModel& model);

// Saturation limit of the average ASE. Throws InfeasibleModelError naming
// the failed property when the model fails the feasibility gate.
AseLimit ase_limit(const PathLossModel& model);

// The tabulated closed-form limit for the five single-expression variants,
// evaluated exactly as printed; nullopt for other variants.
std::optional<double> table1_limit(const PathLossModel& model);

struct MultiSlopeLimitResult {
  // Authoritative value from l_zero / (2 pi ln2 gamma) with piecewise
  // analytic gamma.
  double value = 0.0;
  // The published closed form evaluated as printed. Its last-segment term
  // divides by eta_n where the area integral gives eta_n - 2, so the two
  // normally disagree; rel_difference quantifies it.
  double as_printed = 0.0;
  double rel_difference = 0.0;
};

// Requires a bounded multi-slope (first exponent 0); throws
// InfeasibleModelError when the tail exponent makes gamma infinite.
MultiSlopeLimitResult multislope_limit(const MultiSlope& model);

}  // namespace aselab
