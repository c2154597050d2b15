#pragma once

// Adaptive Gauss-Kronrod quadrature over semi-infinite domains with an
// explicit divergence diagnostic.
//
// The integrator maps [a, inf) onto [0, 1) with r = a + u/(1-u) and refines
// 15-point Kronrod panels until the summed error estimate meets the relative
// tolerance. Before integrating, an optional scan of dyadic tail windows
// [2^k, 2^(k+1)] looks for partial integrals that fail to decay
// geometrically; eight consecutive non-decaying windows are reported as
// `diverged`. The scan is a heuristic: integrands whose tail decays slower
// than about r^(-2.15) (window ratio > 0.9) are indistinguishable from
// divergent ones at this resolution and come back `diverged` as well.

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace aselab {

enum class QuadStatus { converged, diverged, inconclusive };

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  QuadStatus status = QuadStatus::inconclusive;
  long evaluations = 0;
};

// Thrown when the integrand produces NaN; carries the offending abscissa.
class IntegrandError : public std::runtime_error {
 public:
  IntegrandError(const std::string& what, double abscissa)
      : std::runtime_error(what), abscissa_(abscissa) {}
  double abscissa() const { return abscissa_; }

 private:
  double abscissa_;
};

struct QuadOptions {
  double rel_tol = 1e-10;
  // Subdivision budget; exhausting it yields status=inconclusive.
  int max_panels = 5000;
  // Disable when the caller already knows the integral is finite (e.g. the
  // inner integrals of the interference functionals); skips the tail scan.
  bool detect_divergence = true;
  // Abscissae where the integrand has kinks (piecewise models); used as
  // initial panel boundaries.
  std::vector<double> breakpoints = {};
};

using Integrand = std::function<double(double)>;
using Integrand2D = std::function<double(double, double)>;

// Integral of f over [a, inf). `tol` is a relative tolerance in
// (1e-14, 1e-2).
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         double tol);
QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadOptions& opts);

// Integral of f over a finite interval [a, b] (same panel machinery, no
// divergence scan). Exposed because the feasibility and condition checks
// need it for split domains.
QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadOptions& opts);

// Iterated integral of f(r, t) over the positive quadrant: inner in r,
// outer in t. Divergence of the outer integral propagates to the result.
QuadratureResult integrate_double(const Integrand2D& f, double tol);
QuadratureResult integrate_double(const Integrand2D& f,
                                  const QuadOptions& outer,
                                  const QuadOptions& inner);

}  // namespace aselab
