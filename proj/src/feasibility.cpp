#include "aselab/feasibility.hpp"

#include <cmath>
#include <limits>

namespace aselab {

namespace {

std::vector<double> quadrature_breakpoints(const PathLossModel& model) {
  std::vector<double> pts;
  if (const auto* mp = std::get_if<MinPowerLaw>(&model)) {
    pts.push_back(mp->crossover());
  } else if (const auto* ms = std::get_if<MultiSlope>(&model)) {
    pts = ms->boundaries;
  } else if (const auto* c = std::get_if<LosNlosComposite>(&model)) {
    pts = c->los.boundaries;
    pts.insert(pts.end(), c->nlos.boundaries.begin(), c->nlos.boundaries.end());
  }
  return pts;
}

}  // namespace

FeasibilityReport check_feasibility(const PathLossModel& model,
                                    const FeasibilitySettings& settings) {
  validate(model);
  FeasibilityReport report;
  report.l_zero = l_zero(model);
  const bool l0_finite = std::isfinite(report.l_zero);

  // Property 2: dense log-grid scan. Trivial when L0 is infinite.
  report.bounded = true;
  if (l0_finite) {
    const double cap = report.l_zero * (1.0 + 1e-12);
    const int decades = static_cast<int>(
        std::ceil(std::log10(settings.scan_max_r / settings.scan_min_r)));
    const long n = static_cast<long>(decades) * settings.points_per_decade;
    const double step =
        std::log(settings.scan_max_r / settings.scan_min_r) / n;
    for (long i = 0; i <= n && report.bounded; ++i) {
      const double r = settings.scan_min_r * std::exp(step * i);
      if (eval_pathloss(model, r) > cap) report.bounded = false;
    }
  }

  // Property 3: gamma. Closed forms are authoritative for origin-side
  // divergence; quadrature provides the numeric verdict otherwise.
  const auto closed = gamma_closed_form(model);
  if (closed && std::isinf(*closed)) {
    report.gamma = std::numeric_limits<double>::infinity();
    report.gamma_status = QuadStatus::diverged;
  } else {
    QuadOptions opts;
    opts.rel_tol = settings.gamma_tol;
    opts.breakpoints = quadrature_breakpoints(model);
    auto q = integrate_semi_infinite(
        [&](double r) { return r * eval_pathloss(model, r); }, 0.0, opts);
    report.gamma_status = q.status;
    report.gamma = q.status == QuadStatus::diverged
                       ? std::numeric_limits<double>::infinity()
                       : q.value;
  }

  if (!l0_finite) {
    report.failed_property = 1;
  } else if (!report.bounded) {
    report.failed_property = 2;
  } else if (report.gamma_status == QuadStatus::diverged) {
    report.failed_property = 3;
  }
  report.feasible = !report.failed_property.has_value();
  return report;
}

}  // namespace aselab
