#include "aselab/limits.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "aselab/quadrature.hpp"

namespace aselab {

namespace {

constexpr double kTwoPiLn2 = 2.0 * std::numbers::pi * std::numbers::ln2;

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

double gamma_by_quadrature(const PathLossModel& model) {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.breakpoints = quadrature_breakpoints(model);
  auto q = integrate_semi_infinite(
      [&](double r) { return r * eval_pathloss(model, r); }, 0.0, opts);
  if (q.status == QuadStatus::diverged)
    return std::numeric_limits<double>::infinity();
  return q.value;
}

}  // namespace

double gamma_integral(const PathLossModel& model) {
  validate(model);
  const auto closed = gamma_closed_form(model);
  if (closed && std::isinf(*closed)) return *closed;
  if (!closed) return gamma_by_quadrature(model);
  const double numeric = gamma_by_quadrature(model);
  const double rel = std::fabs(numeric - *closed) / *closed;
  if (!(rel < 1e-6)) {
    std::ostringstream os;
    os << "gamma closed form (" << *closed << ") and quadrature (" << numeric
       << ") disagree by " << rel;
    throw std::logic_error(os.str());
  }
  return *closed;
}

AseLimit ase_limit(const PathLossModel& model) {
  auto report = check_feasibility(model);
  if (!report.feasible) {
    std::ostringstream os;
    os << "model is not physically feasible: property "
       << *report.failed_property << " fails";
    throw InfeasibleModelError(os.str(), *report.failed_property);
  }
  AseLimit out;
  out.l_zero = report.l_zero;
  out.gamma = gamma_integral(model);
  out.general_value = out.l_zero / (kTwoPiLn2 * out.gamma);
  if (auto cf = table1_limit(model)) {
    out.closed_form_value = cf;
  } else if (const auto* ms = std::get_if<MultiSlope>(&model)) {
    if (ms->segments.front().exponent == 0.0)
      out.closed_form_value = multislope_limit(*ms).value;
  }
  if (out.closed_form_value) {
    out.agreement = std::fabs(out.general_value - *out.closed_form_value) /
                    std::fabs(out.general_value);
  }
  return out;
}

std::optional<double> table1_limit(const PathLossModel& model) {
  constexpr double pi = std::numbers::pi;
  constexpr double ln2 = std::numbers::ln2;
  return std::visit(
      [&](const auto& m) -> std::optional<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, MinPowerLaw>) {
          const double eta = m.exponent;
          return (eta - 2.0) * std::pow(m.cap, 2.0 / eta) / (eta * pi * ln2);
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          const double eta = m.exponent;
          return (eta * eta - 3.0 * eta + 2.0) /
                 (2.0 * pi * ln2 * m.offset * m.offset);
        } else if constexpr (std::is_same_v<T, InversePoly>) {
          const double eta = m.exponent;
          return eta * std::sin(2.0 * pi / eta) /
                 (2.0 * pi * pi * ln2 * std::pow(m.offset, 2.0 / eta));
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          return (m.exponent - 2.0) /
                 (2.0 * pi * m.elevation * m.elevation * ln2);
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          return m.stretch * std::pow(m.decay_scale, 2.0 / m.stretch) /
                 (2.0 * pi * ln2 * std::tgamma(2.0 / m.stretch));
        } else {
          return std::nullopt;
        }
      },
      model);
}

MultiSlopeLimitResult multislope_limit(const MultiSlope& model) {
  validate(PathLossModel(model));
  if (model.segments.front().exponent != 0.0)
    throw std::invalid_argument(
        "multi-slope limit requires a flat first segment (exponent 0)");
  if (model.segments.back().exponent <= 2.0)
    throw InfeasibleModelError(
        "multi-slope tail exponent <= 2 makes gamma infinite", 3);

  const double g = *gamma_closed_form(PathLossModel(model));
  const double a1 = model.segments.front().gain_scale;

  MultiSlopeLimitResult out;
  out.value = a1 / (kTwoPiLn2 * g);

  // Published form: identical piecewise sum except that the final segment
  // contributes A_n r_{n-1}^{2-eta_n} / eta_n instead of / (eta_n - 2).
  const std::size_t n = model.segments.size();
  double printed_sum = a1 * model.boundaries.front() * model.boundaries.front() / 2.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double eta = model.segments[i].exponent;
    const double ai = model.segments[i].gain_scale;
    const double hi = std::pow(model.boundaries[i], 2.0 - eta);
    const double lo = std::pow(model.boundaries[i - 1], 2.0 - eta);
    printed_sum += ai * (hi / (2.0 - eta) + lo / (eta - 2.0));
  }
  const double eta_n = model.segments.back().exponent;
  printed_sum += model.segments.back().gain_scale *
                 std::pow(model.boundaries.back(), 2.0 - eta_n) / eta_n;
  out.as_printed = a1 / (kTwoPiLn2 * printed_sum);
  out.rel_difference = std::fabs(out.value - out.as_printed) / out.value;
  return out;
}

}  // namespace aselab
