#include "aselab/pathloss.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "aselab/quadrature.hpp"
#include "aselab/special.hpp"

namespace aselab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void require_positive(double v, const char* msg) {
  require(std::isfinite(v) && v > 0.0, msg);
}

void validate_segments(const std::vector<SlopeSegment>& segments,
                       const std::vector<double>& boundaries,
                       std::size_t min_segments, const char* what) {
  std::ostringstream err;
  if (segments.size() < min_segments)
    err << what << ": needs at least " << min_segments << " segments; ";
  if (boundaries.size() + 1 != segments.size())
    err << what << ": boundary count must be segments-1; ";
  for (const auto& s : segments) {
    if (!(std::isfinite(s.gain_scale) && s.gain_scale > 0.0))
      err << what << ": segment gain scales must be positive; ";
    if (!(std::isfinite(s.exponent) && s.exponent >= 0.0))
      err << what << ": segment exponents must be >= 0; ";
  }
  double prev = 0.0;
  for (double b : boundaries) {
    if (!(std::isfinite(b) && b > prev)) {
      err << what << ": boundaries must be positive and strictly increasing; ";
      break;
    }
    prev = b;
  }
  const std::string s = err.str();
  if (!s.empty()) throw std::invalid_argument(s);
}

// Segment index for distance r (last segment is unbounded on the right).
std::size_t segment_index(const std::vector<double>& boundaries, double r) {
  std::size_t i = 0;
  while (i < boundaries.size() && r >= boundaries[i]) ++i;
  return i;
}

double eval_elevated(const ElevatedMultiSlope& ms, double elevation, double r) {
  const auto& seg = ms.segments[segment_index(ms.boundaries, r)];
  return seg.gain_scale *
         std::pow(elevation * elevation + r * r, -0.5 * seg.exponent);
}

double composite_mean(const LosNlosComposite& m, double r) {
  const double p = los_probability(m.p_los, r);
  return p * eval_elevated(m.los, m.elevation, r) +
         (1.0 - p) * eval_elevated(m.nlos, m.elevation, r);
}

double tail_by_quadrature(const PathLossModel& model, double radius) {
  QuadOptions opts;
  opts.rel_tol = 1e-10;
  opts.detect_divergence = false;
  auto res = integrate_semi_infinite(
      [&](double r) { return r * eval_pathloss(model, r); }, radius, opts);
  return res.value;
}

// int_a^b r * g r^-eta dr for one power-law segment.
double segment_area(double gain, double eta, double a, double b) {
  if (eta == 2.0) return gain * std::log(b / a);
  const double p = 2.0 - eta;
  const double hi = std::isinf(b) ? (p < 0.0 ? 0.0 : kInf) : std::pow(b, p);
  const double lo = a == 0.0 ? (p > 0.0 ? 0.0 : kInf) : std::pow(a, p);
  return gain * (hi - lo) / p;
}

}  // namespace

double MinPowerLaw::crossover() const { return std::pow(cap, -1.0 / exponent); }

void validate(const PathLossModel& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          require_positive(m.gain_scale, "gain_scale must be positive");
          require_positive(m.exponent, "exponent must be positive");
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          require_positive(m.gain_scale, "gain_scale must be positive");
          require_positive(m.cap, "cap must be positive");
          require_positive(m.exponent, "exponent must be positive");
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          require_positive(m.gain_scale, "gain_scale must be positive");
          require_positive(m.offset, "offset must be positive");
          require_positive(m.exponent, "exponent must be positive");
        } else if constexpr (std::is_same_v<T, InversePoly>) {
          require_positive(m.gain_scale, "gain_scale must be positive");
          require_positive(m.offset, "offset must be positive");
          require_positive(m.exponent, "exponent must be positive");
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          require_positive(m.gain_scale, "gain_scale must be positive");
          require_positive(m.elevation, "elevation must be positive");
          require_positive(m.exponent, "exponent must be positive");
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          require_positive(m.gain_scale, "gain_scale must be positive");
          require_positive(m.decay_scale, "decay_scale must be positive");
          require(std::isfinite(m.stretch) && m.stretch > 0.0 && m.stretch <= 2.0,
                  "stretch must lie in (0, 2]");
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          validate_segments(m.segments, m.boundaries, 2, "multi_slope");
        } else if constexpr (std::is_same_v<T, LosNlosComposite>) {
          validate_segments(m.los.segments, m.los.boundaries, 1, "los branch");
          validate_segments(m.nlos.segments, m.nlos.boundaries, 1,
                            "nlos branch");
          require_positive(m.elevation, "elevation must be positive");
          require_positive(m.p_los.scale, "p_los scale must be positive");
        }
      },
      model);
}

double los_probability(const LosProbability& p, double r) {
  switch (p.kind) {
    case LosProbability::Kind::exp_decay:
      return std::exp(-r / p.scale);
    case LosProbability::Kind::clamp:
      return r <= p.scale ? 1.0 : p.scale / r;
  }
  return 0.0;
}

double eval_pathloss(const PathLossModel& model, double r) {
  if (r < 0.0) throw std::domain_error("distance must be non-negative");
  return std::visit(
      [r](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          return m.gain_scale * std::pow(r, -m.exponent);
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          return m.gain_scale * std::min(m.cap, std::pow(r, -m.exponent));
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          return m.gain_scale * std::pow(m.offset + r, -m.exponent);
        } else if constexpr (std::is_same_v<T, InversePoly>) {
          return m.gain_scale / (m.offset + std::pow(r, m.exponent));
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          return m.gain_scale *
                 std::pow(m.elevation * m.elevation + r * r, -0.5 * m.exponent);
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          return m.gain_scale * std::exp(-m.decay_scale * std::pow(r, m.stretch));
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          const auto& seg = m.segments[segment_index(m.boundaries, r)];
          return seg.gain_scale * std::pow(r, -seg.exponent);
        } else if constexpr (std::is_same_v<T, LosNlosComposite>) {
          return composite_mean(m, r);
        }
      },
      model);
}

double l_zero(const PathLossModel& model) {
  return std::visit(
      [](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          return kInf;
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          return m.gain_scale * m.cap;
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          const auto& seg = m.segments.front();
          return seg.exponent == 0.0 ? seg.gain_scale : kInf;
        } else {
          return eval_pathloss(PathLossModel(m), 0.0);
        }
      },
      model);
}

double sample_link_gain(const PathLossModel& model, double r,
                        Xoshiro256PlusPlus& rng) {
  if (const auto* c = std::get_if<LosNlosComposite>(&model)) {
    if (r < 0.0) throw std::domain_error("distance must be non-negative");
    const double p = los_probability(c->p_los, r);
    const bool los = rng.uniform01() < p;
    return eval_elevated(los ? c->los : c->nlos, c->elevation, r);
  }
  return eval_pathloss(model, r);
}

std::optional<double> analytic_derivative(const PathLossModel& model, double r) {
  if (r < 0.0) throw std::domain_error("distance must be non-negative");
  return std::visit(
      [r](const auto& m) -> std::optional<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          return -m.gain_scale * m.exponent * std::pow(r, -m.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          if (r < m.crossover()) return 0.0;
          return -m.gain_scale * m.exponent * std::pow(r, -m.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          return -m.gain_scale * m.exponent *
                 std::pow(m.offset + r, -m.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, InversePoly>) {
          const double den = m.offset + std::pow(r, m.exponent);
          return -m.gain_scale * m.exponent * std::pow(r, m.exponent - 1.0) /
                 (den * den);
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          return -m.gain_scale * m.exponent * r *
                 std::pow(m.elevation * m.elevation + r * r,
                          -0.5 * m.exponent - 1.0);
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          return -m.gain_scale * m.decay_scale * m.stretch *
                 std::pow(r, m.stretch - 1.0) *
                 std::exp(-m.decay_scale * std::pow(r, m.stretch));
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          const auto& seg = m.segments[segment_index(m.boundaries, r)];
          return -seg.gain_scale * seg.exponent *
                 std::pow(r, -seg.exponent - 1.0);
        } else {
          return std::nullopt;  // random link state: no deterministic slope
        }
      },
      model);
}

std::optional<double> gamma_closed_form(const PathLossModel& model) {
  return std::visit(
      [](const auto& m) -> std::optional<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          // Divergent at the origin for eta >= 2 and at infinity for
          // eta <= 2; never finite.
          return kInf;
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          const double rc = m.crossover();
          return m.gain_scale * (m.cap * rc * rc / 2.0 +
                                 std::pow(rc, 2.0 - m.exponent) /
                                     (m.exponent - 2.0));
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          return m.gain_scale * std::pow(m.offset, 2.0 - m.exponent) /
                 ((m.exponent - 1.0) * (m.exponent - 2.0));
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          return m.gain_scale * std::pow(m.elevation, 2.0 - m.exponent) /
                 (m.exponent - 2.0);
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          return m.gain_scale * std::tgamma(2.0 / m.stretch) /
                 (m.stretch * std::pow(m.decay_scale, 2.0 / m.stretch));
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          if (m.segments.front().exponent >= 2.0) return kInf;
          if (m.segments.back().exponent <= 2.0) return kInf;
          double total = 0.0;
          for (std::size_t i = 0; i < m.segments.size(); ++i) {
            const double lo = i == 0 ? 0.0 : m.boundaries[i - 1];
            const double hi =
                i + 1 == m.segments.size() ? kInf : m.boundaries[i];
            total += segment_area(m.segments[i].gain_scale,
                                  m.segments[i].exponent, lo, hi);
          }
          return total;
        } else {
          return std::nullopt;
        }
      },
      model);
}

double tail_area(const PathLossModel& model, double radius) {
  if (radius < 0.0) throw std::domain_error("radius must be non-negative");
  return std::visit(
      [&, radius](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          return segment_area(m.gain_scale, m.exponent, radius, kInf);
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          const double rc = m.crossover();
          if (radius >= rc)
            return segment_area(m.gain_scale, m.exponent, radius, kInf);
          return m.gain_scale * m.cap * (rc * rc - radius * radius) / 2.0 +
                 segment_area(m.gain_scale, m.exponent, rc, kInf);
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          const double u = m.offset + radius;
          return m.gain_scale *
                 (std::pow(u, 2.0 - m.exponent) / (m.exponent - 2.0) -
                  m.offset * std::pow(u, 1.0 - m.exponent) / (m.exponent - 1.0));
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          if (m.exponent <= 2.0) return kInf;
          return m.gain_scale *
                 std::pow(m.elevation * m.elevation + radius * radius,
                          0.5 * (2.0 - m.exponent)) /
                 (m.exponent - 2.0);
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          const double a = 2.0 / m.stretch;
          const double x = m.decay_scale * std::pow(radius, m.stretch);
          return m.gain_scale * std::tgamma(a) * gamma_q(a, x) /
                 (m.stretch * std::pow(m.decay_scale, a));
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          if (m.segments.back().exponent <= 2.0) return kInf;
          double total = 0.0;
          for (std::size_t i = 0; i < m.segments.size(); ++i) {
            const double lo = i == 0 ? 0.0 : m.boundaries[i - 1];
            const double hi =
                i + 1 == m.segments.size() ? kInf : m.boundaries[i];
            if (hi <= radius) continue;
            total += segment_area(m.segments[i].gain_scale,
                                  m.segments[i].exponent, std::max(lo, radius),
                                  hi);
          }
          return total;
        } else {
          return tail_by_quadrature(PathLossModel(m), radius);
        }
      },
      model);
}

double log_gain(const PathLossModel& model, double r) {
  if (r < 0.0) throw std::domain_error("distance must be non-negative");
  return std::visit(
      [r](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UnboundedPowerLaw>) {
          return std::log(m.gain_scale) - m.exponent * std::log(r);
        } else if constexpr (std::is_same_v<T, MinPowerLaw>) {
          if (r <= m.crossover()) return std::log(m.gain_scale * m.cap);
          return std::log(m.gain_scale) - m.exponent * std::log(r);
        } else if constexpr (std::is_same_v<T, ShiftedPowerLaw>) {
          return std::log(m.gain_scale) - m.exponent * std::log(m.offset + r);
        } else if constexpr (std::is_same_v<T, InversePoly>) {
          const double t = m.exponent * std::log(r);
          if (t > 300.0)  // r^eta dominates; avoid forming it directly
            return std::log(m.gain_scale) - t -
                   std::log1p(m.offset * std::exp(-t));
          return std::log(m.gain_scale) - std::log(m.offset + std::exp(t));
        } else if constexpr (std::is_same_v<T, ElevatedPowerLaw>) {
          return std::log(m.gain_scale) -
                 0.5 * m.exponent *
                     std::log(m.elevation * m.elevation + r * r);
        } else if constexpr (std::is_same_v<T, StretchedExp>) {
          return std::log(m.gain_scale) -
                 m.decay_scale * std::pow(r, m.stretch);
        } else if constexpr (std::is_same_v<T, MultiSlope>) {
          const auto& seg = m.segments[segment_index(m.boundaries, r)];
          return std::log(seg.gain_scale) - seg.exponent * std::log(r);
        } else {
          return std::log(composite_mean(m, r));
        }
      },
      model);
}

std::pair<double, double> branch_gains(const LosNlosComposite& model,
                                       double r) {
  if (r < 0.0) throw std::domain_error("distance must be non-negative");
  return {eval_elevated(model.los, model.elevation, r),
          eval_elevated(model.nlos, model.elevation, r)};
}

namespace {

void boundary_warnings(const std::vector<SlopeSegment>& segments,
                       const std::vector<double>& boundaries, double elevation2,
                       const char* what, std::vector<std::string>& out) {
  for (std::size_t i = 0; i < boundaries.size(); ++i) {
    const double b = boundaries[i];
    const double d2 = elevation2 + b * b;
    const double left =
        segments[i].gain_scale * std::pow(d2, -0.5 * segments[i].exponent);
    const double right = segments[i + 1].gain_scale *
                         std::pow(d2, -0.5 * segments[i + 1].exponent);
    const double rel = std::fabs(left - right) / std::max(left, right);
    if (rel > 0.01) {
      std::ostringstream os;
      os << what << ": gain mismatch of " << rel * 100.0 << "% at boundary "
         << b;
      out.push_back(os.str());
    }
  }
}

}  // namespace

std::vector<std::string> continuity_warnings(const PathLossModel& model) {
  std::vector<std::string> out;
  if (const auto* ms = std::get_if<MultiSlope>(&model)) {
    boundary_warnings(ms->segments, ms->boundaries, 0.0, "multi_slope", out);
  } else if (const auto* c = std::get_if<LosNlosComposite>(&model)) {
    const double e2 = c->elevation * c->elevation;
    boundary_warnings(c->los.segments, c->los.boundaries, e2, "los branch", out);
    boundary_warnings(c->nlos.segments, c->nlos.boundaries, e2, "nlos branch",
                      out);
  }
  return out;
}

bool deterministic_gain(const PathLossModel& model) {
  return !std::holds_alternative<LosNlosComposite>(model);
}

}  // namespace aselab
