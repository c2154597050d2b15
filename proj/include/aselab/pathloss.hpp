#pragma once

// The bounded path-loss model family: each variant evaluates a mean channel
// gain L(r) (dimensionless linear power ratio) against a normalized
// distance. Evaluation is pure; the only stochastic entry point is
// sample_link_gain, which draws the LoS state of composite links.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aselab/rng.hpp"

namespace aselab {

// L(r) = gain_scale * r^-exponent. Unbounded at the origin; kept as the
// classical reference model and as the lower-bound envelope of multi-slope
// tails. It never passes the feasibility gate.
struct UnboundedPowerLaw {
  double gain_scale = 1.0;
  double exponent = 4.0;
};

// L(r) = gain_scale * min(cap, r^-exponent).
struct MinPowerLaw {
  double gain_scale = 1.0;
  double cap = 1.0;
  double exponent = 4.0;

  // Distance where the cap meets the power law.
  double crossover() const;
};

// L(r) = gain_scale * (offset + r)^-exponent.
struct ShiftedPowerLaw {
  double gain_scale = 1.0;
  double offset = 1.0;
  double exponent = 4.0;
};

// L(r) = gain_scale / (offset + r^exponent).
struct InversePoly {
  double gain_scale = 1.0;
  double offset = 1.0;
  double exponent = 4.0;
};

// L(r) = gain_scale * (elevation^2 + r^2)^(-exponent/2); the elevation
// difference between transmitter and receiver bounds the gain.
struct ElevatedPowerLaw {
  double gain_scale = 1.0;
  double elevation = 1.0;
  double exponent = 4.0;
};

// L(r) = gain_scale * exp(-decay_scale * r^stretch), stretch in (0, 2].
struct StretchedExp {
  double gain_scale = 1.0;
  double decay_scale = 1.0;
  double stretch = 1.0;
};

struct SlopeSegment {
  double gain_scale = 1.0;
  double exponent = 0.0;
};

// Piecewise power law: segment i applies gain_scale_i * r^-exponent_i on
// [boundaries[i-1], boundaries[i]), with an implicit 0 on the left of the
// first segment and infinity on the right of the last. Continuity across
// boundaries is not required; continuity_warnings() reports mismatches.
struct MultiSlope {
  std::vector<SlopeSegment> segments;   // size n >= 2
  std::vector<double> boundaries;       // size n - 1, strictly increasing, > 0
};

// LoS probability, monotone decreasing in distance.
struct LosProbability {
  enum class Kind { exp_decay, clamp };
  Kind kind = Kind::exp_decay;
  // exp_decay: exp(-r/scale); clamp: min(scale/r, 1).
  double scale = 1.0;
};

// Multi-slope evaluated on elevated distance: segment i gives
// gain_scale_i * (r^2 + elevation^2)^(-exponent_i/2); the elevation lives on
// the enclosing composite.
struct ElevatedMultiSlope {
  std::vector<SlopeSegment> segments;   // size >= 1
  std::vector<double> boundaries;       // size segments-1
};

// Random link state: LoS with probability p_los(r), else NLoS. The mean
// gain is the state average; sample_link_gain draws the state per link.
struct LosNlosComposite {
  ElevatedMultiSlope los;
  ElevatedMultiSlope nlos;
  LosProbability p_los;
  double elevation = 1.0;
};

using PathLossModel =
    std::variant<UnboundedPowerLaw, MinPowerLaw, ShiftedPowerLaw, InversePoly,
                 ElevatedPowerLaw, StretchedExp, MultiSlope, LosNlosComposite>;

// Parameter sanity (positivity, ordering, stretch range). Throws
// std::invalid_argument. Note this does not require eta > 2: tail exponents
// too small to give a finite gamma are the feasibility check's job to
// reject, and they must be constructible to be testable.
void validate(const PathLossModel& model);

double los_probability(const LosProbability& p, double r);

// Mean channel gain at distance r >= 0 (state-averaged for composites).
// Negative r throws std::domain_error.
double eval_pathloss(const PathLossModel& model, double r);

// L(0); +infinity marks models without a finite gain at the origin.
double l_zero(const PathLossModel& model);

// One stochastic link gain: draws the LoS state for composites, identical
// to eval_pathloss for deterministic variants.
double sample_link_gain(const PathLossModel& model, double r,
                        Xoshiro256PlusPlus& rng);

// dL/dr where the variant admits a closed form (deterministic variants
// only; right-derivative at kinks). Used by the condition checks.
std::optional<double> analytic_derivative(const PathLossModel& model, double r);

// Closed form of gamma = int_0^inf r L(r) dr where the variant admits one;
// +infinity when the closed form is divergent. nullopt means "integrate
// numerically" (InversePoly with general exponent, composites).
std::optional<double> gamma_closed_form(const PathLossModel& model);

// int_R^inf r L(r) dr; closed form where available, quadrature otherwise.
// Used for window-truncation accounting in the simulator.
double tail_area(const PathLossModel& model, double radius);

// log L(r), computed analytically per variant so it stays finite where the
// gain itself underflows (stretched-exponential tails). The condition
// integrands divide by L(r)^2 and need this headroom.
double log_gain(const PathLossModel& model, double r);

// LoS and NLoS branch gains of a composite at distance r.
std::pair<double, double> branch_gains(const LosNlosComposite& model, double r);

// Per-boundary relative gain mismatch above 1% for multi-slope variants.
std::vector<std::string> continuity_warnings(const PathLossModel& model);

// True when the variant is deterministic in distance (everything except
// LosNlosComposite).
bool deterministic_gain(const PathLossModel& model);

}  // namespace aselab
