#pragma once

// Unit-mean small-scale fading power distributions: sampling plus the two
// closed-form functionals the interference analysis needs.

#include <variant>

#include "aselab/rng.hpp"

namespace aselab {

struct DeterministicFading {};

// Unit-mean exponential power (Rayleigh amplitude).
struct RayleighFading {};

// Unit-mean gamma power with shape m >= 0.5.
struct NakagamiFading {
  double m = 1.0;
};

// Log-normal with the mean-one correction applied internally; parameterized
// by the dB-domain standard deviation.
struct LogNormalFading {
  double sigma_db = 8.0;

  double sigma_ln() const;  // natural-log sigma
};

using FadingModel = std::variant<DeterministicFading, RayleighFading,
                                 NakagamiFading, LogNormalFading>;

void validate(const FadingModel& fading);

// One power sample; nonnegative, unit mean.
double sample_fading(const FadingModel& fading, Xoshiro256PlusPlus& rng);

// E_h[1 - exp(-s h)] for s >= 0; the per-point factor in the interference
// Laplace transform. Closed form except for log-normal, which uses a
// Gauss-Hermite rule.
double one_minus_laplace(const FadingModel& fading, double s);

// P(h >= x); the per-point factor of the indicator-form condition integral.
double tail_probability(const FadingModel& fading, double x);

}  // namespace aselab
