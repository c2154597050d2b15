#pragma once

// Monte Carlo engine: Poisson networks in a disc around the typical user,
// nearest-transmitter association, and the three throughput metrics with
// standard errors.
//
// Determinism contract: realization k draws everything from stream
// (seed, k); per-realization outputs land in slot k and are reduced with a
// fixed-shape pairwise tree. Results are therefore bit-identical for any
// worker count. ASE_LAB_THREADS caps the workers.

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "aselab/fading.hpp"
#include "aselab/pathloss.hpp"
#include "aselab/rng.hpp"

namespace aselab {

struct SimConfig {
  PathLossModel model = ElevatedPowerLaw{};
  FadingModel fading = RayleighFading{};
  double lambda = 1.0;  // transmitter density per unit area
  // Defaults to 1e-6 * L(0); must be positive when given.
  std::optional<double> noise_power;
  // Defaults to the auto rule: smallest R whose tail area is below 1e-3 of
  // gamma, floored so the expected point count is at least 50.
  std::optional<double> window_radius;
  long realizations = 100000;
  std::uint64_t seed = 0;
  std::vector<double> theta0 = {1.0};  // SINR thresholds, linear scale
};

struct SinrSample {
  double serving_distance = 0.0;
  double signal = 0.0;        // serving fading times serving link gain
  double interference = 0.0;  // sum over non-serving points in the window
  double sinr = 0.0;
};

struct ThresholdMetrics {
  double theta0 = 0.0;
  double constrained_ase = 0.0;
  double constrained_ase_se = 0.0;
  double potential_throughput = 0.0;
  double potential_throughput_se = 0.0;
  double coverage = 0.0;
  double coverage_se = 0.0;
};

struct MetricEstimate {
  long n = 0;
  long empty_window_redraws = 0;
  double ase = 0.0;
  double ase_se = 0.0;
  double mean_sinr = 0.0;
  double mean_sinr_se = 0.0;
  double mean_signal = 0.0;
  double mean_signal_se = 0.0;
  double mean_interference = 0.0;
  double mean_interference_se = 0.0;
  std::vector<ThresholdMetrics> per_threshold;
  double window_radius = 0.0;
  double noise_power = 0.0;
};

struct SweepRow {
  double lambda = 0.0;
  MetricEstimate metrics;
  double analytic_limit = 0.0;
};

// Validates invariants (positive density and noise, >= 100 realizations,
// expected window count >= 50) and applies defaults.
void validate(const SimConfig& cfg);

// Window auto rule for one density.
double auto_window_radius(const PathLossModel& model, double lambda);

// Resolved noise floor (default 1e-6 * L0).
double resolved_noise_power(const SimConfig& cfg);

// One network realization: point count, radii, fading and link states all
// from `rng`; empty windows are redrawn (counted in estimate_metrics).
SinrSample sample_realization(const SimConfig& cfg, Xoshiro256PlusPlus& rng);

// Deterministic evaluation of an injected link set (distance, fading power
// per transmitter); the nearest entry serves. Test hook and single-sample
// building block.
SinrSample evaluate_links(const PathLossModel& model,
                          std::span<const std::pair<double, double>> links,
                          double noise_power);

// `realizations` independent samples aggregated with standard errors.
MetricEstimate estimate_metrics(const SimConfig& cfg);

// One estimate per density with identical model/fading/seed policy.
std::vector<SweepRow> lambda_sweep(const SimConfig& base,
                                   std::span<const double> lambda_grid);

// Interference sampler for the second-negative-moment oracle: draws the
// non-serving interference of one realization at density lambda0.
double sample_interference_only(const PathLossModel& model,
                                const FadingModel& fading, double lambda0,
                                double window_radius, Xoshiro256PlusPlus& rng,
                                long& redraws);

// Fixed-shape pairwise reduction; the determinism anchor for aggregation.
double pairwise_sum(std::span<const double> values);

// Worker count: ASE_LAB_THREADS when set, hardware concurrency otherwise.
int worker_count();

}  // namespace aselab
