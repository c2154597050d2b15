#include "aselab/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "aselab/limits.hpp"

namespace aselab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailFraction = 1e-3;
constexpr double kMinExpectedCount = 50.0;

// ---------------------------------------------------------------------------
// Fading dispatch. The switch is loop-invariant and predicted perfectly; the
// ziggurat calls inline into each case.

struct FadeSampler {
  enum Kind { kDeterministic, kRayleigh, kNakagamiInt, kNakagamiGen, kLogNormal };
  Kind kind = kRayleigh;
  long m_int = 1;
  double m = 1.0;
  double sigma = 0.0;

  static FadeSampler make(const FadingModel& fading) {
    FadeSampler out;
    if (std::holds_alternative<DeterministicFading>(fading)) {
      out.kind = kDeterministic;
    } else if (std::holds_alternative<RayleighFading>(fading)) {
      out.kind = kRayleigh;
    } else if (const auto* nk = std::get_if<NakagamiFading>(&fading)) {
      out.m = nk->m;
      const double r = std::round(nk->m);
      if (std::fabs(nk->m - r) < 1e-12 && r >= 1.0 && r <= 64.0) {
        out.kind = kNakagamiInt;
        out.m_int = static_cast<long>(r);
      } else {
        out.kind = kNakagamiGen;
      }
    } else {
      out.kind = kLogNormal;
      out.sigma = std::get<LogNormalFading>(fading).sigma_ln();
    }
    return out;
  }

  double operator()(Xoshiro256PlusPlus& rng) const {
    switch (kind) {
      case kDeterministic:
        return 1.0;
      case kRayleigh:
        return sample_exponential(rng);
      case kNakagamiInt: {
        double sum = 0.0;
        for (long i = 0; i < m_int; ++i) sum += sample_exponential(rng);
        return sum / static_cast<double>(m_int);
      }
      case kNakagamiGen:
        return sample_gamma(m, rng) / m;
      case kLogNormal:
        return std::exp(sigma * sample_normal(rng) - 0.5 * sigma * sigma);
    }
    return 1.0;
  }
};

// ---------------------------------------------------------------------------
// Gain functors specialized per variant shape. Each takes the squared
// distance (points land uniformly in the disc, so r^2 = R^2 * u needs no
// square root unless the law itself does) and may consume randomness for the
// link state.

struct GainElev4 {
  double a, e2;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    const double d = e2 + r2;
    return a / (d * d);
  }
};

struct GainElevGen {
  double a, e2, half_eta;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return a * std::pow(e2 + r2, -half_eta);
  }
};

struct GainShift4 {
  double a, c0;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    const double d = c0 + std::sqrt(r2);
    const double d2 = d * d;
    return a / (d2 * d2);
  }
};

struct GainShiftGen {
  double a, c0, eta;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return a * std::pow(c0 + std::sqrt(r2), -eta);
  }
};

struct GainStretch1 {
  double a, alpha;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return a * std::exp(-alpha * std::sqrt(r2));
  }
};

struct GainStretch2 {
  double a, alpha;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return a * std::exp(-alpha * r2);
  }
};

struct GainStretchGen {
  double a, alpha, half_beta;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return a * std::exp(-alpha * std::pow(r2, half_beta));
  }
};

struct GainMin4 {
  double a_cap, a, rc2;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return r2 <= rc2 ? a_cap : a / (r2 * r2);
  }
};

struct GainMinGen {
  double a_cap, a, rc2, half_eta;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return r2 <= rc2 ? a_cap : a * std::pow(r2, -half_eta);
  }
};

struct GainInversePoly {
  double a, c0, half_eta;
  double operator()(double r2, Xoshiro256PlusPlus&) const {
    return a / (c0 + std::pow(r2, half_eta));
  }
};

struct GainGeneric {
  const PathLossModel* model;
  double operator()(double r2, Xoshiro256PlusPlus& rng) const {
    return sample_link_gain(*model, std::sqrt(r2), rng);
  }
};

// ---------------------------------------------------------------------------

struct RealizationOut {
  double serving_distance;
  double signal;
  double interference;
  double sinr;
  long redraws;
};

// One realization. Points are placed by their squared radius: for N uniform
// points in the disc the values u_i = (r_i/R)^2 are iid U(0,1), so the
// serving point is the minimum of N uniforms (sampled by inversion) and the
// interferers are iid uniform on (u_min, 1].
template <class Gain>
RealizationOut run_one(double mean_count, double radius2, double noise,
                       const Gain& gain, const FadeSampler& fade,
                       Xoshiro256PlusPlus& rng) {
  RealizationOut out{};
  std::uint64_t n = 0;
  while ((n = sample_poisson(mean_count, rng)) == 0) ++out.redraws;

  const double u_min =
      -std::expm1(std::log(rng.uniform_pos01()) / static_cast<double>(n));
  const double serving_r2 = radius2 * u_min;
  const double serving_gain = gain(serving_r2, rng);
  const double h0 = fade(rng);

  double interference = 0.0;
  const double span = 1.0 - u_min;
  for (std::uint64_t i = 1; i < n; ++i) {
    const double u = u_min + span * rng.uniform01();
    const double g = gain(radius2 * u, rng);
    interference += fade(rng) * g;
  }

  out.serving_distance = std::sqrt(serving_r2);
  out.signal = h0 * serving_gain;
  out.interference = interference;
  out.sinr = out.signal / (interference + noise);
  return out;
}

// Runs realizations [first, last) into the output slots, one stream per
// realization index.
template <class Gain>
void run_block(double mean_count, double radius2, double noise,
               const Gain& gain, const FadeSampler& fade, std::uint64_t seed,
               long first, long last, double* sinr, double* signal,
               double* interference, double* serving, long* redraws) {
  long local_redraws = 0;
  for (long k = first; k < last; ++k) {
    auto rng = Xoshiro256PlusPlus::for_stream(seed, static_cast<std::uint64_t>(k));
    auto out = run_one(mean_count, radius2, noise, gain, fade, rng);
    sinr[k] = out.sinr;
    signal[k] = out.signal;
    interference[k] = out.interference;
    if (serving) serving[k] = out.serving_distance;
    local_redraws += out.redraws;
  }
  *redraws += local_redraws;
}

// Resolves the specialized gain functor and forwards to `fn(gain)`.
template <class Fn>
void with_gain(const PathLossModel& model, Fn&& fn) {
  if (const auto* m = std::get_if<ElevatedPowerLaw>(&model)) {
    const double e2 = m->elevation * m->elevation;
    if (m->exponent == 4.0)
      fn(GainElev4{m->gain_scale, e2});
    else
      fn(GainElevGen{m->gain_scale, e2, 0.5 * m->exponent});
  } else if (const auto* m = std::get_if<ShiftedPowerLaw>(&model)) {
    if (m->exponent == 4.0)
      fn(GainShift4{m->gain_scale, m->offset});
    else
      fn(GainShiftGen{m->gain_scale, m->offset, m->exponent});
  } else if (const auto* m = std::get_if<StretchedExp>(&model)) {
    if (m->stretch == 1.0)
      fn(GainStretch1{m->gain_scale, m->decay_scale});
    else if (m->stretch == 2.0)
      fn(GainStretch2{m->gain_scale, m->decay_scale});
    else
      fn(GainStretchGen{m->gain_scale, m->decay_scale, 0.5 * m->stretch});
  } else if (const auto* m = std::get_if<MinPowerLaw>(&model)) {
    const double rc = m->crossover();
    if (m->exponent == 4.0)
      fn(GainMin4{m->gain_scale * m->cap, m->gain_scale, rc * rc});
    else
      fn(GainMinGen{m->gain_scale * m->cap, m->gain_scale, rc * rc,
                    0.5 * m->exponent});
  } else if (const auto* m = std::get_if<InversePoly>(&model)) {
    fn(GainInversePoly{m->gain_scale, m->offset, 0.5 * m->exponent});
  } else {
    fn(GainGeneric{&model});
  }
}

double mean_and_se(std::span<const double> values, double* se_out) {
  const double n = static_cast<double>(values.size());
  const double mean = pairwise_sum(values) / n;
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / (n - 1.0);
  if (se_out) *se_out = std::sqrt(var / n);
  return mean;
}

}  // namespace

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 32) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

int worker_count() {
  if (const char* env = std::getenv("ASE_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double auto_window_radius(const PathLossModel& model, double lambda) {
  const double gamma = gamma_integral(model);
  if (!std::isfinite(gamma))
    throw std::invalid_argument("window rule needs a finite area integral");
  const double target = kTailFraction * gamma;
  double hi = 1.0;
  while (tail_area(model, hi) >= target) {
    hi *= 2.0;
    if (hi > 1e12)
      throw std::runtime_error("window radius search failed to bracket");
  }
  double lo = hi * 0.5;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tail_area(model, mid) < target)
      hi = mid;
    else
      lo = mid;
  }
  const double floor_radius = std::sqrt(kMinExpectedCount / (kPi * lambda));
  return std::max(hi, floor_radius);
}

double resolved_noise_power(const SimConfig& cfg) {
  if (cfg.noise_power) return *cfg.noise_power;
  return 1e-6 * l_zero(cfg.model);
}

void validate(const SimConfig& cfg) {
  validate(cfg.model);
  validate(cfg.fading);
  if (!(std::isfinite(cfg.lambda) && cfg.lambda > 0.0))
    throw std::invalid_argument("lambda must be positive");
  if (cfg.realizations < 100)
    throw std::invalid_argument("need at least 100 realizations");
  const double noise = resolved_noise_power(cfg);
  if (!(std::isfinite(noise) && noise > 0.0))
    throw std::invalid_argument("noise power must be positive and finite");
  for (double t : cfg.theta0)
    if (!(std::isfinite(t) && t >= 0.0))
      throw std::invalid_argument("theta0 thresholds must be >= 0");
  if (cfg.window_radius) {
    const double r = *cfg.window_radius;
    if (!(std::isfinite(r) && r > 0.0))
      throw std::invalid_argument("window radius must be positive");
    if (cfg.lambda * kPi * r * r < kMinExpectedCount)
      throw std::invalid_argument(
          "window radius gives an expected point count below 50");
  }
}

SinrSample evaluate_links(const PathLossModel& model,
                          std::span<const std::pair<double, double>> links,
                          double noise_power) {
  if (links.empty()) throw std::invalid_argument("need at least one link");
  std::size_t serving = 0;
  for (std::size_t i = 1; i < links.size(); ++i)
    if (links[i].first < links[serving].first) serving = i;
  SinrSample out;
  out.serving_distance = links[serving].first;
  out.signal =
      links[serving].second * eval_pathloss(model, links[serving].first);
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (i == serving) continue;
    out.interference += links[i].second * eval_pathloss(model, links[i].first);
  }
  out.sinr = out.signal / (out.interference + noise_power);
  return out;
}

SinrSample sample_realization(const SimConfig& cfg, Xoshiro256PlusPlus& rng) {
  validate(cfg);
  const double radius = cfg.window_radius
                            ? *cfg.window_radius
                            : auto_window_radius(cfg.model, cfg.lambda);
  const double noise = resolved_noise_power(cfg);
  const double mean_count = cfg.lambda * kPi * radius * radius;
  const auto fade = FadeSampler::make(cfg.fading);
  SinrSample sample;
  with_gain(cfg.model, [&](const auto& gain) {
    auto out = run_one(mean_count, radius * radius, noise, gain, fade, rng);
    sample.serving_distance = out.serving_distance;
    sample.signal = out.signal;
    sample.interference = out.interference;
    sample.sinr = out.sinr;
  });
  return sample;
}

MetricEstimate estimate_metrics(const SimConfig& cfg) {
  validate(cfg);
  const double radius = cfg.window_radius
                            ? *cfg.window_radius
                            : auto_window_radius(cfg.model, cfg.lambda);
  const double noise = resolved_noise_power(cfg);
  const double mean_count = cfg.lambda * kPi * radius * radius;
  const auto fade = FadeSampler::make(cfg.fading);
  const long n = cfg.realizations;

  std::vector<double> sinr(n), signal(n), interference(n);

  const int workers = std::max(1, std::min<int>(worker_count(),
                                                static_cast<int>(n)));
  std::vector<long> redraws(workers, 0);
  with_gain(cfg.model, [&](const auto& gain) {
    if (workers == 1) {
      run_block(mean_count, radius * radius, noise, gain, fade, cfg.seed, 0, n,
                sinr.data(), signal.data(), interference.data(), nullptr,
                &redraws[0]);
      return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const long first = n * w / workers;
      const long last = n * (w + 1) / workers;
      pool.emplace_back([&, w, first, last]() {
        run_block(mean_count, radius * radius, noise, gain, fade, cfg.seed,
                  first, last, sinr.data(), signal.data(), interference.data(),
                  nullptr, &redraws[w]);
      });
    }
    for (auto& t : pool) t.join();
  });

  MetricEstimate est;
  est.n = n;
  est.window_radius = radius;
  est.noise_power = noise;
  for (long r : redraws) est.empty_window_redraws += r;

  constexpr double kInvLn2 = 1.4426950408889634;
  std::vector<double> rate(n);
  for (long k = 0; k < n; ++k) rate[k] = std::log1p(sinr[k]) * kInvLn2;

  double se = 0.0;
  est.ase = cfg.lambda * mean_and_se(rate, &se);
  est.ase_se = cfg.lambda * se;
  est.mean_sinr = mean_and_se(sinr, &se);
  est.mean_sinr_se = se;
  est.mean_signal = mean_and_se(signal, &se);
  est.mean_signal_se = se;
  est.mean_interference = mean_and_se(interference, &se);
  est.mean_interference_se = se;

  std::vector<double> masked(n);
  for (double theta : cfg.theta0) {
    ThresholdMetrics tm;
    tm.theta0 = theta;
    // Sample-wise values keep the ordering potential <= constrained <= ase
    // exact: the masked rate dominates the fixed-rate term pointwise, and
    // the pairwise trees have identical shape.
    for (long k = 0; k < n; ++k) masked[k] = sinr[k] >= theta ? rate[k] : 0.0;
    tm.constrained_ase = cfg.lambda * mean_and_se(masked, &se);
    tm.constrained_ase_se = cfg.lambda * se;

    const double fixed_rate = std::log1p(theta) * kInvLn2;
    for (long k = 0; k < n; ++k)
      masked[k] = sinr[k] >= theta ? fixed_rate : 0.0;
    tm.potential_throughput = cfg.lambda * mean_and_se(masked, &se);
    tm.potential_throughput_se = cfg.lambda * se;

    for (long k = 0; k < n; ++k) masked[k] = sinr[k] >= theta ? 1.0 : 0.0;
    tm.coverage = mean_and_se(masked, &se);
    tm.coverage_se = se;
    est.per_threshold.push_back(tm);
  }
  return est;
}

std::vector<SweepRow> lambda_sweep(const SimConfig& base,
                                   std::span<const double> lambda_grid) {
  if (lambda_grid.size() < 2)
    throw std::invalid_argument("sweep needs at least two densities");
  for (std::size_t i = 1; i < lambda_grid.size(); ++i)
    if (!(lambda_grid[i] > lambda_grid[i - 1]))
      throw std::invalid_argument("sweep densities must be strictly increasing");
  const double limit = ase_limit(base.model).general_value;
  std::vector<SweepRow> rows;
  rows.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    SimConfig cfg = base;
    cfg.lambda = lambda;
    SweepRow row;
    row.lambda = lambda;
    row.metrics = estimate_metrics(cfg);
    row.analytic_limit = limit;
    rows.push_back(std::move(row));
  }
  return rows;
}

double sample_interference_only(const PathLossModel& model,
                                const FadingModel& fading, double lambda0,
                                double window_radius, Xoshiro256PlusPlus& rng,
                                long& redraws) {
  const double mean_count = lambda0 * kPi * window_radius * window_radius;
  const auto fade = FadeSampler::make(fading);
  double value = 0.0;
  with_gain(model, [&](const auto& gain) {
    for (;;) {
      auto out = run_one(mean_count, window_radius * window_radius, 1.0, gain,
                         fade, rng);
      redraws += out.redraws;
      if (out.interference > 0.0) {
        value = out.interference;
        return;
      }
      ++redraws;  // zero interferers: the negative moments need I > 0
    }
  });
  return value;
}

}  // namespace aselab
