#pragma once

// Counter-based splittable random streams plus the samplers used by the
// Monte Carlo engine. Stream k of a given seed is a pure function of
// (seed, k), so results do not depend on how realizations are scheduled
// across workers.

#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace aselab {

// SplitMix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    return mix64(z);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256++ (Blackman & Vigna). State is expanded from a 64-bit key with
// SplitMix64, as the authors recommend.
class Xoshiro256PlusPlus {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256PlusPlus(std::uint64_t key) {
    SplitMix64 sm(key);
    for (auto& w : s_) w = sm();
  }

  // Stream `index` of `seed`. Distinct indices land in unrelated regions of
  // the key space, which is what makes per-realization streams independent
  // of worker count.
  static Xoshiro256PlusPlus for_stream(std::uint64_t seed, std::uint64_t index) {
    return Xoshiro256PlusPlus(mix64(seed + 0x9e3779b97f4a7c15ULL * (index + 1)));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  std::uint64_t operator()() { return next(); }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe as a log() argument.
  double uniform_pos01() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
};

namespace detail {

// Ziggurat tables for Exp(1) and N(0,1) (Marsaglia & Tsang 2000 layout).
struct ZigguratTables {
  std::uint32_t ke[256];
  double we[256];
  double fe[256];
  std::uint32_t kn[128];
  double wn[128];
  double fn[128];

  ZigguratTables() {
    {
      const double m2 = 4294967296.0;
      double de = 7.697117470131487;
      double te = de;
      const double ve = 3.949659822581572e-3;
      double q = ve / std::exp(-de);
      ke[0] = static_cast<std::uint32_t>((de / q) * m2);
      ke[1] = 0;
      we[0] = q / m2;
      we[255] = de / m2;
      fe[0] = 1.0;
      fe[255] = std::exp(-de);
      for (int i = 254; i >= 1; i--) {
        de = -std::log(ve / de + std::exp(-de));
        ke[i + 1] = static_cast<std::uint32_t>((de / te) * m2);
        te = de;
        fe[i] = std::exp(-de);
        we[i] = de / m2;
      }
    }
    {
      const double m1 = 2147483648.0;
      double dn = 3.442619855899;
      double tn = dn;
      const double vn = 9.91256303526217e-3;
      double q = vn / std::exp(-0.5 * dn * dn);
      kn[0] = static_cast<std::uint32_t>((dn / q) * m1);
      kn[1] = 0;
      wn[0] = q / m1;
      wn[127] = dn / m1;
      fn[0] = 1.0;
      fn[127] = std::exp(-0.5 * dn * dn);
      for (int i = 126; i >= 1; i--) {
        dn = std::sqrt(-2.0 * std::log(vn / dn + std::exp(-0.5 * dn * dn)));
        kn[i + 1] = static_cast<std::uint32_t>((dn / tn) * m1);
        tn = dn;
        fn[i] = std::exp(-0.5 * dn * dn);
        wn[i] = dn / m1;
      }
    }
  }
};

inline const ZigguratTables& zig() {
  static const ZigguratTables t;
  return t;
}

}  // namespace detail

// Exp(1) via the ziggurat; equivalent in distribution to -log(U) but without
// a log on the fast path.
inline double sample_exponential(Xoshiro256PlusPlus& rng) {
  const auto& t = detail::zig();
  for (;;) {
    const std::uint32_t jz = static_cast<std::uint32_t>(rng.next() >> 32);
    const std::uint32_t iz = jz & 255u;
    const double x = jz * t.we[iz];
    if (jz < t.ke[iz]) return x;
    if (iz == 0) return 7.697117470131487 - std::log(rng.uniform_pos01());
    if (t.fe[iz] + rng.uniform01() * (t.fe[iz - 1] - t.fe[iz]) < std::exp(-x))
      return x;
  }
}

// Standard normal via the ziggurat.
inline double sample_normal(Xoshiro256PlusPlus& rng) {
  const auto& t = detail::zig();
  const double r = 3.442619855899;
  for (;;) {
    const std::int32_t hz = static_cast<std::int32_t>(rng.next() >> 32);
    const std::uint32_t iz = static_cast<std::uint32_t>(hz) & 127u;
    const std::uint32_t ahz =
        static_cast<std::uint32_t>(hz < 0 ? -static_cast<std::int64_t>(hz) : hz);
    if (ahz < t.kn[iz]) return hz * t.wn[iz];
    if (iz == 0) {
      double x, y;
      do {
        x = -std::log(rng.uniform_pos01()) / r;
        y = -std::log(rng.uniform_pos01());
      } while (y + y < x * x);
      return hz > 0 ? r + x : -(r + x);
    }
    const double x = hz * t.wn[iz];
    if (t.fn[iz] + rng.uniform01() * (t.fn[iz - 1] - t.fn[iz]) <
        std::exp(-0.5 * x * x))
      return x;
  }
}

// Gamma(shape, 1) for shape >= 1 (Marsaglia & Tsang squeeze method).
inline double sample_gamma_shape_ge1(double shape, Xoshiro256PlusPlus& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos01();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

// Gamma(shape, 1) for any shape > 0 (boosting for shape < 1).
inline double sample_gamma(double shape, Xoshiro256PlusPlus& rng) {
  if (shape >= 1.0) return sample_gamma_shape_ge1(shape, rng);
  const double g = sample_gamma_shape_ge1(shape + 1.0, rng);
  return g * std::pow(rng.uniform_pos01(), 1.0 / shape);
}

// Poisson(mean): product-of-uniforms inversion for small means, Hormann's
// PTRD transformed rejection for large ones. Both are exact samplers.
inline std::uint64_t sample_poisson(double mean, Xoshiro256PlusPlus& rng) {
  if (mean <= 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= rng.uniform_pos01();
    } while (p > limit);
    return k - 1;
  }
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = rng.uniform01() - 0.5;
    double v = rng.uniform_pos01();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0))
      return static_cast<std::uint64_t>(kf);
  }
}

}  // namespace aselab
