#include "aselab/fading.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "aselab/special.hpp"

namespace aselab {

namespace {

constexpr double kLn10Over10 = 0.23025850929940457;

struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  HermiteRule() { gauss_hermite(64, nodes, weights); }
};

const HermiteRule& hermite() {
  static const HermiteRule rule;
  return rule;
}

bool near_integer(double m, long& k) {
  const double r = std::round(m);
  if (std::fabs(m - r) < 1e-12 && r >= 1.0 && r <= 64.0) {
    k = static_cast<long>(r);
    return true;
  }
  return false;
}

}  // namespace

double LogNormalFading::sigma_ln() const { return sigma_db * kLn10Over10; }

void validate(const FadingModel& fading) {
  if (const auto* n = std::get_if<NakagamiFading>(&fading)) {
    if (!(std::isfinite(n->m) && n->m >= 0.5))
      throw std::invalid_argument("nakagami shape m must be >= 0.5");
  } else if (const auto* l = std::get_if<LogNormalFading>(&fading)) {
    if (!(std::isfinite(l->sigma_db) && l->sigma_db > 0.0))
      throw std::invalid_argument("log-normal sigma_db must be positive");
  }
}

double sample_fading(const FadingModel& fading, Xoshiro256PlusPlus& rng) {
  return std::visit(
      [&rng](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DeterministicFading>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, RayleighFading>) {
          return sample_exponential(rng);
        } else if constexpr (std::is_same_v<T, NakagamiFading>) {
          long k = 0;
          if (near_integer(f.m, k)) {
            double sum = 0.0;
            for (long i = 0; i < k; ++i) sum += sample_exponential(rng);
            return sum / static_cast<double>(k);
          }
          return sample_gamma(f.m, rng) / f.m;
        } else if constexpr (std::is_same_v<T, LogNormalFading>) {
          const double s = f.sigma_ln();
          return std::exp(s * sample_normal(rng) - 0.5 * s * s);
        }
      },
      fading);
}

double one_minus_laplace(const FadingModel& fading, double s) {
  if (s < 0.0) throw std::domain_error("transform argument must be >= 0");
  return std::visit(
      [s](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DeterministicFading>) {
          return -std::expm1(-s);
        } else if constexpr (std::is_same_v<T, RayleighFading>) {
          return s / (1.0 + s);
        } else if constexpr (std::is_same_v<T, NakagamiFading>) {
          return -std::expm1(-f.m * std::log1p(s / f.m));
        } else if constexpr (std::is_same_v<T, LogNormalFading>) {
          const double sig = f.sigma_ln();
          const auto& rule = hermite();
          const double kSqrt2 = 1.4142135623730951;
          const double kInvSqrtPi = 0.5641895835477563;
          double acc = 0.0;
          for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            const double h = std::exp(sig * kSqrt2 * rule.nodes[i] -
                                      0.5 * sig * sig);
            acc += rule.weights[i] * -std::expm1(-s * h);
          }
          return acc * kInvSqrtPi;
        }
      },
      fading);
}

double tail_probability(const FadingModel& fading, double x) {
  if (x <= 0.0) return 1.0;
  return std::visit(
      [x](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DeterministicFading>) {
          return x <= 1.0 ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, RayleighFading>) {
          return std::exp(-x);
        } else if constexpr (std::is_same_v<T, NakagamiFading>) {
          return gamma_q(f.m, f.m * x);
        } else if constexpr (std::is_same_v<T, LogNormalFading>) {
          const double sig = f.sigma_ln();
          const double z = (std::log(x) + 0.5 * sig * sig) / sig;
          return 0.5 * std::erfc(z / 1.4142135623730951);
        }
      },
      fading);
}

}  // namespace aselab
