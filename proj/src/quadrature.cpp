#include "aselab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace aselab {

namespace {

// 15-point Kronrod nodes/weights on [-1,1] with the embedded 7-point Gauss
// rule (QUADPACK dqk15 constants). Nodes are interior, so endpoint
// singularities are never evaluated.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEval {
  double integral;
  double error;
};

// One GK15 evaluation of g over [lo, hi]. Throws IntegrandError on NaN;
// non-finite g values make the panel integral infinite, which callers treat
// as divergence evidence.
template <class F>
PanelEval gk15(const F& g, double lo, double hi, long& evals) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = g(c - h * kXgk[i]);
    fv[14 - i] = g(c + h * kXgk[i]);
  }
  fv[7] = g(c);
  evals += 15;
  for (int i = 0; i < 15; ++i) {
    if (std::isnan(fv[i])) {
      const double x = i < 7 ? c - h * kXgk[i] : (i == 7 ? c : c + h * kXgk[14 - i]);
      throw IntegrandError("integrand returned NaN", x);
    }
  }
  double resk = 0.0;
  for (int i = 0; i < 7; ++i) resk += kWgk[i] * (fv[i] + fv[14 - i]);
  resk += kWgk[7] * fv[7];
  double resg = 0.0;
  for (int i = 0; i < 4; ++i) {
    const int j = 2 * i + 1;
    if (j == 7)
      resg += kWg[i] * fv[7];
    else
      resg += kWg[i] * (fv[j] + fv[14 - j]);
  }
  resk *= h;
  resg *= h;
  return {resk, std::fabs(resk - resg)};
}

struct Panel {
  double lo, hi;
  double integral;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

// Adaptive refinement over initial panel edges; g must be defined on the
// open interval.
template <class F>
QuadratureResult adapt(const F& g, std::vector<double> edges,
                       const QuadOptions& opts) {
  QuadratureResult res;
  std::priority_queue<Panel> heap;
  double total = 0.0, err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto pe = gk15(g, edges[i], edges[i + 1], res.evaluations);
    total += pe.integral;
    err += pe.error;
    heap.push({edges[i], edges[i + 1], pe.integral, pe.error});
  }
  int panels = static_cast<int>(edges.size()) - 1;
  const double tiny = std::numeric_limits<double>::min();
  auto good_enough = [&] {
    return err <= opts.rel_tol * std::max(std::fabs(total), tiny);
  };
  while (!good_enough() && panels < opts.max_panels && !heap.empty()) {
    Panel worst = heap.top();
    heap.pop();
    if (!std::isfinite(worst.integral) || !std::isfinite(total)) break;
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi) continue;  // interval exhausted
    auto left = gk15(g, worst.lo, mid, res.evaluations);
    auto right = gk15(g, mid, worst.hi, res.evaluations);
    total += left.integral + right.integral - worst.integral;
    err += left.error + right.error - worst.error;
    heap.push({worst.lo, mid, left.integral, left.error});
    heap.push({mid, worst.hi, right.integral, right.error});
    ++panels;
  }
  res.value = total;
  res.abs_error_estimate = err;
  if (!std::isfinite(total)) {
    res.status = QuadStatus::diverged;
  } else if (good_enough()) {
    res.status = QuadStatus::converged;
  } else {
    res.status = QuadStatus::inconclusive;
  }
  return res;
}

// Dyadic tail-window scan. Returns true when the tail gives divergence
// evidence: >= 8 consecutive windows whose partial integrals fail to decay
// geometrically (ratio >= 0.9), or grow without bound.
bool tail_diverges(const Integrand& f, double a, double rel_tol, long& evals) {
  constexpr double kDecayRatio = 0.9;
  constexpr int kBadRun = 8;
  int k = 0;
  while (std::ldexp(1.0, k) < std::max(a, 1.0)) ++k;
  double prev = -1.0;
  double accum = 0.0;
  int bad = 0;
  int negligible = 0;
  for (; k < 64; ++k) {
    const double lo = std::max(a, std::ldexp(1.0, k));
    const double hi = std::ldexp(1.0, k + 1);
    if (hi <= lo) continue;
    auto pe = gk15(f, lo, hi, evals);
    const double w = pe.integral;
    if (!std::isfinite(w)) {
      if (++bad >= kBadRun) return true;
      prev = std::numeric_limits<double>::infinity();
      continue;
    }
    accum += w;
    if (prev >= 0.0 && prev > 0.0 && w >= kDecayRatio * prev) {
      if (++bad >= kBadRun) return true;
    } else {
      bad = 0;
    }
    if (std::fabs(w) <= std::max(1e-300, 0.1 * rel_tol * std::fabs(accum))) {
      if (++negligible >= 3) return false;
    } else {
      negligible = 0;
    }
    prev = w;
  }
  return false;
}

void check_tol(double tol) {
  if (!(tol > 1e-14 && tol < 1e-2))
    throw std::invalid_argument("quadrature tolerance must lie in (1e-14, 1e-2)");
}

}  // namespace

QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         double tol) {
  QuadOptions opts;
  opts.rel_tol = tol;
  return integrate_semi_infinite(f, a, opts);
}

QuadratureResult integrate_semi_infinite(const Integrand& f, double a,
                                         const QuadOptions& opts) {
  check_tol(opts.rel_tol);
  long scan_evals = 0;
  if (opts.detect_divergence && tail_diverges(f, a, opts.rel_tol, scan_evals)) {
    QuadratureResult res;
    res.status = QuadStatus::diverged;
    res.value = std::numeric_limits<double>::infinity();
    res.abs_error_estimate = std::numeric_limits<double>::infinity();
    res.evaluations = scan_evals;
    return res;
  }

  // r = a + u/(1-u), dr = du/(1-u)^2 maps [a, inf) onto [0, 1).
  auto g = [&](double u) {
    const double om = 1.0 - u;
    const double r = a + u / om;
    return f(r) / (om * om);
  };
  std::vector<double> edges;
  edges.push_back(0.0);
  for (double b : opts.breakpoints) {
    if (b > a && std::isfinite(b)) edges.push_back((b - a) / (1.0 + b - a));
  }
  // A mild initial partition keeps the first refinement steps from chasing
  // one giant panel.
  edges.push_back(0.5);
  edges.push_back(0.9);
  edges.push_back(0.99);
  edges.push_back(1.0);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  auto res = adapt(g, std::move(edges), opts);
  res.evaluations += scan_evals;
  return res;
}

QuadratureResult integrate_finite(const Integrand& f, double a, double b,
                                  const QuadOptions& opts) {
  check_tol(opts.rel_tol);
  std::vector<double> edges{a};
  for (double bp : opts.breakpoints)
    if (bp > a && bp < b) edges.push_back(bp);
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return adapt(f, std::move(edges), opts);
}

QuadratureResult integrate_double(const Integrand2D& f, double tol) {
  QuadOptions outer;
  outer.rel_tol = tol;
  QuadOptions inner;
  inner.rel_tol = std::max(tol * 0.1, 2e-14);
  inner.detect_divergence = false;
  return integrate_double(f, outer, inner);
}

QuadratureResult integrate_double(const Integrand2D& f,
                                  const QuadOptions& outer,
                                  const QuadOptions& inner) {
  long inner_evals = 0;
  bool inner_bad = false;
  auto outer_integrand = [&](double t) {
    auto r = integrate_semi_infinite([&](double x) { return f(x, t); }, 0.0,
                                     inner);
    inner_evals += r.evaluations;
    if (r.status == QuadStatus::diverged) {
      inner_bad = true;
      return std::numeric_limits<double>::infinity();
    }
    return r.value;
  };
  auto res = integrate_semi_infinite(outer_integrand, 0.0, outer);
  res.evaluations += inner_evals;
  if (inner_bad) res.status = QuadStatus::diverged;
  return res;
}

}  // namespace aselab
