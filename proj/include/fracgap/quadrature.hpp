#pragma once

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fracgap/error.hpp"

namespace fracgap::quad {

/// Nodes and weights of a quadrature rule.
struct Rule {
  std::vector<double> x;
  std::vector<double> w;

  std::size_t size() const { return x.size(); }
  void append(double node, double weight) {
    x.push_back(node);
    w.push_back(weight);
  }
};

namespace detail {

inline Rule compute_gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = std::numbers::pi;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    // one more derivative evaluation at the converged root
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = r.w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace detail

/// n-point Gauss-Legendre rule on [-1, 1]; cached, thread-safe.
inline const Rule& gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be >= 1");
  if (n == 1) {
    static const Rule one{{0.0}, {2.0}};
    return one;
  }
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<Rule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<Rule>(detail::compute_gauss_legendre(n));
  return *slot;
}

/// Appends an n-point Gauss-Legendre panel on [a, b].
inline void append_panel(Rule& out, double a, double b, int n) {
  const Rule& g = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  for (std::size_t i = 0; i < g.size(); ++i) out.append(mid + half * g.x[i], half * g.w[i]);
}

/// Composite rule on [a, b] split at the given interior breakpoints, n nodes per piece.
inline Rule piecewise_gauss(double a, double b, const std::vector<double>& breaks, int n) {
  Rule r;
  double left = a;
  for (double p : breaks) {
    if (p <= left || p >= b) continue;
    append_panel(r, left, p, n);
    left = p;
  }
  append_panel(r, left, b, n);
  return r;
}

/// Rule on [0, K] for integrands of the form k^beta f(k) with smooth f: geometric grading
/// towards 0 inside the first panel, then uniform panels of width h.
inline Rule graded_half_line(double K, double h, int nodes_per_panel, int grading_levels) {
  Rule r;
  const double first = std::min(h, K);
  double hi = first;
  for (int level = 0; level < grading_levels; ++level) {
    append_panel(r, 0.5 * hi, hi, nodes_per_panel);
    hi *= 0.5;
  }
  append_panel(r, 0.0, hi, nodes_per_panel);
  const int panels = static_cast<int>(std::ceil((K - first) / h - 1e-12));
  for (int p = 0; p < panels; ++p) {
    const double a = first + p * h;
    append_panel(r, a, std::min(K, a + h), nodes_per_panel);
  }
  return r;
}

/// Adaptive Gauss-Kronrod (7/15) on a finite interval.
template <class F>
double adaptive(F f, double a, double b, double tol = 1e-12, unsigned max_depth = 30) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, max_depth, tol, &err);
  return v;
}

}  // namespace fracgap::quad
