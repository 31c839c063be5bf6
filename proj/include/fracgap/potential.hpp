#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fracgap/error.hpp"

namespace fracgap {

struct ZeroPotential {};

/// V(x) = sum_j c_j (x_j - center_j)^2. An empty center means the origin.
struct QuadraticPotential {
  std::vector<double> coefficients;
  std::vector<double> center;

  double center_at(std::size_t j) const { return j < center.size() ? center[j] : 0.0; }
};

enum class TrigKind { Cos, Sin };

/// amplitude * cos(frequency . x) or amplitude * sin(frequency . x)
struct TrigTerm {
  double amplitude = 0.0;
  TrigKind kind = TrigKind::Cos;
  std::vector<double> frequency;

  double phase(std::span<const double> x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < frequency.size() && j < x.size(); ++j) s += frequency[j] * x[j];
    return s;
  }
  double evaluate(std::span<const double> x) const {
    const double p = phase(x);
    return amplitude * (kind == TrigKind::Cos ? std::cos(p) : std::sin(p));
  }
};

struct QuadraticTrigPotential {
  QuadraticPotential quadratic;
  std::vector<TrigTerm> terms;
};

/// 0 inside the box [lower, lower + lengths), height outside.
struct WellPotential {
  std::vector<double> lower;
  std::vector<double> lengths;
  double height = 0.0;

  bool inside(std::span<const double> x) const {
    for (std::size_t j = 0; j < lengths.size(); ++j) {
      const double lo = j < lower.size() ? lower[j] : 0.0;
      if (j >= x.size() || x[j] < lo || x[j] > lo + lengths[j]) return false;
    }
    return true;
  }
};

/// Samples on a uniform tensor grid spanning [lower, upper] per axis, row-major with the
/// last axis fastest. Evaluated by multilinear interpolation, clamped outside the grid.
struct GridPotential {
  std::vector<int> shape;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> values;
};

using Potential =
    std::variant<ZeroPotential, QuadraticPotential, QuadraticTrigPotential, WellPotential, GridPotential>;

namespace detail {

inline double quadratic_value(const QuadraticPotential& q, std::span<const double> x) {
  double v = 0.0;
  for (std::size_t j = 0; j < q.coefficients.size() && j < x.size(); ++j) {
    const double t = x[j] - q.center_at(j);
    v += q.coefficients[j] * t * t;
  }
  return v;
}

inline double grid_value(const GridPotential& g, std::span<const double> x) {
  const std::size_t n = g.shape.size();
  std::vector<int> base(n);
  std::vector<double> frac(n);
  for (std::size_t j = 0; j < n; ++j) {
    const int m = g.shape[j];
    if (m == 1) {
      base[j] = 0;
      frac[j] = 0.0;
      continue;
    }
    const double t = std::clamp((x[j] - g.lower[j]) / (g.upper[j] - g.lower[j]), 0.0, 1.0) * (m - 1);
    const int i = std::min(static_cast<int>(std::floor(t)), m - 2);
    base[j] = i;
    frac[j] = t - i;
  }
  double v = 0.0;
  for (unsigned corner = 0; corner < (1u << n); ++corner) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const int bit = (corner >> j) & 1u;
      const int idx = std::min(base[j] + bit, g.shape[j] - 1);
      w *= bit ? frac[j] : 1.0 - frac[j];
      flat = flat * static_cast<std::size_t>(g.shape[j]) + static_cast<std::size_t>(idx);
    }
    if (w != 0.0) v += w * g.values[flat];
  }
  return v;
}

}  // namespace detail

inline void validate(const Potential& v) {
  if (const auto* w = std::get_if<WellPotential>(&v)) {
    if (!(w->height > 0.0)) throw DomainError("well potential: height V0 must be > 0");
    for (double l : w->lengths)
      if (!(l > 0.0)) throw DomainError("well potential: inner lengths must be > 0");
  }
  if (const auto* g = std::get_if<GridPotential>(&v)) {
    std::size_t count = 1;
    for (int m : g->shape) {
      if (m < 1) throw DomainError("grid potential: shape entries must be >= 1");
      count *= static_cast<std::size_t>(m);
    }
    if (g->lower.size() != g->shape.size() || g->upper.size() != g->shape.size() || count != g->values.size())
      throw DomainError("grid potential: shape, bounds and value count are inconsistent");
  }
}

inline double evaluate(const Potential& v, std::span<const double> x) {
  struct Visitor {
    std::span<const double> x;
    double operator()(const ZeroPotential&) const { return 0.0; }
    double operator()(const QuadraticPotential& q) const { return detail::quadratic_value(q, x); }
    double operator()(const QuadraticTrigPotential& q) const {
      double s = detail::quadratic_value(q.quadratic, x);
      for (const auto& t : q.terms) s += t.evaluate(x);
      return s;
    }
    double operator()(const WellPotential& w) const { return w.inside(x) ? 0.0 : w.height; }
    double operator()(const GridPotential& g) const { return detail::grid_value(g, x); }
  };
  return std::visit(Visitor{x}, v);
}

inline bool is_zero(const Potential& v) {
  if (std::holds_alternative<ZeroPotential>(v)) return true;
  if (const auto* q = std::get_if<QuadraticPotential>(&v))
    return std::all_of(q->coefficients.begin(), q->coefficients.end(), [](double c) { return c == 0.0; });
  return false;
}

inline std::string kind_name(const Potential& v) {
  static constexpr const char* names[] = {"zero", "quadratic", "quadratic_trig", "well", "grid"};
  return names[v.index()];
}

/// The dilated potential x~ -> D^alpha V(D x~).
inline Potential dilate(const Potential& v, double D, double alpha) {
  const double energy = std::pow(D, alpha);
  struct Visitor {
    double D, energy;
    Potential operator()(const ZeroPotential& z) const { return z; }
    QuadraticPotential quad(const QuadraticPotential& q) const {
      QuadraticPotential r = q;
      for (double& c : r.coefficients) c *= energy * D * D;
      for (double& c : r.center) c /= D;
      return r;
    }
    Potential operator()(const QuadraticPotential& q) const { return quad(q); }
    Potential operator()(const QuadraticTrigPotential& q) const {
      QuadraticTrigPotential r{quad(q.quadratic), q.terms};
      for (auto& t : r.terms) {
        t.amplitude *= energy;
        for (double& w : t.frequency) w *= D;
      }
      return r;
    }
    Potential operator()(const WellPotential& w) const {
      WellPotential r = w;
      r.height *= energy;
      for (double& l : r.lower) l /= D;
      for (double& l : r.lengths) l /= D;
      return r;
    }
    Potential operator()(const GridPotential& g) const {
      GridPotential r = g;
      for (double& l : r.lower) l /= D;
      for (double& u : r.upper) u /= D;
      for (double& s : r.values) s *= energy;
      return r;
    }
  };
  return std::visit(Visitor{D, energy}, v);
}

/// Points in (a, b) along `axis` where the potential is not smooth; quadrature splits there.
inline std::vector<double> breakpoints(const Potential& v, std::size_t axis, double a, double b) {
  std::vector<double> pts;
  auto add = [&](double p) {
    if (p > a && p < b) pts.push_back(p);
  };
  if (const auto* w = std::get_if<WellPotential>(&v)) {
    if (axis < w->lengths.size()) {
      const double lo = axis < w->lower.size() ? w->lower[axis] : 0.0;
      add(lo);
      add(lo + w->lengths[axis]);
    }
  } else if (const auto* g = std::get_if<GridPotential>(&v)) {
    if (axis < g->shape.size()) {
      const int m = g->shape[axis];
      for (int i = 0; i < m; ++i) add(g->lower[axis] + (g->upper[axis] - g->lower[axis]) * i / std::max(1, m - 1));
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace fracgap
