#pragma once

#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracgap/error.hpp"

namespace fracgap {

/// Free-form key/value description of a discretization or configuration.
using Metadata = std::map<std::string, std::string>;

/// Lossless decimal rendering (17 significant digits).
inline std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class BoundName { ConjI_local, ConjII_dirichlet, Unified_lgap765, WholeSpace_bdw876, Alpha2_gap2loc };

inline std::string to_string(BoundName name) {
  switch (name) {
    case BoundName::ConjI_local: return "ConjI_local";
    case BoundName::ConjII_dirichlet: return "ConjII_dirichlet";
    case BoundName::Unified_lgap765: return "Unified_lgap765";
    case BoundName::WholeSpace_bdw876: return "WholeSpace_bdw876";
    case BoundName::Alpha2_gap2loc: return "Alpha2_gap2loc";
  }
  return "unknown";
}

struct BoundRecord {
  BoundName name;
  double value = 0.0;
  std::string inputs;  ///< echo of the quantities the bound was evaluated at
};

struct BoundMargin {
  BoundRecord bound;
  double margin = 0.0;  ///< delta - bound value
};

/// Ordered eigenvalues with basis-coefficient eigenvectors.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  std::string basis;
  Metadata discretization;
};

struct GapReport {
  double E1 = 0.0;
  double E2 = 0.0;
  double delta = 0.0;
  int multiplicity1 = 1;  ///< number of computed eigenvalues in the E1 level
  int multiplicity2 = 1;  ///< number of computed eigenvalues in the E2 level
  std::vector<BoundMargin> lower_bounds;
  Metadata config_echo;

  bool degenerate() const { return multiplicity1 > 1 || multiplicity2 > 1; }
  /// A negative margin against any attached bound.
  bool finding() const {
    for (const auto& b : lower_bounds)
      if (b.margin < 0.0) return true;
    return false;
  }
  const BoundMargin* bound(BoundName name) const {
    for (const auto& b : lower_bounds)
      if (b.bound.name == name) return &b;
    return nullptr;
  }
};

struct GapOptions {
  double distinct_rel_tol = 1e-9;  ///< levels closer than this (relative) are one level
  bool positive_only = false;      ///< skip eigenvalues <= zero_tol (periodic zero mode)
  double zero_tol = 1e-10;
};

/// Fundamental gap between the two smallest distinct levels of an ascending list.
inline GapReport gap_from_eigenvalues(const Eigen::VectorXd& ev, const GapOptions& opts = {}) {
  Eigen::Index i = 0;
  if (opts.positive_only)
    while (i < ev.size() && ev(i) <= opts.zero_tol) ++i;
  if (i >= ev.size()) throw SolverError("gap: no eigenvalues in range");

  auto same_level = [&](double a, double b) {
    return std::fabs(b - a) <= opts.distinct_rel_tol * std::max({std::fabs(a), std::fabs(b), 1e-300});
  };
  GapReport r;
  r.E1 = ev(i);
  Eigen::Index j = i + 1;
  while (j < ev.size() && same_level(r.E1, ev(j))) ++j;
  r.multiplicity1 = static_cast<int>(j - i);
  if (j >= ev.size()) throw SolverError("gap: second distinct level not resolved by the computed eigenvalues");
  r.E2 = ev(j);
  Eigen::Index l = j + 1;
  while (l < ev.size() && same_level(r.E2, ev(l))) ++l;
  r.multiplicity2 = static_cast<int>(l - j);
  r.delta = r.E2 - r.E1;
  return r;
}

inline void attach_bounds(GapReport& report, const std::vector<BoundRecord>& bounds) {
  for (const auto& b : bounds) report.lower_bounds.push_back({b, report.delta - b.value});
}

}  // namespace fracgap
