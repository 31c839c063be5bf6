#pragma once

// Conjectured lower bounds for the fundamental gap.

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "fracgap/error.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/spectrum.hpp"

namespace fracgap {

/// alpha pi^alpha / (n+2)^{1-alpha/2} * d^{2-alpha} / D^2, valid for every n.
inline double unified_gap_bound(int n, double alpha, const Diameters& diam) {
  const double pi = std::numbers::pi;
  return alpha * std::pow(pi, alpha) / std::pow(n + 2.0, 1.0 - 0.5 * alpha) * std::pow(diam.d, 2.0 - alpha) /
         (diam.D * diam.D);
}

/// Local-operator bound: the sharp 1D value (2^alpha - 1) pi^alpha / D^alpha, else the unified form.
inline double local_gap_lower_bound(int n, double alpha, const Diameters& diam) {
  if (n == 1) return (std::pow(2.0, alpha) - 1.0) * std::pow(std::numbers::pi / diam.D, alpha);
  return unified_gap_bound(n, alpha, diam);
}

inline double classical_gap_lower_bound(int n, double alpha, const Diameters& diam) {
  return unified_gap_bound(n, alpha, diam);
}

/// 3 pi^2 / D^2, the alpha = 2 gap.
inline double alpha2_gap_bound(const Diameters& diam) {
  return 3.0 * std::numbers::pi * std::numbers::pi / (diam.D * diam.D);
}

/// Whole-space bound 2^{4a/(2+a)} a/(2+a) gamma1 / gamma2^{(2-a)/(2+a)}, 0 < gamma1 <= gamma2.
inline double wholespace_gap_lower_bound(double alpha, double gamma1, double gamma2) {
  if (!(gamma1 > 0.0) || gamma2 < gamma1) throw DomainError("whole-space bound: requires 0 < gamma1 <= gamma2");
  const double s = 2.0 + alpha;
  return std::pow(2.0, 4.0 * alpha / s) * alpha / s * gamma1 / std::pow(gamma2, (2.0 - alpha) / s);
}

enum class ProblemKind { Local, Classical, WholeSpace, Periodic };

struct BoundInputs {
  ProblemKind kind = ProblemKind::Local;
  int n = 1;
  double alpha = 1.0;
  Diameters diam{1.0, 1.0};
  double gamma1 = 1.0;
  double gamma2 = 1.0;
};

namespace detail {

inline std::string echo_geometry(const BoundInputs& in) {
  std::ostringstream os;
  os.precision(17);
  os << "n=" << in.n << ";alpha=" << in.alpha << ";D=" << in.diam.D << ";d=" << in.diam.d;
  return os.str();
}

}  // namespace detail

/// All bounds that apply to a problem kind. For the classical operator the sharp 1D
/// local formula is listed as well, since comparing against it is part of the study.
inline std::vector<BoundRecord> evaluate_bounds(const BoundInputs& in) {
  std::vector<BoundRecord> out;
  switch (in.kind) {
    case ProblemKind::Local: {
      const std::string e = detail::echo_geometry(in);
      out.push_back({BoundName::ConjI_local, local_gap_lower_bound(in.n, in.alpha, in.diam), e});
      out.push_back({BoundName::Unified_lgap765, unified_gap_bound(in.n, in.alpha, in.diam), e});
      if (in.alpha == 2.0) out.push_back({BoundName::Alpha2_gap2loc, alpha2_gap_bound(in.diam), e});
      break;
    }
    case ProblemKind::Classical: {
      const std::string e = detail::echo_geometry(in);
      out.push_back({BoundName::ConjII_dirichlet, classical_gap_lower_bound(in.n, in.alpha, in.diam), e});
      if (in.n == 1) out.push_back({BoundName::ConjI_local, local_gap_lower_bound(1, in.alpha, in.diam), e});
      if (in.alpha == 2.0) out.push_back({BoundName::Alpha2_gap2loc, alpha2_gap_bound(in.diam), e});
      break;
    }
    case ProblemKind::WholeSpace: {
      std::ostringstream os;
      os.precision(17);
      os << "alpha=" << in.alpha << ";gamma1=" << in.gamma1 << ";gamma2=" << in.gamma2;
      out.push_back({BoundName::WholeSpace_bdw876, wholespace_gap_lower_bound(in.alpha, in.gamma1, in.gamma2), os.str()});
      break;
    }
    case ProblemKind::Periodic:
      break;
  }
  return out;
}

}  // namespace fracgap
