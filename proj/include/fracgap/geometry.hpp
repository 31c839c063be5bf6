#pragma once

// Domains, their two characteristic diameters, and the unit-diameter rescaling.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "fracgap/error.hpp"
#include "fracgap/potential.hpp"

namespace fracgap {

/// The fractional order alpha in (0, 2].
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
      std::ostringstream os;
      os << "alpha must lie in (0,2], got " << alpha;
      throw DomainError(os.str());
    }
  }
  double value() const { return alpha_; }
  double half() const { return 0.5 * alpha_; }
  bool is_laplacian() const { return alpha_ == 2.0; }

 private:
  double alpha_;
};

/// prod_j (0, L_j), n = lengths.size() in {1, 2, 3}.
struct Box {
  std::vector<double> lengths;

  std::size_t dim() const { return lengths.size(); }
  double max_length() const { return *std::max_element(lengths.begin(), lengths.end()); }
  double min_length() const { return *std::min_element(lengths.begin(), lengths.end()); }
};

/// {x^2/a^2 + y^2/b^2 < 1}, centred at the origin, a >= b > 0.
struct Ellipse2D {
  double semi_axis_major = 1.0;
  double semi_axis_minor = 1.0;
};

using Domain = std::variant<Box, Ellipse2D>;

struct Diameters {
  double D = 0.0;  ///< diameter of the closure
  double d = 0.0;  ///< diameter of the largest inscribed ball
};

inline void validate(const Domain& domain) {
  if (const auto* b = std::get_if<Box>(&domain)) {
    if (b->lengths.empty() || b->lengths.size() > 3) throw DomainError("box: dimension must be 1, 2 or 3");
    for (double l : b->lengths)
      if (!(l > 0.0) || !std::isfinite(l)) throw DomainError("box: lengths must be finite and > 0");
  } else {
    const auto& e = std::get<Ellipse2D>(domain);
    if (!(e.semi_axis_minor > 0.0) || !(e.semi_axis_major >= e.semi_axis_minor))
      throw DomainError("ellipse: requires a >= b > 0");
  }
}

inline std::size_t dimension(const Domain& domain) {
  if (const auto* b = std::get_if<Box>(&domain)) return b->dim();
  return 2;
}

inline Diameters diameters(const Domain& domain) {
  validate(domain);
  if (const auto* b = std::get_if<Box>(&domain)) {
    const double sq = std::accumulate(b->lengths.begin(), b->lengths.end(), 0.0,
                                      [](double s, double l) { return s + l * l; });
    return {std::sqrt(sq), b->min_length()};
  }
  const auto& e = std::get<Ellipse2D>(domain);
  return {2.0 * e.semi_axis_major, 2.0 * e.semi_axis_minor};
}

inline Domain dilate_domain(const Domain& domain, double factor) {
  if (const auto* b = std::get_if<Box>(&domain)) {
    Box r = *b;
    for (double& l : r.lengths) l *= factor;
    return r;
  }
  const auto& e = std::get<Ellipse2D>(domain);
  return Ellipse2D{e.semi_axis_major * factor, e.semi_axis_minor * factor};
}

struct RescaledProblem {
  Domain domain;
  Potential potential;
  double scale = 1.0;  ///< the original diameter D
};

/// Maps (Omega, V) to (Omega / D, D^alpha V(D .)), so the returned domain has diameter 1.
inline RescaledProblem rescale_to_unit_diameter(const Domain& domain, const Potential& potential,
                                                FractionalOrder alpha) {
  const double D = diameters(domain).D;
  return {dilate_domain(domain, 1.0 / D), dilate(potential, D, alpha.value()), D};
}

inline std::string describe(const Domain& domain) {
  std::ostringstream os;
  if (const auto* b = std::get_if<Box>(&domain)) {
    os << "box[";
    for (std::size_t j = 0; j < b->lengths.size(); ++j) os << (j ? "," : "") << b->lengths[j];
    os << "]";
  } else {
    const auto& e = std::get<Ellipse2D>(domain);
    os << "ellipse(" << e.semi_axis_major << "," << e.semi_axis_minor << ")";
  }
  return os.str();
}

}  // namespace fracgap
