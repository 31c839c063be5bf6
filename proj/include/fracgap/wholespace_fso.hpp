#pragma once

// Whole-space fractional Schrodinger operator with V = sum_j gamma_j^2 x_j^2 (+ trig terms),
// solved in Fourier space as -sum_j gamma_j^2 d^2/dk_j^2 + |k|^alpha on a truncated k-grid.
// Also the finite-well study, which runs the classical box solver on an enclosure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fracgap/bounds.hpp"
#include "fracgap/classical_fso.hpp"
#include "fracgap/eigensolve.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/local_fso.hpp"
#include "fracgap/potential.hpp"
#include "fracgap/spectrum.hpp"

namespace fracgap {

struct HarmonicSpec {
  std::vector<double> gammas;

  double gamma() const { return *std::min_element(gammas.begin(), gammas.end()); }
  double eta() const { return *std::max_element(gammas.begin(), gammas.end()) / gamma(); }
  void validate() const {
    if (gammas.empty() || gammas.size() > 2) throw DomainError("harmonic: 1 or 2 gammas required");
    for (double g : gammas)
      if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("harmonic: gammas must be finite and > 0");
  }
};

/// Truncated k-grid: nodes i*h_j, |i| < R_j / h_j, Dirichlet at |k_j| = R_j.
/// Empty radius/spacing select defaults; a single entry applies to every axis.
struct KGridSpec {
  std::vector<double> radius;
  std::vector<double> spacing;
  int points_1d = 256;  ///< default R_j / h_j in 1D
  int points_2d = 96;   ///< default R_j / h_j in 2D
  double radius_factor = 12.0;
  int order = 4;        ///< finite-difference order in k (2 or 4)
  int eigen_count = 4;
};

/// Lower and upper Hessian bounds gamma1 <= gamma2 with gamma^2 I <= D^2 V / 2, from the
/// quadratic part and a Gershgorin estimate of the trig terms.
inline std::pair<double, double> hessian_bounds(const QuadraticTrigPotential& v, std::size_t n) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = j < v.quadratic.coefficients.size() ? v.quadratic.coefficients[j] : 0.0;
    double radius = 0.0;
    for (const auto& t : v.terms) {
      const double wj = j < t.frequency.size() ? t.frequency[j] : 0.0;
      double row = 0.0;
      for (std::size_t i = 0; i < n; ++i) row += std::fabs(wj * (i < t.frequency.size() ? t.frequency[i] : 0.0));
      radius += 0.5 * std::fabs(t.amplitude) * row;
    }
    lo = std::min(lo, c - radius);
    hi = std::max(hi, c + radius);
  }
  if (!(lo > 0.0)) throw DomainError("hessian_bounds: potential is not uniformly convex");
  return {std::sqrt(lo), std::sqrt(hi)};
}

namespace detail {

// Largest h <= target such that every |w| in ws is an integer multiple of h.
inline double commensurate_spacing(double target, const std::vector<double>& ws) {
  double g = 0.0;
  for (double w : ws) {
    w = std::fabs(w);
    if (w == 0.0) continue;
    if (g == 0.0) {
      g = w;
      continue;
    }
    // real gcd by Euclid with a relative tolerance
    double a = std::max(g, w), b = std::min(g, w);
    while (b > 1e-9 * std::max(g, w)) {
      const double r = std::fmod(a, b);
      a = b;
      b = (r > b - 1e-9 * std::max(g, w)) ? 0.0 : r;
    }
    g = a;
  }
  if (g == 0.0) return target;
  return g / std::ceil(g / target - 1e-12);
}

struct ShiftTerm {
  std::complex<double> plus;   // coefficient of T_{+w}
  std::complex<double> minus;  // coefficient of T_{-w}
  std::vector<double> w;
};


// Analytic continuation of sum over (m,n) != 0 of |(a m, b n)|^{-s} (rectangular Epstein zeta),
// for s in [-2, 0). Chowla-Selberg: the n = 0 row is 2 zeta(s) a^{-s}; Poisson summation in m
// leaves a Bessel-K series that decays like exp(-2 pi p n b / a), so a is taken as the smaller side.
inline double epstein_zeta_rect(double s, double a, double b) {
  const double pi = std::numbers::pi;
  if (a > b) std::swap(a, b);
  if (s == -2.0) return 0.0;  // zeta(-2) = 0 and 1/Gamma(-1) = 0
  const double inv_g = 1.0 / std::tgamma(0.5 * s);
  double z = 2.0 * std::riemann_zeta(s) * std::pow(a, -s);
  // n != 0, p = 0: Gamma((s-1)/2) zeta(s-1) via the functional equation (regular at s = -1)
  z += 2.0 * std::sqrt(pi) * inv_g / a * std::pow(b, 1.0 - s) * std::pow(pi, s - 1.5) * std::tgamma(1.0 - 0.5 * s) *
       std::riemann_zeta(2.0 - s);
  const double nu = std::fabs(0.5 * (s - 1.0));
  double series = 0.0;
  for (int n = 1;; ++n) {
    if (2.0 * pi * n * b / a > 700.0) break;
    double row = 0.0;
    for (int q = 1;; ++q) {
      const double x = 2.0 * pi * q * n * b / a;
      if (x > 700.0) break;
      const double t = std::pow(pi * q / (a * b * n), 0.5 * (s - 1.0)) * std::cyl_bessel_k(nu, x);
      row += t;
      if (std::fabs(t) < 1e-18 * std::fabs(row)) break;
    }
    series += row;
    if (std::fabs(row) < 1e-18 * std::fabs(series)) break;
  }
  return z + 8.0 * std::sqrt(pi) * inv_g / a * series;
}
}  // namespace detail

/// Assembled Fourier-space problem in the real reflection basis.
struct FourierProblem {
  Eigen::SparseMatrix<double> matrix;
  std::vector<int> half;        ///< nodes per axis on each side (|i| < half_j)
  std::vector<double> spacing;
  std::vector<double> radius;
  Eigen::SparseMatrix<std::complex<double>> basis;  ///< grid values = basis * real coefficients
  double lower_bound = 0.0;                         ///< every eigenvalue exceeds this
};

/// Builds -sum gamma_j^2 d^2/dk_j^2 + |k|^alpha plus k-shift stencils for the trig terms
/// (cos -> (T_w + T_-w)/2, sin -> (T_w - T_-w)/(2i), with (T_w f)(k) = f(k - w)), then maps it
/// to the real basis {delta_0, (delta_p + delta_-p)/sqrt2, i(delta_p - delta_-p)/sqrt2}, in
/// which it is real symmetric because V is real.
inline FourierProblem assemble_fourier_space_hamiltonian(const HarmonicSpec& harm, FractionalOrder alpha,
                                                         const std::vector<TrigTerm>& trig, const KGridSpec& kg) {
  harm.validate();
  const std::size_t n = harm.gammas.size();
  if (kg.order != 2 && kg.order != 4) throw DomainError("k-grid: order must be 2 or 4");
  const double a = alpha.value();
  FourierProblem fp;
  for (std::size_t j = 0; j < n; ++j) {
    const double R = kg.radius.empty() ? kg.radius_factor * std::pow(harm.gammas[j], 2.0 / (2.0 + a))
                                       : kg.radius[std::min(j, kg.radius.size() - 1)];
    const int pts = n == 1 ? kg.points_1d : kg.points_2d;
    double h = kg.spacing.empty() ? R / pts : kg.spacing[std::min(j, kg.spacing.size() - 1)];
    std::vector<double> ws;
    for (const auto& t : trig) ws.push_back(j < t.frequency.size() ? t.frequency[j] : 0.0);
    const double hc = detail::commensurate_spacing(h, ws);
    if (!kg.spacing.empty() && std::fabs(hc - h) > 1e-12 * h) {
      std::ostringstream os;
      os << "k-grid: spacing " << h << " on axis " << j << " is not commensurate with the trig frequencies";
      throw DomainError(os.str());
    }
    h = hc;
    if (!(R > 0.0) || !(h > 0.0)) throw DomainError("k-grid: radius and spacing must be > 0");
    const int half = static_cast<int>(std::ceil(R / h - 1e-9));
    if (half < 3) throw ResolutionError("k-grid: fewer than three nodes per half axis");
    fp.half.push_back(half);
    fp.spacing.push_back(h);
    fp.radius.push_back(half * h);
  }

  std::vector<int> side(n);
  int total = 1;
  for (std::size_t j = 0; j < n; ++j) {
    side[j] = 2 * fp.half[j] - 1;
    total *= side[j];
  }
  auto flat_of = [&](const std::vector<int>& idx) -> int {
    int f = 0;
    for (std::size_t j = 0; j < n; ++j) {
      const int s = idx[j] + fp.half[j] - 1;
      if (s < 0 || s >= side[j]) return -1;
      f = f * side[j] + s;
    }
    return f;
  };
  auto idx_of = [&](int f) {
    std::vector<int> idx(n);
    for (std::size_t j = n; j-- > 0;) {
      idx[j] = f % side[j] - (fp.half[j] - 1);
      f /= side[j];
    }
    return idx;
  };

  std::vector<detail::ShiftTerm> shifts;
  double trig_norm = 0.0;
  for (const auto& t : trig) {
    trig_norm += std::fabs(t.amplitude);
    if (t.kind == TrigKind::Cos)
      shifts.push_back({0.5 * t.amplitude, 0.5 * t.amplitude, t.frequency});
    else
      shifts.push_back({std::complex<double>(0.0, -0.5 * t.amplitude), std::complex<double>(0.0, 0.5 * t.amplitude),
                        t.frequency});
  }
  std::vector<std::vector<int>> steps;
  for (const auto& s : shifts) {
    std::vector<int> st(n, 0);
    for (std::size_t j = 0; j < n; ++j) {
      const double w = j < s.w.size() ? s.w[j] : 0.0;
      st[j] = static_cast<int>(std::lround(w / fp.spacing[j]));
    }
    steps.push_back(st);
  }

  using C = std::complex<double>;
  std::vector<Eigen::Triplet<C>> trip;
  const double c2[] = {1.0, -2.0, 1.0};
  const double c4[] = {-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0};
  for (int f = 0; f < total; ++f) {
    const auto idx = idx_of(f);
    double k2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) k2 += std::pow(idx[j] * fp.spacing[j], 2);
    double diag = std::pow(k2, 0.5 * a);
    // node weight at the kink of |k|^alpha from the generalized Euler-Maclaurin expansion
    // of the trapezoid sum, sum_i |ih|^alpha f(ih) h = int |k|^alpha f + 2 zeta(-alpha) f(0) h^{1+alpha} + ...
    if (n == 1 && idx[0] == 0) diag = -2.0 * std::riemann_zeta(-a) * std::pow(fp.spacing[0], a);
    // 2D: the same weight is minus the lattice zeta at -alpha
    if (n == 2 && idx[0] == 0 && idx[1] == 0) diag = -detail::epstein_zeta_rect(-a, fp.spacing[0], fp.spacing[1]);
    for (std::size_t j = 0; j < n; ++j) {
      const double g2 = harm.gammas[j] * harm.gammas[j] / (fp.spacing[j] * fp.spacing[j]);
      const int w = kg.order == 2 ? 1 : 2;
      const double* c = kg.order == 2 ? c2 : c4;
      for (int o = -w; o <= w; ++o) {
        if (o == 0) {
          diag -= g2 * c[w];
          continue;
        }
        auto nb = idx;
        nb[j] += o;
        const int q = flat_of(nb);
        if (q >= 0) trip.emplace_back(f, q, -g2 * c[o + w]);
      }
    }
    trip.emplace_back(f, f, diag);
    for (std::size_t t = 0; t < shifts.size(); ++t) {
      // (T_w f)(k) = f(k - w): row k reads column k - w
      auto lo = idx, hi = idx;
      for (std::size_t j = 0; j < n; ++j) {
        lo[j] -= steps[t][j];
        hi[j] += steps[t][j];
      }
      const int ql = flat_of(lo), qh = flat_of(hi);
      if (ql >= 0) trip.emplace_back(f, ql, shifts[t].plus);
      if (qh >= 0) trip.emplace_back(f, qh, shifts[t].minus);
    }
  }
  Eigen::SparseMatrix<C> hc(total, total);
  hc.setFromTriplets(trip.begin(), trip.end());

  // reflection k -> -k reverses the flat index, so pairs are (f, total-1-f)
  const int centre = (total - 1) / 2;
  std::vector<Eigen::Triplet<C>> ut;
  const double r2 = 1.0 / std::sqrt(2.0);
  ut.emplace_back(centre, 0, 1.0);
  for (int f = 0; f < centre; ++f) {
    const int g = total - 1 - f;
    ut.emplace_back(f, 1 + 2 * f, r2);
    ut.emplace_back(g, 1 + 2 * f, r2);
    ut.emplace_back(f, 2 + 2 * f, C(0.0, r2));
    ut.emplace_back(g, 2 + 2 * f, C(0.0, -r2));
  }
  fp.basis.resize(total, total);
  fp.basis.setFromTriplets(ut.begin(), ut.end());
  const Eigen::SparseMatrix<C> hr = fp.basis.adjoint() * hc * fp.basis;
  double imag = 0.0, scale = 0.0;
  std::vector<Eigen::Triplet<double>> rt;
  for (int col = 0; col < hr.outerSize(); ++col)
    for (Eigen::SparseMatrix<C>::InnerIterator it(hr, col); it; ++it) {
      imag = std::max(imag, std::fabs(it.value().imag()));
      scale = std::max(scale, std::fabs(it.value().real()));
      if (it.value().real() != 0.0) rt.emplace_back(static_cast<int>(it.row()), col, it.value().real());
    }
  if (imag > 1e-12 * scale) throw SolverError("fourier-space hamiltonian: real basis left an imaginary part");
  fp.matrix.resize(total, total);
  fp.matrix.setFromTriplets(rt.begin(), rt.end());
  // exact symmetry by construction: average with the transpose
  Eigen::SparseMatrix<double> t = fp.matrix.transpose();
  fp.matrix = (0.5 * (fp.matrix + t)).pruned();
  fp.lower_bound = -trig_norm - 1.0;
  return fp;
}

namespace detail {

// Re-expresses trig terms about the potential centre so the k-space operator has no x-shift:
// cos(w.(y + c)) = cos(w.c) cos(w.y) - sin(w.c) sin(w.y), and similarly for sin.
inline std::vector<TrigTerm> recentred_terms(const QuadraticTrigPotential& v, std::size_t n) {
  std::vector<TrigTerm> out;
  for (const auto& t : v.terms) {
    double phase = 0.0;
    for (std::size_t j = 0; j < n && j < t.frequency.size(); ++j) phase += t.frequency[j] * v.quadratic.center_at(j);
    if (phase == 0.0) {
      out.push_back(t);
      continue;
    }
    const double cp = std::cos(phase), sp = std::sin(phase);
    if (t.kind == TrigKind::Cos) {
      out.push_back({t.amplitude * cp, TrigKind::Cos, t.frequency});
      out.push_back({-t.amplitude * sp, TrigKind::Sin, t.frequency});
    } else {
      out.push_back({t.amplitude * cp, TrigKind::Sin, t.frequency});
      out.push_back({t.amplitude * sp, TrigKind::Cos, t.frequency});
    }
  }
  return out;
}

}  // namespace detail

/// Lowest eigenpairs of the whole-space operator with V = sum gamma_j^2 (x_j - c_j)^2 + trig.
inline SolveResult solve_wholespace_gap(const QuadraticTrigPotential& v, std::size_t n, FractionalOrder alpha,
                                        const KGridSpec& kg = {}) {
  if (n < 1 || n > 2) throw DomainError("whole-space: n must be 1 or 2");
  HarmonicSpec harm;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = j < v.quadratic.coefficients.size() ? v.quadratic.coefficients[j] : 0.0;
    if (!(c > 0.0)) throw DomainError("whole-space: every quadratic coefficient must be > 0");
    harm.gammas.push_back(std::sqrt(c));
  }
  const auto terms = detail::recentred_terms(v, n);
  const FourierProblem fp = assemble_fourier_space_hamiltonian(harm, alpha, terms, kg);

  SparseEigenOptions opts;
  opts.shift = fp.lower_bound;
  const int want = std::min<int>(kg.eigen_count, static_cast<int>(fp.matrix.rows()));
  const EigenDecomposition dec = smallest_eigenpairs(fp.matrix, want, opts);

  SolveResult r;
  double worst = 0.0;
  for (int i = 0; i < want; ++i) {
    const Eigen::VectorXd c = dec.vectors.col(i);
    const double rq = c.dot(fp.matrix * c) / c.squaredNorm();
    worst = std::max(worst, std::fabs(rq - dec.values(i)) / std::max(std::fabs(dec.values(i)), 1e-300));
  }
  if (worst > 1e-8) throw SolverError("whole-space: Rayleigh quotient check failed");

  // mass of the ground state on the outermost grid layer
  const Eigen::VectorXcd grid_values = fp.basis * dec.vectors.col(0).cast<std::complex<double>>();
  double edge = 0.0;
  const double total_mass = grid_values.squaredNorm();
  {
    std::vector<int> side(n);
    for (std::size_t j = 0; j < n; ++j) side[j] = 2 * fp.half[j] - 1;
    for (Eigen::Index f = 0; f < grid_values.size(); ++f) {
      Eigen::Index rest = f;
      bool outer = false;
      for (std::size_t j = n; j-- > 0;) {
        const auto s = rest % side[j];
        rest /= side[j];
        outer = outer || s == 0 || s == side[j] - 1;
      }
      if (outer) edge += std::norm(grid_values(f));
    }
  }
  Metadata meta{{"basis", "k_grid"}, {"order", std::to_string(kg.order)}, {"rayleigh_max_rel", format_real(worst)}};
  for (std::size_t j = 0; j < n; ++j) {
    meta["R_k" + std::to_string(j + 1)] = format_real(fp.radius[j]);
    meta["h_k" + std::to_string(j + 1)] = format_real(fp.spacing[j]);
  }
  meta["edge_mass"] = format_real(edge / total_mass);
  if (edge / total_mass > 1e-6) meta["warning"] = "boundary_truncation";

  r.hamiltonian = Eigen::MatrixXd();
  r.spectrum = Spectrum{dec.values, dec.vectors, "k_grid", std::move(meta)};
  r.report = gap_from_eigenvalues(dec.values);
  const auto [g1, g2] = hessian_bounds(v, n);
  BoundInputs in;
  in.kind = ProblemKind::WholeSpace;
  in.n = static_cast<int>(n);
  in.alpha = alpha.value();
  in.gamma1 = g1;
  in.gamma2 = g2;
  attach_bounds(r.report, evaluate_bounds(in));
  r.report.config_echo = {{"problem", "wholespace"}, {"alpha", format_real(alpha.value())}, {"n", std::to_string(n)}};
  return r;
}

/// Harmonic-only convenience: V = sum gamma_j^2 x_j^2.
inline SolveResult solve_wholespace_gap(const HarmonicSpec& harm, FractionalOrder alpha,
                                        const std::vector<TrigTerm>& trig = {}, const KGridSpec& kg = {}) {
  harm.validate();
  QuadraticTrigPotential v;
  for (double g : harm.gammas) v.quadratic.coefficients.push_back(g * g);
  v.terms = trig;
  return solve_wholespace_gap(v, harm.gammas.size(), alpha, kg);
}

struct WellOptions {
  double enclosure_factor = 4.0;
  std::vector<int> modes_per_dim;  ///< on the enclosure; empty selects 128 (1D) or 24 (2D)
  KQuadrature kq;
};

struct WellSetup {
  Box enclosure;
  WellPotential well;
  std::vector<int> modes_per_dim;
};

inline WellSetup well_setup(const Box& inner, double V0, const WellOptions& opts) {
  validate(Domain{inner});
  if (!(V0 > 0.0)) throw DomainError("well: V0 must be > 0");
  if (opts.enclosure_factor < 4.0) throw DomainError("well: enclosure_factor must be >= 4");
  WellSetup s;
  for (double L : inner.lengths) {
    s.enclosure.lengths.push_back(L * opts.enclosure_factor);
    s.well.lower.push_back(0.5 * (opts.enclosure_factor - 1.0) * L);
    s.well.lengths.push_back(L);
  }
  s.well.height = V0;
  s.modes_per_dim = opts.modes_per_dim;
  if (s.modes_per_dim.empty()) s.modes_per_dim.assign(inner.dim(), inner.dim() == 1 ? 128 : 24);
  return s;
}

/// Classical solves with the finite well for each V0; the stiffness on the enclosure is shared.
inline std::vector<SolveResult> solve_well_series(const Box& inner, const std::vector<double>& V0s,
                                                  FractionalOrder alpha, const WellOptions& opts = {}) {
  if (V0s.empty()) return {};
  WellSetup s = well_setup(inner, V0s.front(), opts);
  const Eigen::MatrixXd stiffness = classical_stiffness(s.enclosure, alpha, s.modes_per_dim, opts.kq);
  const auto modes = tensor_modes(s.modes_per_dim);
  WellPotential unit = s.well;
  unit.height = 1.0;
  Eigen::MatrixXd outside = sine_potential_matrix(s.enclosure, modes, unit);
  symmetrize_checked(outside, 1e-10, "well");

  // boundary layer: points within one inner diameter of the enclosure boundary
  const double Din = diameters(inner).D;
  WellPotential layer;
  bool layer_empty = false;
  for (double L : s.enclosure.lengths) {
    layer.lower.push_back(Din);
    layer.lengths.push_back(L - 2.0 * Din);
    layer_empty = layer_empty || L - 2.0 * Din <= 0.0;
  }
  layer.height = 1.0;
  Eigen::MatrixXd layer_mass;
  if (!layer_empty) layer_mass = sine_potential_matrix(s.enclosure, modes, layer);

  std::vector<SolveResult> out;
  for (double V0 : V0s) {
    if (!(V0 > 0.0)) throw DomainError("well: V0 must be > 0");
    WellPotential w = s.well;
    w.height = V0;
    SolveResult r = classical_result_from(stiffness + V0 * outside, s.enclosure, alpha, Potential{w},
                                          s.modes_per_dim, opts.kq);
    // the gap bounds of the enclosure do not apply to the well; drop them
    r.report.lower_bounds.clear();
    const Eigen::VectorXd c = r.spectrum.eigenvectors.col(0);
    const double mass = layer_empty ? 1.0 : c.dot(layer_mass * c);
    r.spectrum.discretization["boundary_layer_mass"] = format_real(mass);
    if (mass > 1e-4) r.spectrum.discretization["warning"] = "enclosure_too_small";
    r.spectrum.discretization["enclosure"] = describe(s.enclosure);
    r.spectrum.discretization["V0"] = format_real(V0);
    r.report.config_echo["problem"] = "well";
    r.report.config_echo["domain"] = describe(inner);
    out.push_back(std::move(r));
  }
  return out;
}

inline SolveResult solve_well(const Box& inner, double V0, FractionalOrder alpha, const WellOptions& opts = {}) {
  return std::move(solve_well_series(inner, {V0}, alpha, opts).front());
}

}  // namespace fracgap
