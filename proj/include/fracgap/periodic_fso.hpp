#pragma once

// Periodic fractional Schrodinger operator in a plane-wave basis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracgap/eigensolve.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/local_fso.hpp"
#include "fracgap/spectrum.hpp"

namespace fracgap {

struct PlaneWaveSpec {
  std::vector<int> modes_per_dim;  ///< frequencies m_j in -M_j..M_j
};

/// V(x) = sum_q c_q exp(2 pi i q.x / L); real V needs c_{-q} = conj(c_q).
using PeriodicCoefficients = std::map<std::vector<int>, std::complex<double>>;

struct PeriodicResult {
  SolveResult result;
  std::vector<std::vector<int>> modes;  ///< plane-wave frequency of each complex basis vector
  Eigen::MatrixXcd realify;             ///< complex coefficients = realify * real coefficients
};

namespace detail {

inline std::vector<std::vector<int>> plane_wave_modes(const std::vector<int>& M) {
  std::vector<std::vector<int>> out;
  std::size_t total = 1;
  for (int m : M) total *= static_cast<std::size_t>(2 * m + 1);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<int> idx(M.size());
    std::size_t rest = flat;
    for (std::size_t j = M.size(); j-- > 0;) {
      idx[j] = static_cast<int>(rest % (2 * M[j] + 1)) - M[j];
      rest /= 2 * M[j] + 1;
    }
    out.push_back(std::move(idx));
  }
  return out;
}

}  // namespace detail

inline PeriodicResult solve_periodic_full(const Box& box, FractionalOrder alpha, const PeriodicCoefficients& coeffs,
                                          const PlaneWaveSpec& spec) {
  validate(Domain{box});
  const std::size_t n = box.dim();
  if (spec.modes_per_dim.size() != n) throw DomainError("periodic: one mode count per dimension required");
  for (int m : spec.modes_per_dim)
    if (m < 2) throw DomainError("periodic: modes_per_dim entries must be >= 2");
  bool zero = true;
  for (const auto& [q, c] : coeffs) {
    if (q.size() != n) throw DomainError("periodic: coefficient frequency has the wrong dimension");
    std::vector<int> mq(q);
    for (int& v : mq) v = -v;
    const auto it = coeffs.find(mq);
    const std::complex<double> partner = it == coeffs.end() ? 0.0 : it->second;
    if (std::abs(partner - std::conj(c)) > 1e-12 * std::max(1.0, std::abs(c)))
      throw DomainError("periodic: coefficients are not Hermitian (V must be real)");
    if (c != 0.0) zero = false;
  }

  PeriodicResult pr;
  pr.modes = detail::plane_wave_modes(spec.modes_per_dim);
  const auto N = static_cast<Eigen::Index>(pr.modes.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(N, N);
  const double a = alpha.value();
  for (Eigen::Index i = 0; i < N; ++i) {
    double k2 = 0.0;
    for (std::size_t j = 0; j < n; ++j) k2 += std::pow(2.0 * std::numbers::pi * pr.modes[i][j] / box.lengths[j], 2);
    h(i, i) = std::pow(k2, 0.5 * a);
  }
  if (!zero)
    for (Eigen::Index i = 0; i < N; ++i)
      for (Eigen::Index l = 0; l < N; ++l) {
        std::vector<int> d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = pr.modes[i][j] - pr.modes[l][j];
        const auto it = coeffs.find(d);
        if (it != coeffs.end()) h(i, l) += it->second;
      }

  // reflection m -> -m reverses the flat index; real basis as in the whole-space solver
  const Eigen::Index centre = (N - 1) / 2;
  pr.realify = Eigen::MatrixXcd::Zero(N, N);
  const double r2 = 1.0 / std::sqrt(2.0);
  pr.realify(centre, 0) = 1.0;
  for (Eigen::Index f = 0; f < centre; ++f) {
    const Eigen::Index g = N - 1 - f;
    pr.realify(f, 1 + 2 * f) = r2;
    pr.realify(g, 1 + 2 * f) = r2;
    pr.realify(f, 2 + 2 * f) = std::complex<double>(0.0, r2);
    pr.realify(g, 2 + 2 * f) = std::complex<double>(0.0, -r2);
  }
  const Eigen::MatrixXcd hr = pr.realify.adjoint() * h * pr.realify;
  const double scale = std::max(hr.cwiseAbs().maxCoeff(), 1e-300);
  if (hr.imag().cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw SolverError("periodic: real basis left an imaginary part");
  Eigen::MatrixXd real = hr.real();
  real = 0.5 * (real + real.transpose()).eval();

  SolveResult& r = pr.result;
  r.hamiltonian = real;
  const EigenDecomposition dec = symmetric_eigen(real);
  std::ostringstream os;
  for (std::size_t j = 0; j < n; ++j) os << (j ? "x" : "") << spec.modes_per_dim[j];
  Metadata meta{{"basis", "plane_wave"}, {"modes_per_dim", os.str()},
                {"gap_convention", zero ? "positive_levels" : "two_smallest"}};
  r.spectrum = Spectrum{dec.values, dec.vectors, "plane_wave", std::move(meta)};
  GapOptions go;
  if (zero) {
    go.positive_only = true;
    go.zero_tol = 1e-12 * std::max(1.0, dec.values.cwiseAbs().maxCoeff());
  }
  r.report = gap_from_eigenvalues(dec.values, go);
  r.report.config_echo = {{"problem", "periodic"}, {"domain", describe(box)}, {"alpha", format_real(a)}};
  return pr;
}

inline SolveResult solve_periodic(const Box& box, FractionalOrder alpha, const PeriodicCoefficients& coeffs,
                                  const PlaneWaveSpec& spec) {
  return solve_periodic_full(box, alpha, coeffs, spec).result;
}

/// Closed-form V = 0 gap for n = 1, 2 (lengths sorted so that L1 >= L2).
inline double periodic_gap_analytic(int n, double alpha, std::vector<double> L) {
  const double tp = std::pow(2.0 * std::numbers::pi, alpha);
  if (n == 1) return tp * (std::pow(2.0, alpha) - 1.0) / std::pow(L.at(0), alpha);
  if (n != 2 || L.size() != 2) throw DomainError("periodic_gap_analytic: n must be 1 or 2");
  std::sort(L.begin(), L.end(), std::greater<>());
  const double L1 = L[0], L2 = L[1];
  if (L1 == L2) return tp * (std::pow(2.0, 0.5 * alpha) - 1.0) / std::pow(L1, alpha);
  if (L1 <= 2.0 * L2) return tp / std::pow(L2, alpha) - tp / std::pow(L1, alpha);
  return tp * (std::pow(2.0, alpha) - 1.0) / std::pow(L1, alpha);
}

struct PhaseRow {
  double ratio = 1.0;
  std::vector<double> E;      ///< E0..E3 (E0 = 0)
  double delta = 0.0;
  std::string branch;         ///< "equal", "middle" or "wide"
  std::vector<int> mode;      ///< |m| of the plane wave realizing the second positive level
  int multiplicity = 1;       ///< of the first positive level
};

/// L2 = 1, L1 = ratio, V = 0: which plane wave carries the second positive level.
inline std::vector<PhaseRow> phase_diagram_sweep(FractionalOrder alpha, const std::vector<double>& ratios,
                                                 int modes_per_dim = 4) {
  std::vector<PhaseRow> rows;
  for (double ratio : ratios) {
    if (!(ratio >= 1.0)) throw DomainError("phase diagram: ratios must be >= 1");
    const PeriodicResult pr = solve_periodic_full(Box{{ratio, 1.0}}, alpha, {}, {{modes_per_dim, modes_per_dim}});
    const auto& ev = pr.result.spectrum.eigenvalues;
    PhaseRow row;
    row.ratio = ratio;
    for (int i = 0; i < 4 && i < ev.size(); ++i) row.E.push_back(ev(i));
    row.delta = pr.result.report.delta;
    row.multiplicity = pr.result.report.multiplicity1;

    // weight of each plane wave in the E2 eigenspace (basis independent, so degenerate
    // levels are handled); among the modes it contains, the smallest (|m1|,|m2|) wins
    const Eigen::MatrixXcd grid = pr.realify * pr.result.spectrum.eigenvectors.cast<std::complex<double>>();
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(grid.rows());
    for (Eigen::Index c = 0; c < ev.size(); ++c)
      if (std::fabs(ev(c) - pr.result.report.E2) <= 1e-9 * pr.result.report.E2) weight += grid.col(c).cwiseAbs2();
    std::vector<int> best;
    for (Eigen::Index i = 0; i < weight.size(); ++i) {
      if (weight(i) < 0.5) continue;
      std::vector<int> m = pr.modes[static_cast<std::size_t>(i)];
      for (int& v : m) v = std::abs(v);
      if (best.empty() || m < best) best = m;
    }
    row.mode = best;
    if (best == std::vector<int>{1, 1})
      row.branch = "equal";
    else if (best == std::vector<int>{0, 1})
      row.branch = "middle";
    else
      row.branch = "wide";
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace fracgap
