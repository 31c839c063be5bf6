#pragma once

// Spectral (local) fractional Schrodinger operator A^{alpha/2} + V in a Dirichlet eigenbasis.

#include <cmath>
#include <sstream>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "fracgap/bounds.hpp"
#include "fracgap/eigenbasis.hpp"
#include "fracgap/eigensolve.hpp"
#include "fracgap/galerkin.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/potential.hpp"
#include "fracgap/spectrum.hpp"

namespace fracgap {

struct LocalOptions {
  int quad_extra = 8;            ///< Gauss nodes per axis = 2 * max index + quad_extra
  bool refine = false;           ///< double modes_per_dim until delta settles
  double refine_tol = 1e-8;
  int refine_cap = 256;          ///< max modes per axis during refinement
  double asymmetry_tol = 1e-10;
};

struct SolveResult {
  Spectrum spectrum;
  GapReport report;
  Eigen::MatrixXd hamiltonian;
};

/// H = diag(lambda_m^{alpha/2}) + V_hat over the given modes.
inline Eigen::MatrixXd assemble_local_hamiltonian(const std::vector<EigenMode>& modes, FractionalOrder alpha,
                                                  const Potential& potential, const LocalOptions& opts = {}) {
  const auto N = static_cast<Eigen::Index>(modes.size());
  if (N == 0) throw DomainError("assemble_local_hamiltonian: empty basis");
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(N, N);
  if (!is_zero(potential)) {
    if (const auto* s = std::get_if<AnalyticSine>(&modes.front().descriptor)) {
      Box box{s->lengths};
      std::vector<ModeIndex> idx;
      idx.reserve(modes.size());
      for (const auto& m : modes) idx.push_back(std::get<AnalyticSine>(m.descriptor).indices);
      h = sine_potential_matrix(box, idx, potential, opts.quad_extra);
    } else {
      const auto& grid = *std::get<GridVector>(modes.front().descriptor).grid;
      const auto P = static_cast<Eigen::Index>(grid.nodes.size());
      Eigen::MatrixXd U(P, N);
      for (Eigen::Index c = 0; c < N; ++c) U.col(c) = std::get<GridVector>(modes[c].descriptor).values;
      Eigen::VectorXd w(P);
      for (Eigen::Index p = 0; p < P; ++p) {
        const auto& node = grid.nodes[static_cast<std::size_t>(p)];
        w(p) = grid.cell_volume() * evaluate(potential, std::span<const double>(node.data(), grid.dim));
      }
      h = U.transpose() * w.asDiagonal() * U;
    }
    symmetrize_checked(h, opts.asymmetry_tol, "assemble_local_hamiltonian");
  }
  for (Eigen::Index i = 0; i < N; ++i) h(i, i) += std::pow(modes[static_cast<std::size_t>(i)].eigenvalue, alpha.half());
  return h;
}

namespace detail {

inline SolveResult local_solve_once(const Domain& domain, const std::vector<EigenMode>& modes, FractionalOrder alpha,
                                    const Potential& potential, const LocalOptions& opts, const std::string& basis,
                                    Metadata meta) {
  SolveResult r;
  r.hamiltonian = assemble_local_hamiltonian(modes, alpha, potential, opts);
  const EigenDecomposition dec = symmetric_eigen(r.hamiltonian);
  r.spectrum = Spectrum{dec.values, dec.vectors, basis, std::move(meta)};
  r.report = gap_from_eigenvalues(dec.values);
  const int n = static_cast<int>(dimension(domain));
  attach_bounds(r.report, evaluate_bounds({ProblemKind::Local, n, alpha.value(), diameters(domain)}));
  r.report.config_echo = {{"problem", "local"},
                          {"domain", describe(domain)},
                          {"alpha", format_real(alpha.value())},
                          {"potential", kind_name(potential)}};
  return r;
}

}  // namespace detail

/// Eigenvalues of the local operator on `domain` and the fundamental gap with bound margins.
inline SolveResult solve_local_gap(const Domain& domain, const EigenbasisSpec& basis, FractionalOrder alpha,
                                   const Potential& potential, const LocalOptions& opts = {}) {
  validate(domain);
  validate(potential);
  if (const auto* fd = std::get_if<FiniteDifferenceBasis>(&basis)) {
    const auto modes = fd_masked_eigenpairs(domain, fd->h, fd->mode_count);
    Metadata meta{{"basis", "fd_mask"}, {"h", format_real(fd->h)}, {"modes", std::to_string(fd->mode_count)}};
    return detail::local_solve_once(domain, modes, alpha, potential, opts, "fd_mask", std::move(meta));
  }
  const auto* box = std::get_if<Box>(&domain);
  if (!box) throw DomainError("solve_local_gap: the analytic sine basis needs a box domain");
  std::vector<int> per_dim = std::get<AnalyticBoxBasis>(basis).modes_per_dim;
  if (per_dim.size() != box->dim()) throw DomainError("solve_local_gap: one mode count per dimension required");

  auto run = [&](const std::vector<int>& m) {
    std::ostringstream os;
    for (std::size_t j = 0; j < m.size(); ++j) os << (j ? "x" : "") << m[j];
    Metadata meta{{"basis", "sine"}, {"modes_per_dim", os.str()}, {"quad_extra", std::to_string(opts.quad_extra)}};
    return detail::local_solve_once(domain, box_eigenpairs(*box, m), alpha, potential, opts, "sine", std::move(meta));
  };
  SolveResult result = run(per_dim);
  if (!opts.refine || is_zero(potential)) return result;
  while (true) {
    std::vector<int> next = per_dim;
    bool capped = true;
    for (int& m : next) {
      if (m * 2 <= opts.refine_cap) {
        m *= 2;
        capped = false;
      }
    }
    if (capped) {
      result.spectrum.discretization["refine"] = "cap_reached";
      return result;
    }
    SolveResult finer = run(next);
    const double change = std::fabs(finer.report.delta - result.report.delta) / std::fabs(finer.report.delta);
    finer.spectrum.discretization["refine_change"] = format_real(change);
    per_dim = next;
    result = std::move(finer);
    if (change <= opts.refine_tol) {
      result.spectrum.discretization["refine"] = "converged";
      return result;
    }
  }
}

}  // namespace fracgap
