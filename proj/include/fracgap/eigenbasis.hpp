#pragma once

// Dirichlet-Laplacian eigenpairs: analytic sine products on boxes, and a masked
// finite-difference provider for other domains.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <sstream>
#include <variant>
#include <vector>

#include <Eigen/Sparse>

#include "fracgap/eigensolve.hpp"
#include "fracgap/error.hpp"
#include "fracgap/geometry.hpp"

namespace fracgap {

/// prod_j sqrt(2/L_j) sin(m_j pi x_j / L_j)
struct AnalyticSine {
  std::vector<int> indices;
  std::vector<double> lengths;

  double value(std::span<const double> x) const {
    double v = 1.0;
    for (std::size_t j = 0; j < indices.size(); ++j)
      v *= std::sqrt(2.0 / lengths[j]) * std::sin(indices[j] * std::numbers::pi * x[j] / lengths[j]);
    return v;
  }
};

/// Interior nodes of a uniform grid (node i sits at i*h per axis) that lie strictly inside a domain.
struct FdGrid {
  int dim = 2;
  double h = 0.0;
  std::vector<std::array<double, 2>> nodes;

  double cell_volume() const { return std::pow(h, dim); }
};

/// Eigenvector of the discrete Laplacian; unit norm in <u,v>_h = h^n sum u_i v_i.
struct GridVector {
  Eigen::VectorXd values;
  std::shared_ptr<const FdGrid> grid;
};

struct EigenMode {
  double eigenvalue = 0.0;
  std::variant<AnalyticSine, GridVector> descriptor;
};

struct AnalyticBoxBasis {
  std::vector<int> modes_per_dim;
};

struct FiniteDifferenceBasis {
  double h = 0.05;
  int mode_count = 16;
};

using EigenbasisSpec = std::variant<AnalyticBoxBasis, FiniteDifferenceBasis>;

/// All tensor sine modes with m_j in 1..M_j, ascending in eigenvalue (ties by index order).
inline std::vector<EigenMode> box_eigenpairs(const Box& box, const std::vector<int>& modes_per_dim) {
  validate(Domain{box});
  const std::size_t n = box.dim();
  if (modes_per_dim.size() != n) throw DomainError("box_eigenpairs: one mode count per dimension required");
  for (int m : modes_per_dim)
    if (m < 1) throw DomainError("box_eigenpairs: mode counts must be >= 1");
  std::size_t total = 1;
  for (int m : modes_per_dim) total *= static_cast<std::size_t>(m);
  std::vector<EigenMode> out;
  out.reserve(total);
  const double pi = std::numbers::pi;
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::vector<int> idx(n);
    std::size_t rest = flat;
    double lam = 0.0;
    for (std::size_t j = n; j-- > 0;) {
      idx[j] = static_cast<int>(rest % modes_per_dim[j]) + 1;
      rest /= modes_per_dim[j];
      const double f = idx[j] * pi / box.lengths[j];
      lam += f * f;
    }
    out.push_back({lam, AnalyticSine{std::move(idx), box.lengths}});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const EigenMode& a, const EigenMode& b) { return a.eigenvalue < b.eigenvalue; });
  return out;
}

namespace detail {

inline bool strictly_inside(const Domain& domain, double x, double y) {
  if (const auto* b = std::get_if<Box>(&domain)) {
    if (!(x > 0.0 && x < b->lengths[0])) return false;
    return b->dim() == 1 || (y > 0.0 && y < b->lengths[1]);
  }
  const auto& e = std::get<Ellipse2D>(domain);
  const double u = x / e.semi_axis_major, v = y / e.semi_axis_minor;
  return u * u + v * v < 1.0;
}

// Fraction theta in (0,1] of the arm from p to p + h*dir at which the boundary is crossed.
inline double boundary_fraction(const Domain& domain, double x, double y, int axis, int sign, double h) {
  double t = 1.0;
  if (const auto* b = std::get_if<Box>(&domain)) {
    const double c = axis == 0 ? x : y;
    const double wall = sign > 0 ? b->lengths[axis] : 0.0;
    t = std::fabs(wall - c) / h;
  } else {
    const auto& e = std::get<Ellipse2D>(domain);
    // solve (x + s dx)^2/a^2 + (y + s dy)^2/b^2 = 1 for the positive root s
    const double a2 = e.semi_axis_major * e.semi_axis_major, b2 = e.semi_axis_minor * e.semi_axis_minor;
    const double dx = axis == 0 ? sign * h : 0.0, dy = axis == 1 ? sign * h : 0.0;
    const double qa = dx * dx / a2 + dy * dy / b2;
    const double qb = 2.0 * (x * dx / a2 + y * dy / b2);
    const double qc = x * x / a2 + y * y / b2 - 1.0;
    const double disc = std::sqrt(std::max(qb * qb - 4.0 * qa * qc, 0.0));
    t = qb >= 0.0 ? (-2.0 * qc) / (qb + disc) : (-qb + disc) / (2.0 * qa);
  }
  return std::clamp(t, 1e-6, 1.0);
}

}  // namespace detail

/// The masked finite-difference Dirichlet Laplacian on `domain` with spacing h. Arms that
/// leave the domain use the symmetric ghost-fluid weight 1/(theta h^2) on the diagonal.
inline Eigen::SparseMatrix<double> fd_masked_laplacian(const Domain& domain, double h, FdGrid& grid) {
  validate(domain);
  if (!(h > 0.0)) throw DomainError("fd_masked_eigenpairs: h must be > 0");
  const int dim = static_cast<int>(dimension(domain));
  if (dim > 2) throw DomainError("fd_masked_eigenpairs: only 1D and 2D domains are supported");
  grid = FdGrid{dim, h, {}};

  double lo[2] = {0.0, 0.0}, hi[2] = {0.0, 0.0};
  if (const auto* b = std::get_if<Box>(&domain)) {
    for (int j = 0; j < dim; ++j) hi[j] = b->lengths[j];
  } else {
    const auto& e = std::get<Ellipse2D>(domain);
    lo[0] = -e.semi_axis_major;
    hi[0] = e.semi_axis_major;
    lo[1] = -e.semi_axis_minor;
    hi[1] = e.semi_axis_minor;
  }
  const int i0 = static_cast<int>(std::floor(lo[0] / h)), i1 = static_cast<int>(std::ceil(hi[0] / h));
  const int j0 = dim == 2 ? static_cast<int>(std::floor(lo[1] / h)) : 0;
  const int j1 = dim == 2 ? static_cast<int>(std::ceil(hi[1] / h)) : 0;
  const int nx = i1 - i0 + 1, ny = j1 - j0 + 1;
  std::vector<int> index(static_cast<std::size_t>(nx) * ny, -1);
  for (int i = i0; i <= i1; ++i)
    for (int j = j0; j <= j1; ++j) {
      const double x = i * h, y = j * h;
      if (detail::strictly_inside(domain, x, y)) {
        index[static_cast<std::size_t>(i - i0) * ny + (j - j0)] = static_cast<int>(grid.nodes.size());
        grid.nodes.push_back({x, y});
      }
    }
  const int count = static_cast<int>(grid.nodes.size());
  if (count < 2) throw ResolutionError("fd_masked_eigenpairs: fewer than two interior nodes");

  auto lookup = [&](int i, int j) -> int {
    if (i < i0 || i > i1 || j < j0 || j > j1) return -1;
    return index[static_cast<std::size_t>(i - i0) * ny + (j - j0)];
  };
  const double inv = 1.0 / (h * h);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(count) * (2 * dim + 1));
  for (int p = 0; p < count; ++p) {
    const double x = grid.nodes[p][0], y = grid.nodes[p][1];
    const int i = static_cast<int>(std::lround(x / h)), j = static_cast<int>(std::lround(y / h));
    double diag = 0.0;
    for (int axis = 0; axis < dim; ++axis)
      for (int sign : {-1, 1}) {
        const int q = axis == 0 ? lookup(i + sign, j) : lookup(i, j + sign);
        if (q >= 0) {
          diag += inv;
          trip.emplace_back(p, q, -inv);
        } else {
          diag += inv / detail::boundary_fraction(domain, x, y, axis, sign, h);
        }
      }
    trip.emplace_back(p, p, diag);
  }
  Eigen::SparseMatrix<double> a(count, count);
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

/// Smallest M eigenpairs of the masked finite-difference Dirichlet Laplacian.
inline std::vector<EigenMode> fd_masked_eigenpairs(const Domain& domain, double h, int M) {
  if (M < 1) throw DomainError("fd_masked_eigenpairs: M must be >= 1");
  auto grid = std::make_shared<FdGrid>();
  const Eigen::SparseMatrix<double> a = fd_masked_laplacian(domain, h, *grid);
  if (a.rows() < M) {
    std::ostringstream os;
    os << "fd_masked_eigenpairs: only " << a.rows() << " interior nodes for " << M << " modes at h = " << h;
    throw ResolutionError(os.str());
  }
  SparseEigenOptions opts;
  opts.extra_vectors = std::max(8, M / 2);
  const EigenDecomposition dec = smallest_eigenpairs(a, M, opts);
  const double scale = 1.0 / std::sqrt(grid->cell_volume());
  std::vector<EigenMode> out;
  out.reserve(M);
  for (int m = 0; m < M; ++m) out.push_back({dec.values(m), GridVector{dec.vectors.col(m) * scale, grid}});
  return out;
}

}  // namespace fracgap
