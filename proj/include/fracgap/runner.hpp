#pragma once

// Dispatch of a parsed configuration to the solvers, parallel sweeps with ordered
// results, and CSV / JSON emission.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fracgap/asymptotics.hpp"
#include "fracgap/config.hpp"

namespace fracgap::cli {

enum class Subcommand { Solve, Sweep, Asymptotic, Bounds, WellStudy, PhaseDiagram };

inline std::string to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Solve: return "solve";
    case Subcommand::Sweep: return "sweep";
    case Subcommand::Asymptotic: return "asymptotic";
    case Subcommand::Bounds: return "bounds";
    case Subcommand::WellStudy: return "well-study";
    case Subcommand::PhaseDiagram: return "phase-diagram";
  }
  return "?";
}

struct Cell {
  std::string text;
  std::optional<double> number;

  static Cell real(double v) { return {format_real(v), v}; }
  static Cell integer(long v) { return {std::to_string(v), static_cast<double>(v)}; }
  static Cell str(std::string s) { return {std::move(s), std::nullopt}; }
};

using Row = std::vector<std::pair<std::string, Cell>>;

struct Table {
  std::string subcommand;
  json config;  ///< resolved configuration
  std::string config_hash;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  int findings = 0;
  int failures = 0;
  int exit_code = 0;
};

/// FNV-1a, 64 bit.
inline std::string fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Fills the defaults the solvers would pick, so the echoed configuration is complete.
inline void resolve_defaults(RunConfig& c) {
  const std::size_t n = c.problem == Problem::WholeSpace ? c.dimension : dimension(c.domain);
  if (auto* b = std::get_if<AnalyticBoxBasis>(&c.basis); b && b->modes_per_dim.empty() && c.problem == Problem::Local)
    b->modes_per_dim.assign(n, n == 1 ? 32 : 16);
  if (c.modes_per_dim.empty()) {
    if (c.problem == Problem::Classical) c.modes_per_dim.assign(n, n == 1 ? 24 : 16);
    if (c.problem == Problem::Periodic) c.modes_per_dim.assign(n, 8);
    if (c.problem == Problem::Well) c.modes_per_dim.assign(n, n == 1 ? 128 : 24);
  }
}

namespace detail {

inline json to_json(const Domain& d) {
  if (const auto* b = std::get_if<Box>(&d)) return {{"type", "box"}, {"lengths", b->lengths}};
  const auto& e = std::get<Ellipse2D>(d);
  return {{"type", "ellipse"}, {"a", e.semi_axis_major}, {"b", e.semi_axis_minor}};
}

inline json to_json(const std::vector<TrigTerm>& terms) {
  json a = json::array();
  for (const auto& t : terms)
    a.push_back({{"amplitude", t.amplitude}, {"kind", t.kind == TrigKind::Cos ? "cos" : "sin"}, {"frequency", t.frequency}});
  return a;
}

inline json to_json(const Potential& v) {
  struct Visitor {
    json operator()(const ZeroPotential&) const { return {{"type", "zero"}}; }
    json operator()(const QuadraticPotential& q) const {
      return {{"type", "quadratic"}, {"coefficients", q.coefficients}, {"center", q.center}};
    }
    json operator()(const QuadraticTrigPotential& q) const {
      return {{"type", "quadratic_trig"},
              {"coefficients", q.quadratic.coefficients},
              {"center", q.quadratic.center},
              {"terms", to_json(q.terms)}};
    }
    json operator()(const WellPotential& w) const {
      return {{"type", "well"}, {"lower", w.lower}, {"lengths", w.lengths}, {"height", w.height}};
    }
    json operator()(const GridPotential& g) const {
      return {{"type", "grid"}, {"shape", g.shape}, {"lower", g.lower}, {"upper", g.upper}, {"values", g.values}};
    }
  };
  return std::visit(Visitor{}, v);
}

inline json kq_json(const KQuadrature& k) {
  return {{"K_max", k.K_max},
          {"h_k", k.h_k},
          {"tail", k.tail},
          {"nodes_per_panel", k.nodes_per_panel},
          {"grading_levels", k.grading_levels}};
}

}  // namespace detail

/// Canonical echo of a resolved configuration (object keys sorted).
inline json resolved_json(const RunConfig& c) {
  json j{{"schema_version", c.schema_version}, {"problem", to_string(c.problem)}, {"alpha", c.alpha}};
  switch (c.problem) {
    case Problem::Local:
      j["domain"] = detail::to_json(c.domain);
      j["potential"] = detail::to_json(c.potential);
      if (const auto* b = std::get_if<AnalyticBoxBasis>(&c.basis))
        j["basis"] = {{"type", "sine"},
                      {"modes_per_dim", b->modes_per_dim},
                      {"refine", c.local.refine},
                      {"refine_tol", c.local.refine_tol},
                      {"refine_cap", c.local.refine_cap}};
      else {
        const auto& f = std::get<FiniteDifferenceBasis>(c.basis);
        j["basis"] = {{"type", "fd"}, {"h", f.h}, {"modes", f.mode_count}};
      }
      break;
    case Problem::Classical:
      j["domain"] = detail::to_json(c.domain);
      j["potential"] = detail::to_json(c.potential);
      j["modes_per_dim"] = c.modes_per_dim;
      j["k_quadrature"] = detail::kq_json(c.kq);
      break;
    case Problem::WholeSpace:
      j["dimension"] = c.dimension;
      if (c.harmonic)
        j["potential"] = {{"type", "harmonic"}, {"gamma", c.gamma}, {"eta", c.eta}, {"terms", detail::to_json(c.harmonic_terms)}};
      else
        j["potential"] = detail::to_json(c.potential);
      j["k_grid"] = {{"radius", c.kg.radius},       {"spacing", c.kg.spacing}, {"points_1d", c.kg.points_1d},
                     {"points_2d", c.kg.points_2d}, {"radius_factor", c.kg.radius_factor},
                     {"order", c.kg.order},         {"eigen_count", c.kg.eigen_count}};
      break;
    case Problem::Periodic: {
      j["domain"] = detail::to_json(c.domain);
      j["modes_per_dim"] = c.modes_per_dim;
      json co = json::array();
      for (const auto& [q, v] : c.coefficients) co.push_back({{"frequency", q}, {"re", v.real()}, {"im", v.imag()}});
      j["coefficients"] = co;
      break;
    }
    case Problem::Well:
      j["domain"] = detail::to_json(c.domain);
      j["modes_per_dim"] = c.modes_per_dim;
      j["k_quadrature"] = detail::kq_json(c.kq);
      j["V0"] = c.V0;
      j["enclosure_factor"] = c.enclosure_factor;
      break;
    case Problem::Asymptotic:
      j["formula"] = to_string(c.formula);
      j["gamma"] = c.gamma;
      j["eta"] = c.eta;
      j["L"] = c.L;
      break;
    case Problem::Bounds: {
      static const char* kinds[] = {"local", "classical", "wholespace", "periodic"};
      j["kind"] = kinds[static_cast<int>(c.bound_kind)];
      j["n"] = c.n;
      j["D"] = c.D;
      j["d"] = c.d;
      j["gamma1"] = c.gamma1;
      j["gamma2"] = c.gamma2;
      break;
    }
  }
  json sw = json::array();
  for (const auto& a : c.sweep) sw.push_back({{"parameter", a.parameter}, {"values", a.values}});
  j["sweep"] = sw;
  return j;
}

/// Throws ConfigError when the subcommand does not fit the configured problem.
inline void check_subcommand(const RunConfig& c, Subcommand s) {
  const Problem p = c.problem;
  const bool solver = p == Problem::Local || p == Problem::Classical || p == Problem::WholeSpace ||
                      p == Problem::Periodic || p == Problem::Well;
  auto need = [&](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError(to_string(s) + ": " + msg);
  };
  switch (s) {
    case Subcommand::Solve:
      need(solver, "problem must be local, classical, wholespace, periodic or well");
      need(c.sweep.empty(), "a sweep block needs the sweep subcommand");
      break;
    case Subcommand::Sweep:
      need(solver, "problem must be local, classical, wholespace, periodic or well");
      need(!c.sweep.empty(), "the configuration has no sweep block");
      break;
    case Subcommand::Asymptotic: need(p == Problem::Asymptotic, "problem must be asymptotic"); break;
    case Subcommand::Bounds: need(p == Problem::Bounds, "problem must be bounds"); break;
    case Subcommand::WellStudy: need(p == Problem::Well, "problem must be well"); break;
    case Subcommand::PhaseDiagram:
      need(p == Problem::Periodic, "problem must be periodic");
      need(c.coefficients.empty(), "the phase diagram is defined for V = 0");
      need(c.sweep.size() == 1 && c.sweep[0].parameter == "ratio", "needs a single sweep over ratio");
      for (double r : c.sweep[0].values) need(r >= 1.0, "ratios must be >= 1");
      break;
  }
}

namespace detail {

inline void add_solve(Row& row, const SolveResult& r) {
  const GapReport& g = r.report;
  row.emplace_back("E1", Cell::real(g.E1));
  row.emplace_back("E2", Cell::real(g.E2));
  row.emplace_back("delta", Cell::real(g.delta));
  row.emplace_back("multiplicity1", Cell::integer(g.multiplicity1));
  row.emplace_back("multiplicity2", Cell::integer(g.multiplicity2));
  row.emplace_back("degenerate", Cell::integer(g.degenerate() ? 1 : 0));
  std::optional<double> lowest;
  for (const auto& b : g.lower_bounds) {
    const std::string name = fracgap::to_string(b.bound.name);
    row.emplace_back("bound_" + name, Cell::real(b.bound.value));
    row.emplace_back("margin_" + name, Cell::real(b.margin));
    lowest = lowest ? std::min(*lowest, b.margin) : b.margin;
  }
  row.emplace_back("min_margin", lowest ? Cell::real(*lowest) : Cell::str(""));
  row.emplace_back("finding", Cell::integer(g.finding() ? 1 : 0));
  for (const auto& [k, v] : r.spectrum.discretization) row.emplace_back("meta_" + k, Cell::str(v));
}

inline SolveResult solve_point(const RunConfig& c) {
  const FractionalOrder a(c.alpha);
  switch (c.problem) {
    case Problem::Local: return solve_local_gap(c.domain, c.basis, a, c.potential, c.local);
    case Problem::Classical: return solve_classical_gap(std::get<Box>(c.domain), a, c.potential, c.modes_per_dim, c.kq);
    case Problem::WholeSpace: {
      QuadraticTrigPotential v;
      if (c.harmonic) {
        v.quadratic.coefficients.push_back(c.gamma * c.gamma);
        if (c.dimension == 2) v.quadratic.coefficients.push_back(c.gamma * c.gamma * c.eta * c.eta);
        v.terms = c.harmonic_terms;
      } else if (const auto* q = std::get_if<QuadraticPotential>(&c.potential)) {
        v.quadratic = *q;
      } else {
        v = std::get<QuadraticTrigPotential>(c.potential);
      }
      return solve_wholespace_gap(v, c.dimension, a, c.kg);
    }
    case Problem::Periodic:
      return solve_periodic(std::get<Box>(c.domain), a, c.coefficients, PlaneWaveSpec{c.modes_per_dim});
    case Problem::Well: {
      WellOptions o;
      o.enclosure_factor = c.enclosure_factor;
      o.modes_per_dim = c.modes_per_dim;
      o.kq = c.kq;
      return solve_well(std::get<Box>(c.domain), c.V0, a, o);
    }
    default: break;
  }
  throw ConfigError("problem " + to_string(c.problem) + " has no solver");
}

inline Row run_point(const RunConfig& c, Subcommand s) {
  Row row;
  switch (s) {
    case Subcommand::Solve:
    case Subcommand::Sweep: add_solve(row, solve_point(c)); break;
    case Subcommand::WellStudy: {
      const SolveResult w = solve_point(c);
      const Box& inner = std::get<Box>(c.domain);
      const FractionalOrder a(c.alpha);
      const std::vector<int> m(inner.dim(), inner.dim() == 1 ? 24 : 16);
      const double classical = solve_classical_gap(inner, a, ZeroPotential{}, m, c.kq).report.E1;
      const double local = solve_local_gap(inner, AnalyticBoxBasis{m}, a, ZeroPotential{}).report.E1;
      add_solve(row, w);
      row.emplace_back("E1_classical", Cell::real(classical));
      row.emplace_back("E1_local", Cell::real(local));
      row.emplace_back("diff_classical", Cell::real(std::fabs(w.report.E1 - classical)));
      row.emplace_back("diff_local", Cell::real(std::fabs(w.report.E1 - local)));
      break;
    }
    case Subcommand::PhaseDiagram: {
      const double ratio = std::get<Box>(c.domain).lengths[0];
      const PhaseRow p = phase_diagram_sweep(FractionalOrder(c.alpha), {ratio}, c.modes_per_dim[0]).front();
      for (std::size_t i = 0; i < p.E.size(); ++i) row.emplace_back("E" + std::to_string(i), Cell::real(p.E[i]));
      row.emplace_back("delta", Cell::real(p.delta));
      row.emplace_back("delta_analytic", Cell::real(periodic_gap_analytic(2, c.alpha, {ratio, 1.0})));
      row.emplace_back("branch", Cell::str(p.branch));
      std::string mode;
      for (std::size_t j = 0; j < p.mode.size(); ++j) mode += (j ? ":" : "") + std::to_string(p.mode[j]);
      row.emplace_back("mode", Cell::str(mode));
      row.emplace_back("multiplicity1", Cell::integer(p.multiplicity));
      break;
    }
    case Subcommand::Asymptotic:
      switch (c.formula) {
        case Formula::Box1D: {
          const auto e = eigs_box1d_asymptotic(c.alpha);
          row.emplace_back("E1", Cell::real(e.E1));
          row.emplace_back("E2", Cell::real(e.E2));
          row.emplace_back("delta", Cell::real(gap_box1d_asymptotic(c.alpha)));
          break;
        }
        case Formula::Box2D: {
          const auto e = eigs_box2d_asymptotic(c.alpha, c.L);
          row.emplace_back("E1", Cell::real(e.E1));
          row.emplace_back("E2", Cell::real(e.E2));
          row.emplace_back("delta", Cell::real(e.E2 - e.E1));
          break;
        }
        case Formula::Harmonic1D: {
          const auto e = eigs_harmonic1d_asymptotic(c.alpha, c.gamma);
          row.emplace_back("E1", Cell::real(e.E1));
          row.emplace_back("E2", Cell::real(e.E2));
          row.emplace_back("delta", Cell::real(gap_harmonic1d_asymptotic(c.alpha, c.gamma)));
          break;
        }
        case Formula::Harmonic2D:
          // the formula is for gammas (1, eta); gamma rescales it by gamma^{2 alpha/(2+alpha)}
          row.emplace_back("delta", Cell::real(std::pow(c.gamma, 2.0 * c.alpha / (2.0 + c.alpha)) *
                                               gap_harmonic2d_asymptotic(c.alpha, c.eta)));
          break;
      }
      break;
    case Subcommand::Bounds: {
      BoundInputs in;
      in.kind = c.bound_kind;
      in.n = c.n;
      in.alpha = c.alpha;
      in.diam = {c.D, c.d};
      in.gamma1 = c.gamma1;
      in.gamma2 = c.gamma2;
      for (const auto& b : evaluate_bounds(in)) row.emplace_back("bound_" + fracgap::to_string(b.name), Cell::real(b.value));
      break;
    }
  }
  return row;
}

}  // namespace detail

namespace detail {

inline int column_rank(const RunConfig& c, const std::string& col) {
  for (const auto& a : c.sweep)
    if (a.parameter == col) return 0;
  if (col.rfind("bound_", 0) == 0 || col.rfind("margin_", 0) == 0) return 2;
  if (col == "min_margin" || col == "finding") return 3;
  if (col.rfind("meta_", 0) == 0) return 5;
  if (col == "error") return 6;
  static const char* solved[] = {"E1", "E2", "delta", "multiplicity1", "multiplicity2", "degenerate"};
  for (const char* s : solved)
    if (col == s) return 1;
  return 4;
}

}  // namespace detail

/// Every sweep point in order (first axis slowest), with its parameter columns.
inline std::vector<std::pair<RunConfig, Row>> expand_points(const RunConfig& c) {
  std::size_t total = 1;
  for (const auto& a : c.sweep) total *= a.values.size();
  std::vector<std::pair<RunConfig, Row>> out;
  out.reserve(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    RunConfig pt = c;
    Row params;
    std::vector<std::size_t> pick(c.sweep.size());
    std::size_t rest = flat;
    for (std::size_t i = c.sweep.size(); i-- > 0;) {
      pick[i] = rest % c.sweep[i].values.size();
      rest /= c.sweep[i].values.size();
    }
    for (std::size_t i = 0; i < c.sweep.size(); ++i) {
      const double v = c.sweep[i].values[pick[i]];
      apply_parameter(pt, c.sweep[i].parameter, v);
      params.emplace_back(c.sweep[i].parameter, Cell::real(v));
    }
    out.emplace_back(std::move(pt), std::move(params));
  }
  return out;
}

/// Runs every point on `threads` workers; rows come back in sweep order. Domain errors
/// surface as exit code 3, other library failures as 2 (the row carries the message).
inline Table run(RunConfig config, Subcommand s, int threads = 1) {
  check_subcommand(config, s);
  resolve_defaults(config);
  Table t;
  t.subcommand = to_string(s);
  t.config = resolved_json(config);
  t.config_hash = fnv1a64(t.config.dump());

  auto points = expand_points(config);
  if (points.empty()) points.emplace_back(config, Row{});
  std::vector<Row> rows(points.size());
  std::vector<int> status(points.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      Row row = points[i].second;
      try {
        Row body = detail::run_point(points[i].first, s);
        row.insert(row.end(), body.begin(), body.end());
      } catch (const DomainError& e) {
        status[i] = 3;
        row.emplace_back("error", Cell::str(e.what()));
      } catch (const ConfigError& e) {
        status[i] = 3;
        row.emplace_back("error", Cell::str(e.what()));
      } catch (const Error& e) {
        status[i] = 2;
        row.emplace_back("error", Cell::str(e.what()));
      } catch (const std::exception& e) {
        status[i] = 2;
        row.emplace_back("error", Cell::str(e.what()));
      }
      rows[i] = std::move(row);
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  for (const auto& row : rows)
    for (const auto& [k, v] : row)
      if (std::find(t.columns.begin(), t.columns.end(), k) == t.columns.end()) t.columns.push_back(k);
  // a bound that only some rows carry still sits with the other bounds
  std::stable_sort(t.columns.begin(), t.columns.end(), [&](const std::string& a, const std::string& b) {
    return detail::column_rank(config, a) < detail::column_rank(config, b);
  });
  t.columns.push_back("config_hash");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::vector<Cell> cells(t.columns.size());
    for (const auto& [k, v] : rows[i]) {
      const auto pos = std::find(t.columns.begin(), t.columns.end(), k) - t.columns.begin();
      cells[static_cast<std::size_t>(pos)] = v;
      if (k == "finding" && v.text == "1") ++t.findings;
    }
    cells.back() = Cell::str(t.config_hash);
    t.rows.push_back(std::move(cells));
    if (status[i]) {
      ++t.failures;
      t.exit_code = std::max(t.exit_code, status[i]);
    }
  }
  return t;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

inline void write_csv(std::ostream& os, const Table& t) {
  os << "# fracgap " << t.subcommand << "\n";
  os << "# schema_version: " << kSchemaVersion << "\n";
  os << "# config_hash: " << t.config_hash << "\n";
  os << "# config: " << t.config.dump() << "\n";
  os << "# rows: " << t.rows.size() << ", findings: " << t.findings << ", failures: " << t.failures << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i].text);
    os << "\n";
  }
}

inline void write_json(std::ostream& os, const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) {
    json o = json::object();
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].text.empty() && !r[i].number) continue;
      o[t.columns[i]] = r[i].number ? json(*r[i].number) : json(r[i].text);
    }
    rows.push_back(std::move(o));
  }
  json doc{{"subcommand", t.subcommand}, {"schema_version", kSchemaVersion}, {"config_hash", t.config_hash},
           {"config", t.config},         {"columns", t.columns},           {"rows", rows},
           {"findings", t.findings},     {"failures", t.failures}};
  os << doc.dump(2) << "\n";
}

}  // namespace fracgap::cli
