#pragma once

// Run configuration for the command-line front end: a versioned JSON document, parsed
// strictly (unknown keys are errors) with line and field locations in the diagnostics.

#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fracgap/bounds.hpp"
#include "fracgap/classical_fso.hpp"
#include "fracgap/eigenbasis.hpp"
#include "fracgap/error.hpp"
#include "fracgap/geometry.hpp"
#include "fracgap/local_fso.hpp"
#include "fracgap/periodic_fso.hpp"
#include "fracgap/potential.hpp"
#include "fracgap/wholespace_fso.hpp"

namespace fracgap::cli {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

enum class Problem { Local, Classical, WholeSpace, Periodic, Well, Asymptotic, Bounds };
enum class Formula { Box1D, Box2D, Harmonic1D, Harmonic2D };

struct SweepAxis {
  std::string parameter;
  std::vector<double> values;
};

struct RunConfig {
  int schema_version = kSchemaVersion;
  Problem problem = Problem::Local;
  double alpha = 1.0;
  Domain domain = Box{{1.0}};
  Potential potential = ZeroPotential{};

  EigenbasisSpec basis = AnalyticBoxBasis{};  // local; empty modes_per_dim means the default
  LocalOptions local;
  std::vector<int> modes_per_dim;             // classical, periodic, well (enclosure)
  KQuadrature kq;

  // whole space: V = gamma^2 x^2 + (gamma eta)^2 y^2 (+ terms) when harmonic, else `potential`
  std::size_t dimension = 1;
  bool harmonic = false;
  double gamma = 1.0;
  double eta = 1.0;
  std::vector<TrigTerm> harmonic_terms;
  KGridSpec kg;

  PeriodicCoefficients coefficients;

  double V0 = 1e3;
  double enclosure_factor = 4.0;

  Formula formula = Formula::Box1D;
  double L = 1.0;

  ProblemKind bound_kind = ProblemKind::Local;
  int n = 1;
  double D = 1.0;
  double d = 1.0;
  double gamma1 = 1.0;
  double gamma2 = 1.0;

  std::vector<SweepAxis> sweep;
  std::string format = "csv";
  std::string path;
};

inline std::string to_string(Problem p) {
  switch (p) {
    case Problem::Local: return "local";
    case Problem::Classical: return "classical";
    case Problem::WholeSpace: return "wholespace";
    case Problem::Periodic: return "periodic";
    case Problem::Well: return "well";
    case Problem::Asymptotic: return "asymptotic";
    case Problem::Bounds: return "bounds";
  }
  return "?";
}

inline std::string to_string(Formula f) {
  switch (f) {
    case Formula::Box1D: return "box1d";
    case Formula::Box2D: return "box2d";
    case Formula::Harmonic1D: return "harmonic1d";
    case Formula::Harmonic2D: return "harmonic2d";
  }
  return "?";
}

namespace detail {

// Line of the last key on `path` found by a forward scan of the source text.
inline int line_of(const std::string& text, const std::vector<std::string>& path) {
  std::size_t pos = 0;
  bool found = false;
  for (const auto& k : path) {
    if (!k.empty() && k.front() == '[') continue;
    const auto p = text.find("\"" + k + "\"", pos);
    if (p == std::string::npos) break;
    pos = p;
    found = true;
  }
  if (!found) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(pos), '\n'));
}

inline std::string pointer(const std::vector<std::string>& path) {
  std::string s;
  for (const auto& k : path) s += (!k.empty() && k.front() == '[') ? k : "/" + k;
  return s.empty() ? "/" : s;
}

// Strict view of one JSON object: every key must be read, or finish() rejects it.
class Reader {
 public:
  Reader(const json& j, std::vector<std::string> path, const std::string& text)
      : j_(j), path_(std::move(path)), text_(text) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg, const std::string& key = "") const {
    auto p = path_;
    if (!key.empty()) p.push_back(key);
    std::ostringstream os;
    os << "config line " << line_of(text_, p) << ", field " << pointer(p) << ": " << msg;
    throw ConfigError(os.str());
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  double number(const std::string& key, std::optional<double> def = std::nullopt) {
    if (!has(key)) {
      if (!def) fail("required field is missing", key);
      return *def;
    }
    const json& v = raw(key);
    if (!v.is_number()) fail("expected a number", key);
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail("expected a finite number", key);
    return x;
  }

  int integer(const std::string& key, std::optional<int> def = std::nullopt) {
    if (!has(key)) {
      if (!def) fail("required field is missing", key);
      return *def;
    }
    const json& v = raw(key);
    if (!v.is_number_integer()) fail("expected an integer", key);
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool def) {
    if (!has(key)) return def;
    const json& v = raw(key);
    if (!v.is_boolean()) fail("expected true or false", key);
    return v.get<bool>();
  }

  std::string string(const std::string& key, std::optional<std::string> def = std::nullopt) {
    if (!has(key)) {
      if (!def) fail("required field is missing", key);
      return *def;
    }
    const json& v = raw(key);
    if (!v.is_string()) fail("expected a string", key);
    return v.get<std::string>();
  }

  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> def = std::nullopt) {
    if (!has(key)) {
      if (!def) fail("required field is missing", key);
      return *def;
    }
    const json& v = raw(key);
    if (!v.is_array()) fail("expected an array of numbers", key);
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number() || !std::isfinite(e.get<double>())) fail("expected an array of finite numbers", key);
      out.push_back(e.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& key, std::optional<std::vector<int>> def = std::nullopt) {
    if (!has(key)) {
      if (!def) fail("required field is missing", key);
      return *def;
    }
    const json& v = raw(key);
    if (!v.is_array()) fail("expected an array of integers", key);
    std::vector<int> out;
    for (const auto& e : v) {
      if (!e.is_number_integer()) fail("expected an array of integers", key);
      out.push_back(e.get<int>());
    }
    return out;
  }

  Reader child(const std::string& key) {
    auto p = path_;
    p.push_back(key);
    return Reader(raw(key), p, text_);
  }

  Reader element(const std::string& key, std::size_t i) {
    auto p = path_;
    p.push_back(key);
    p.push_back("[" + std::to_string(i) + "]");
    return Reader(raw(key).at(i), p, text_);
  }

  std::size_t array_size(const std::string& key) {
    if (!raw(key).is_array()) fail("expected an array", key);
    return raw(key).size();
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) fail("unknown key", it.key());
  }

 private:
  const json& j_;
  std::vector<std::string> path_;
  const std::string& text_;
  std::set<std::string> seen_;
};

inline Domain parse_domain(Reader r) {
  const std::string type = r.string("type");
  Domain d;
  if (type == "box") {
    d = Box{r.numbers("lengths")};
  } else if (type == "ellipse") {
    d = Ellipse2D{r.number("a"), r.number("b")};
  } else {
    r.fail("unknown domain type '" + type + "' (box, ellipse)", "type");
  }
  r.finish();
  try {
    validate(d);
  } catch (const DomainError& e) {
    r.fail(e.what());
  }
  return d;
}

inline std::vector<TrigTerm> parse_terms(Reader& r) {
  std::vector<TrigTerm> out;
  if (!r.has("terms")) return out;
  const std::size_t n = r.array_size("terms");
  for (std::size_t i = 0; i < n; ++i) {
    Reader t = r.element("terms", i);
    TrigTerm term;
    term.amplitude = t.number("amplitude");
    const std::string kind = t.string("kind");
    if (kind == "cos")
      term.kind = TrigKind::Cos;
    else if (kind == "sin")
      term.kind = TrigKind::Sin;
    else
      t.fail("kind must be cos or sin", "kind");
    term.frequency = t.numbers("frequency");
    t.finish();
    out.push_back(std::move(term));
  }
  return out;
}

inline void parse_potential(Reader r, RunConfig& c) {
  const std::string type = r.string("type");
  if (type == "zero") {
    c.potential = ZeroPotential{};
  } else if (type == "quadratic") {
    c.potential = QuadraticPotential{r.numbers("coefficients"), r.numbers("center", std::vector<double>{})};
  } else if (type == "quadratic_trig") {
    QuadraticTrigPotential q{{r.numbers("coefficients"), r.numbers("center", std::vector<double>{})}, {}};
    q.terms = parse_terms(r);
    c.potential = q;
  } else if (type == "harmonic") {
    if (c.problem != Problem::WholeSpace) r.fail("harmonic potentials are only used by problem wholespace", "type");
    c.harmonic = true;
    c.gamma = r.number("gamma");
    c.eta = r.number("eta", 1.0);
    c.harmonic_terms = parse_terms(r);
  } else if (type == "well") {
    c.potential = WellPotential{r.numbers("lower"), r.numbers("lengths"), r.number("height")};
  } else if (type == "grid") {
    c.potential = GridPotential{r.integers("shape"), r.numbers("lower"), r.numbers("upper"), r.numbers("values")};
  } else {
    r.fail("unknown potential type '" + type + "' (zero, quadratic, quadratic_trig, harmonic, well, grid)", "type");
  }
  r.finish();
  try {
    validate(c.potential);
  } catch (const DomainError& e) {
    r.fail(e.what());
  }
}

inline KQuadrature parse_kq(Reader r) {
  KQuadrature k;
  k.K_max = r.number("K_max", 0.0);
  k.h_k = r.number("h_k", 0.0);
  k.tail = r.boolean("tail", true);
  k.nodes_per_panel = r.integer("nodes_per_panel", k.nodes_per_panel);
  k.grading_levels = r.integer("grading_levels", k.grading_levels);
  if (k.nodes_per_panel < 2) r.fail("must be >= 2", "nodes_per_panel");
  if (k.grading_levels < 0) r.fail("must be >= 0", "grading_levels");
  r.finish();
  return k;
}

inline KGridSpec parse_kg(Reader r) {
  KGridSpec k;
  k.radius = r.numbers("radius", std::vector<double>{});
  k.spacing = r.numbers("spacing", std::vector<double>{});
  k.points_1d = r.integer("points_1d", k.points_1d);
  k.points_2d = r.integer("points_2d", k.points_2d);
  k.radius_factor = r.number("radius_factor", k.radius_factor);
  k.order = r.integer("order", k.order);
  k.eigen_count = r.integer("eigen_count", k.eigen_count);
  if (k.order != 2 && k.order != 4) r.fail("must be 2 or 4", "order");
  if (k.points_1d < 3 || k.points_2d < 3) r.fail("point counts must be >= 3");
  if (k.eigen_count < 2) r.fail("must be >= 2", "eigen_count");
  if (!(k.radius_factor > 0.0)) r.fail("must be > 0", "radius_factor");
  r.finish();
  return k;
}

inline std::vector<double> parse_sweep_values(Reader& r) {
  if (r.has("values")) {
    auto v = r.numbers("values");
    if (v.empty()) r.fail("must not be empty", "values");
    return v;
  }
  if (!r.has("start")) r.fail("either values or start/stop/step is required");
  const double start = r.number("start"), stop = r.number("stop"), step = r.number("step");
  if (!(step > 0.0) || stop < start) r.fail("requires step > 0 and stop >= start");
  const long count = std::lround(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) r.fail("too many sweep points");
  std::vector<double> v;
  // snap to 12 decimals so 0.1 + 2 * 0.1 lands on the double nearest 0.3
  for (long i = 0; i < count; ++i) v.push_back(std::round((start + i * step) * 1e12) / 1e12);
  return v;
}

inline const std::map<Problem, std::set<std::string>>& sweep_parameters() {
  static const std::map<Problem, std::set<std::string>> m{
      {Problem::Local, {"alpha", "d", "L"}},
      {Problem::Classical, {"alpha", "d", "L"}},
      {Problem::WholeSpace, {"alpha", "gamma", "eta"}},
      {Problem::Periodic, {"alpha", "ratio", "L"}},
      {Problem::Well, {"alpha", "V0"}},
      {Problem::Asymptotic, {"alpha", "gamma", "eta", "L"}},
      {Problem::Bounds, {"alpha", "D", "d", "gamma1", "gamma2"}},
  };
  return m;
}

}  // namespace detail

/// Sets one sweep parameter on a copy of the configuration.
inline void apply_parameter(RunConfig& c, const std::string& name, double v) {
  if (name == "alpha") {
    c.alpha = v;
  } else if (name == "V0") {
    c.V0 = v;
  } else if (name == "gamma") {
    c.gamma = v;
  } else if (name == "eta") {
    c.eta = v;
  } else if (name == "gamma1") {
    c.gamma1 = v;
  } else if (name == "gamma2") {
    c.gamma2 = v;
  } else if (name == "D") {
    c.D = v;
  } else if (name == "ratio") {
    c.domain = Box{{v, 1.0}};
  } else if (name == "L") {
    if (c.problem == Problem::Asymptotic) {
      c.L = v;
    } else if (auto* b = std::get_if<Box>(&c.domain)) {
      b->lengths.at(0) = v;
    } else {
      throw ConfigError("sweep parameter L needs a box domain");
    }
  } else if (name == "d") {
    if (c.problem == Problem::Bounds) {
      c.d = v;
    } else if (auto* b = std::get_if<Box>(&c.domain)) {
      if (b->dim() < 2) throw ConfigError("sweep parameter d needs a 2D box");
      b->lengths[1] = v;
    } else {
      std::get<Ellipse2D>(c.domain).semi_axis_minor = v;
    }
  } else {
    throw ConfigError("unknown sweep parameter '" + name + "'");
  }
}

/// Checks what the solvers would otherwise reject, so bad inputs surface as config errors.
inline void validate_point(const RunConfig& c) {
  FractionalOrder a(c.alpha);
  (void)a;
  const bool uses_domain = c.problem != Problem::WholeSpace && c.problem != Problem::Asymptotic &&
                           c.problem != Problem::Bounds;
  if (uses_domain) validate(c.domain);
  validate(c.potential);
  const auto box_only = [&](const char* what) {
    if (!std::holds_alternative<Box>(c.domain)) throw DomainError(std::string(what) + " needs a box domain");
  };
  switch (c.problem) {
    case Problem::Local:
      if (std::holds_alternative<AnalyticBoxBasis>(c.basis)) box_only("the sine basis");
      break;
    case Problem::Classical:
      box_only("problem classical");
      if (dimension(c.domain) > 2) throw DomainError("problem classical supports n = 1, 2");
      break;
    case Problem::Periodic:
      box_only("problem periodic");
      break;
    case Problem::Well:
      box_only("problem well");
      if (!(c.V0 > 0.0)) throw DomainError("well: V0 must be > 0");
      if (c.enclosure_factor < 4.0) throw DomainError("well: enclosure_factor must be >= 4");
      break;
    case Problem::WholeSpace:
      if (c.dimension < 1 || c.dimension > 2) throw DomainError("wholespace: dimension must be 1 or 2");
      if (c.harmonic) {
        if (!(c.gamma > 0.0)) throw DomainError("wholespace: gamma must be > 0");
        if (!(c.eta >= 1.0)) throw DomainError("wholespace: eta must be >= 1");
        if (c.dimension == 1 && c.eta != 1.0) throw DomainError("wholespace: eta needs dimension 2");
      } else if (!std::holds_alternative<QuadraticPotential>(c.potential) &&
                 !std::holds_alternative<QuadraticTrigPotential>(c.potential)) {
        throw DomainError("wholespace: potential must be harmonic, quadratic or quadratic_trig");
      }
      break;
    case Problem::Asymptotic:
      if (c.formula == Formula::Box2D && !(c.L > 0.0 && c.L <= 1.0)) throw DomainError("asymptotic: L must lie in (0,1]");
      if ((c.formula == Formula::Harmonic1D || c.formula == Formula::Harmonic2D) && !(c.gamma > 0.0))
        throw DomainError("asymptotic: gamma must be > 0");
      if (c.formula == Formula::Harmonic2D && !(c.eta >= 1.0)) throw DomainError("asymptotic: eta must be >= 1");
      break;
    case Problem::Bounds:
      if (c.n < 1 || c.n > 3) throw DomainError("bounds: n must be 1, 2 or 3");
      if (!(c.D > 0.0 && c.d > 0.0 && c.d <= c.D)) throw DomainError("bounds: requires 0 < d <= D");
      if (!(c.gamma1 > 0.0 && c.gamma2 >= c.gamma1)) throw DomainError("bounds: requires 0 < gamma1 <= gamma2");
      break;
  }
}

/// Parses and validates a configuration document.
inline RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const int line = 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
    std::ostringstream os;
    os << "config line " << line << ": malformed JSON (" << e.what() << ")";
    throw ConfigError(os.str());
  }
  detail::Reader r(doc, {}, text);
  RunConfig c;
  c.schema_version = r.integer("schema_version");
  if (c.schema_version != kSchemaVersion)
    r.fail("unsupported schema_version " + std::to_string(c.schema_version) + " (expected " +
               std::to_string(kSchemaVersion) + ")",
           "schema_version");
  const std::string problem = r.string("problem");
  static const std::map<std::string, Problem> problems{
      {"local", Problem::Local},       {"classical", Problem::Classical},   {"wholespace", Problem::WholeSpace},
      {"periodic", Problem::Periodic}, {"well", Problem::Well},             {"asymptotic", Problem::Asymptotic},
      {"bounds", Problem::Bounds}};
  const auto pit = problems.find(problem);
  if (pit == problems.end()) r.fail("unknown problem '" + problem + "'", "problem");
  c.problem = pit->second;
  c.alpha = r.number("alpha", 1.0);
  try {
    FractionalOrder check(c.alpha);
  } catch (const DomainError& e) {
    r.fail(e.what(), "alpha");
  }

  const Problem p = c.problem;
  const bool domain_problem = p == Problem::Local || p == Problem::Classical || p == Problem::Periodic || p == Problem::Well;
  if (domain_problem && r.has("domain")) c.domain = detail::parse_domain(r.child("domain"));
  if ((p == Problem::Local || p == Problem::Classical || p == Problem::WholeSpace) && r.has("potential"))
    detail::parse_potential(r.child("potential"), c);

  if (p == Problem::Local && r.has("basis")) {
    detail::Reader b = r.child("basis");
    const std::string type = b.string("type");
    if (type == "sine") {
      c.basis = AnalyticBoxBasis{b.integers("modes_per_dim", std::vector<int>{})};
      for (int m : std::get<AnalyticBoxBasis>(c.basis).modes_per_dim)
        if (m < 2) b.fail("entries must be >= 2", "modes_per_dim");
      c.local.refine = b.boolean("refine", false);
      c.local.refine_tol = b.number("refine_tol", c.local.refine_tol);
      c.local.refine_cap = b.integer("refine_cap", c.local.refine_cap);
    } else if (type == "fd") {
      FiniteDifferenceBasis f;
      f.h = b.number("h", f.h);
      f.mode_count = b.integer("modes", f.mode_count);
      if (!(f.h > 0.0)) b.fail("must be > 0", "h");
      if (f.mode_count < 2) b.fail("must be >= 2", "modes");
      c.basis = f;
    } else {
      b.fail("unknown basis type '" + type + "' (sine, fd)", "type");
    }
    b.finish();
  }
  if (p == Problem::Classical || p == Problem::Periodic || p == Problem::Well) {
    c.modes_per_dim = r.integers("modes_per_dim", std::vector<int>{});
    for (int m : c.modes_per_dim)
      if (m < 2) r.fail("entries must be >= 2", "modes_per_dim");
  }
  if ((p == Problem::Classical || p == Problem::Well) && r.has("k_quadrature"))
    c.kq = detail::parse_kq(r.child("k_quadrature"));
  if (p == Problem::WholeSpace) {
    c.dimension = static_cast<std::size_t>(r.integer("dimension", 1));
    if (r.has("k_grid")) c.kg = detail::parse_kg(r.child("k_grid"));
  }
  if (p == Problem::Periodic && r.has("coefficients")) {
    const std::size_t n = r.array_size("coefficients");
    for (std::size_t i = 0; i < n; ++i) {
      detail::Reader e = r.element("coefficients", i);
      const auto q = e.integers("frequency");
      c.coefficients[q] = {e.number("re", 0.0), e.number("im", 0.0)};
      e.finish();
    }
  }
  if (p == Problem::Well) {
    c.V0 = r.number("V0", c.V0);
    c.enclosure_factor = r.number("enclosure_factor", c.enclosure_factor);
  }
  if (p == Problem::Asymptotic) {
    static const std::map<std::string, Formula> formulas{{"box1d", Formula::Box1D},
                                                         {"box2d", Formula::Box2D},
                                                         {"harmonic1d", Formula::Harmonic1D},
                                                         {"harmonic2d", Formula::Harmonic2D}};
    const std::string f = r.string("formula");
    const auto it = formulas.find(f);
    if (it == formulas.end()) r.fail("unknown formula '" + f + "'", "formula");
    c.formula = it->second;
    c.gamma = r.number("gamma", 1.0);
    c.eta = r.number("eta", 1.0);
    c.L = r.number("L", 1.0);
  }
  if (p == Problem::Bounds) {
    const std::string kind = r.string("kind");
    if (kind == "local")
      c.bound_kind = ProblemKind::Local;
    else if (kind == "classical")
      c.bound_kind = ProblemKind::Classical;
    else if (kind == "wholespace")
      c.bound_kind = ProblemKind::WholeSpace;
    else
      r.fail("kind must be local, classical or wholespace", "kind");
    c.n = r.integer("n", 1);
    c.D = r.number("D", 1.0);
    c.d = r.number("d", c.D);
    c.gamma1 = r.number("gamma1", 1.0);
    c.gamma2 = r.number("gamma2", c.gamma1);
  }

  if (r.has("sweep")) {
    const json& s = r.raw("sweep");
    auto read_axis = [&](detail::Reader a) {
      SweepAxis axis;
      axis.parameter = a.string("parameter");
      if (!detail::sweep_parameters().at(p).count(axis.parameter))
        a.fail("parameter '" + axis.parameter + "' cannot be swept for problem " + to_string(p), "parameter");
      axis.values = detail::parse_sweep_values(a);
      a.finish();
      return axis;
    };
    if (s.is_object()) {
      c.sweep.push_back(read_axis(r.child("sweep")));
    } else if (s.is_array()) {
      for (std::size_t i = 0; i < s.size(); ++i) c.sweep.push_back(read_axis(r.element("sweep", i)));
    } else {
      r.fail("expected an object or an array of objects", "sweep");
    }
  }
  if (r.has("output")) {
    detail::Reader o = r.child("output");
    c.format = o.string("format", "csv");
    if (c.format != "csv" && c.format != "json") o.fail("must be csv or json", "format");
    c.path = o.string("path", "");
    o.finish();
  }
  r.finish();

  // every sweep point must be valid, not just the base point
  std::vector<std::size_t> idx(c.sweep.size(), 0);
  std::size_t total = 1;
  for (const auto& a : c.sweep) total *= a.values.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    RunConfig pt = c;
    std::size_t rest = flat;
    std::string where;
    for (std::size_t i = c.sweep.size(); i-- > 0;) {
      const auto& a = c.sweep[i];
      const double v = a.values[rest % a.values.size()];
      rest /= a.values.size();
      apply_parameter(pt, a.parameter, v);
      where = " (" + a.parameter + " = " + format_real(v) + ")" + where;
    }
    try {
      validate_point(pt);
    } catch (const DomainError& e) {
      r.fail(std::string(e.what()) + where, c.sweep.empty() ? "" : "sweep");
    }
  }
  return c;
}

}  // namespace fracgap::cli
