// fracgap: batch front-end. Reads a JSON run configuration, dispatches to the solvers
// and writes one CSV or JSON table.
//
// exit codes: 0 ok, 2 solver failure, 3 configuration / domain error

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fracgap/runner.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::string format;
  int threads = 1;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fracgap::ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int execute(fracgap::cli::Subcommand sub, const Flags& f) {
  using namespace fracgap;
  cli::RunConfig cfg = cli::parse_config(slurp(f.config));
  std::string format = f.format.empty() ? cfg.format : f.format;
  std::string path = f.out.empty() ? cfg.path : f.out;
  if (format != "csv" && format != "json") throw ConfigError("unknown output format '" + format + "'");

  int threads = f.threads;
  if (const char* env = std::getenv("FRACGAP_THREADS"); env && *env) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) throw ConfigError(std::string("FRACGAP_THREADS must be a positive integer, got '") + env + "'");
    threads = static_cast<int>(v);
  }

  const cli::Table t = cli::run(cfg, sub, threads);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!path.empty() && path != "-") {
    file.open(path, std::ios::binary);
    if (!file) throw Error("cannot open output file '" + path + "'");
    os = &file;
  }
  if (format == "csv")
    cli::write_csv(*os, t);
  else
    cli::write_json(*os, t);
  os->flush();

  if (t.failures) std::cerr << "fracgap: " << t.failures << " of " << t.rows.size() << " points failed\n";
  if (t.findings) std::cerr << "fracgap: " << t.findings << " negative margin row(s)\n";
  return t.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  using fracgap::cli::Subcommand;
  CLI::App app{"fracgap: fundamental gaps of fractional Schroedinger operators"};
  app.require_subcommand(1);

  Flags flags;
  Subcommand chosen = Subcommand::Solve;
  const std::pair<const char*, Subcommand> subs[] = {
      {"solve", Subcommand::Solve},           {"sweep", Subcommand::Sweep},
      {"asymptotic", Subcommand::Asymptotic}, {"bounds", Subcommand::Bounds},
      {"well-study", Subcommand::WellStudy},  {"phase-diagram", Subcommand::PhaseDiagram}};
  for (const auto& [name, kind] : subs) {
    CLI::App* s = app.add_subcommand(name, std::string("run the ") + name + " workflow");
    s->add_option("--config", flags.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    s->add_option("--out", flags.out, "output file (default: config output.path, else stdout)");
    s->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    s->add_option("--threads", flags.threads, "sweep workers")->check(CLI::PositiveNumber);
    s->callback([&chosen, k = kind] { chosen = k; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    return execute(chosen, flags);
  } catch (const fracgap::ConfigError& e) {
    std::cerr << "fracgap: config error: " << e.what() << "\n";
    return 3;
  } catch (const fracgap::DomainError& e) {
    std::cerr << "fracgap: config error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "fracgap: " << e.what() << "\n";
    return 2;
  }
}
