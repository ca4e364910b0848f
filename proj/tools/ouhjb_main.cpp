#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "ouhjb/config.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/experiments.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheme;
  std::optional<int> steps;
  std::optional<int> paths;
  bool force = false;
  bool quiet = false;
};

// Flags are folded into the document so they pass the same validation as
// values written in the file.
nlohmann::json load_document(const Overrides& o) {
  std::ifstream in(o.config);
  if (!in) throw ouhjb::Error(ouhjb::ErrorCode::ConfigError, o.config + ": cannot open");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::parse_error& e) {
    throw ouhjb::Error(ouhjb::ErrorCode::ConfigError, o.config + ": " + e.what());
  }
  if (!doc.is_object()) throw ouhjb::Error(ouhjb::ErrorCode::ConfigError, o.config + ": expected an object");
  if (o.out) doc["output"] = *o.out;
  if (o.seed) doc["simulate"]["seed"] = *o.seed;
  if (o.scheme) doc["solver"]["scheme"] = *o.scheme;
  if (o.steps) doc["solver"]["steps"] = *o.steps;
  if (o.paths) doc["simulate"]["paths"] = *o.paths;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exponential-integrator solver for the OU portfolio problem"};
  app.set_version_flag("--version", std::string(ouhjb::version_string()));
  app.require_subcommand(1);
  app.fallthrough();

  Overrides o;
  app.add_option("--config", o.config, "JSON configuration file")->required();
  app.add_option("--out", o.out, "output directory");
  app.add_option("--seed", o.seed, "simulation seed");
  app.add_option("--scheme", o.scheme, "expeuler-rk2 or erow3-rk3");
  app.add_option("--steps", o.steps, "solver steps K");
  app.add_option("--paths", o.paths, "Monte Carlo paths");
  app.add_flag("--force", o.force, "simulate even when verification fails");
  app.add_flag("-q,--quiet", o.quiet, "no progress output");

  for (const char* name : {"solve", "convergence", "verify", "compare-fdm", "simulate"}) {
    app.add_subcommand(name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  ouhjb::RunConfig config;
  try {
    config = ouhjb::parse_config(load_document(o));
  } catch (const ouhjb::Error& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return e.code() == ouhjb::ErrorCode::ConfigError ? 2 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << command << ": " << e.what() << "\n";
    return 2;
  }
  return ouhjb::run_command(command, config, {o.force, o.quiet});
}
