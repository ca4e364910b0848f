#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ouhjb/coefficients.hpp"
#include "ouhjb/market_model.hpp"
#include "ouhjb/pde_reference.hpp"
#include "ouhjb/simulator.hpp"

namespace ouhjb {

struct RandomDecoupledSpec {
  int n = 10;
  std::uint64_t seed = 1;
};

struct SolverConfig {
  CoefficientScheme scheme = CoefficientScheme::Erow3RK3;
  int steps = 100;
};

struct ConvergenceConfig {
  int k_min = 3;
  int k_max = 7;
};

struct VerifyConfig {
  RiccatiScheme scheme = RiccatiScheme::Erow3;
  int steps = 100;
  double sigma_start = 0.0;
};

struct FdmConfig {
  FdmSpec spec;
  int solver_steps = 25;  // Erow3-RK3 steps for the comparison
  int repeats = 5;        // timing repetitions; the minimum is reported
};

struct SimulateConfig {
  SimulationOptions options;
  int phi_steps = 50;
  bool redraw_random = true;
  std::vector<std::string> policies;  // empty: all
};

struct RunConfig {
  ModelParams model;
  std::optional<RandomDecoupledSpec> random_model;  // set when generated
  SolverConfig solver;
  ConvergenceConfig convergence;
  VerifyConfig verify;
  FdmConfig fdm;
  SimulateConfig simulate;
  std::string output = "out";
};

/// Parses and validates a configuration document. Unknown keys, wrong types
/// and invalid model parameters raise ConfigError naming the field path
/// (e.g. "simulate.S0[1]").
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Normalized echo of every effective setting.
nlohmann::json to_json(const RunConfig& config);

CoefficientScheme parse_coefficient_scheme(const std::string& name);

}  // namespace ouhjb
