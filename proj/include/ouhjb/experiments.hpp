#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ouhjb/coefficients.hpp"
#include "ouhjb/config.hpp"
#include "ouhjb/pde_reference.hpp"
#include "ouhjb/simulator.hpp"
#include "ouhjb/value_policy.hpp"

namespace ouhjb {

/// Least-squares slope of log(y) against log(x). Needs two or more points
/// with positive values; returns nullopt otherwise.
std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- accuracy against the decoupled benchmark ----

struct ConvergenceRow {
  CoefficientScheme scheme = CoefficientScheme::Erow3RK3;
  int k = 0;  // h = T / 2^k
  int K = 0;
  double h = 0.0;
  double err_g = 0.0;        // max_k max_i |g_ii - benchmark|
  double offdiag_g = 0.0;    // max_k Frobenius norm of the off-diagonal part
  double err_f = 0.0;
  double err_f0 = 0.0;
  double wall_seconds = 0.0;  // solver only
};

struct ConvergenceSlopes {
  CoefficientScheme scheme = CoefficientScheme::Erow3RK3;
  std::optional<double> g, f, f0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  std::vector<ConvergenceSlopes> slopes;
};

/// Both schemes at K = 2^k, k = k_min..k_max. Throws NotDecoupled outside the
/// decoupled regime.
ConvergenceStudy convergence_study(const DerivedConstants& consts, int k_min, int k_max);

// ---- FDM comparison (one asset) ----

struct SurfaceError {
  std::vector<double> times;
  std::vector<double> S;
  Mat value;       // times x S
  Mat benchmark;
  double max_error = 0.0;
  /// Richardson estimate of the max-norm error from grids h, h/2, h/4:
  /// safety * d1 * 2^p / (2^p - 1) with d1 = |u_h - u_{h/2}|, p observed.
  double self_estimate = 0.0;
  double observed_order = 0.0;
  double wall_seconds = 0.0;  // best of the configured repeats
};

struct FdmComparison {
  SurfaceError fdm;
  SurfaceError erow3;
  double fdm_space_order = 0.0;  // N_S, 2N_S, 4N_S at fixed N_t
  double safety_factor = 1.25;
};

FdmComparison compare_fdm(const DerivedConstants& consts, const FdmConfig& config);

// ---- policy comparison ----

struct PolicyComparison {
  std::vector<Policy> policies;
  std::vector<SimulationEnsemble> ensembles;  // matches `policies`
  std::vector<PolicyComparisonRow> rows;
  int reference = -1;  // index of the numerical policy
};

/// Simulates every library policy (filtered by name when `names` is non-empty;
/// the numerical policy is always included) with the same seed.
PolicyComparison compare_policies(const DerivedConstants& consts, const PhiEvaluator& phi,
                                  const SimulateConfig& config);

// ---- commands ----

struct CommandOptions {
  bool force = false;
  bool quiet = false;
};

/// Exit codes: 0 success, 1 computational failure, 2 configuration error,
/// 3 verification failed. Each command writes its CSVs and a
/// `<command>_summary.json` into `config.output`.
int cmd_solve(const RunConfig& config, const CommandOptions& options = {});
int cmd_convergence(const RunConfig& config, const CommandOptions& options = {});
int cmd_verify(const RunConfig& config, const CommandOptions& options = {});
int cmd_compare_fdm(const RunConfig& config, const CommandOptions& options = {});
int cmd_simulate(const RunConfig& config, const CommandOptions& options = {});

/// Dispatches by name ("solve", "convergence", "verify", "compare-fdm",
/// "simulate") and maps exceptions to exit codes, printing them to stderr.
int run_command(const std::string& name, const RunConfig& config, const CommandOptions& options);

const char* version_string();

}  // namespace ouhjb
