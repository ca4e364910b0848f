#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "ouhjb/market_model.hpp"
#include "ouhjb/value_policy.hpp"

namespace ouhjb {

/// Per-path randomness owned by a policy, independent of the price noise.
struct PolicyStream {
  std::mt19937_64 rng;
  std::vector<double> memo;  // draws a policy may keep for the whole path
};

struct Policy {
  std::string name;
  std::string pi_text;  // human-readable rule columns for the summary table
  std::string c_text;
  std::function<PolicyAction(double t, double x, const Vec& S, PolicyStream& stream)> rule;
};

struct SimulationOptions {
  int paths = 2000;
  int policy_steps = 50;
  int substeps = 4;  // simulation steps per policy step
  std::uint64_t seed = 20240601;
  double x0 = 25.0;
  Vec S0;
  bool exact_ou = false;  // exact OU transition instead of Euler-Maruyama for S
  int record_paths = 0;   // keep full trajectories for the first paths
  int threads = 0;        // 0: hardware concurrency
};

struct PathRecord {
  std::vector<double> t;
  std::vector<Vec> S;
  std::vector<double> X;
  std::vector<Vec> pi;
  std::vector<double> C;
  std::vector<double> psi;
};

struct SimulationEnsemble {
  std::string policy;
  std::uint64_t seed = 0;
  int steps = 0;
  double dt = 0.0;
  std::vector<double> utility;   // per-path realized objective
  std::vector<double> terminal_wealth;
  std::vector<char> absorbed;
  int absorbed_count = 0;
  std::vector<PathRecord> recorded;
};

/// Simulates M paths on N = policy_steps * substeps uniform steps.
///
/// Price noise for path m comes from a generator seeded by (seed, m), so two
/// policies run with the same seed see identical increments. S uses
/// Euler-Maruyama (or the exact transition with `exact_ou`), X uses
///   X' = e^{r dt} X + (pi'(diag(alpha)(mu - S) - r e) - C) dt + pi' sigma dB,
/// which is exact for the riskless part. Wealth that would become negative is
/// absorbed at zero with pi = C = 0 afterwards. The log discount factor is
/// accumulated by the trapezoid rule.
///
/// Throws NonFinitePath naming the path and step.
SimulationEnsemble simulate_paths(const DerivedConstants& consts, const Policy& policy,
                                  const SimulationOptions& options);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

Estimate mean_utility(const SimulationEnsemble& ensemble);

/// Mean and standard error of the per-path difference a - b (same seed).
Estimate paired_difference(const SimulationEnsemble& a, const SimulationEnsemble& b);

struct PolicyLibraryOptions {
  bool redraw_random_each_step = true;
};

/// The eleven comparison policies for a two-asset market, in table order; the
/// last one is the feedback policy from `phi`. Throws DimensionMismatch unless
/// n = 2 and MissingPhi when `phi` is null.
std::vector<Policy> policy_library(const DerivedConstants& consts, const PhiEvaluator* phi,
                                   const PolicyLibraryOptions& options = {});

struct PolicyComparisonRow {
  const Policy* policy = nullptr;
  Estimate utility;
  Estimate advantage;  // reference policy minus this policy, paired
  int absorbed = 0;
};

/// Columns: policy, pi, C, mean_utility, std_error, numerical_minus_policy,
/// paired_std_error, absorbed_paths.
void write_comparison_csv(std::ostream& out, const std::vector<PolicyComparisonRow>& rows);

/// Columns: path, t, S_i, X, pi_i, C, psi for every recorded path.
void write_paths_csv(std::ostream& out, const SimulationEnsemble& ensemble);

}  // namespace ouhjb
