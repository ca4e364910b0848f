#pragma once

#include <iosfwd>
#include <vector>

#include "ouhjb/market_model.hpp"

namespace ouhjb {

/// Per-asset constants of the decoupled regime (sigma sigma' diagonal,
/// varrho = 0), where the Riccati equation splits into n scalar equations.
struct DecoupledParams {
  int n = 0;
  double r = 0.0;
  double gamma = 0.5;
  double rho0 = 0.0;
  double T = 1.0;
  Vec q;      // (sigma sigma')_ii
  Vec alpha;
  Vec mu;
  Vec w;
  Vec rho;
};

/// Throws NotDecoupled when off-diagonal Q or varrho entries exceed 1e-14
/// (relative to max(1, max_i Q_ii)).
DecoupledParams decoupled_params(const DerivedConstants& consts);

/// Oracle values on a uniform output grid over [t0, T].
struct BenchmarkProfile {
  std::vector<double> times;
  std::vector<Vec> g;   // diagonal of g
  std::vector<Vec> f;
  std::vector<double> f0;
};

/// Benchmark sampled on the solver grid t_k = k T / K.
struct BenchmarkTable {
  int K = 0;
  double T = 0.0;
  BenchmarkProfile values;
  double quadrature_error = 0.0;  // Richardson estimate (resolution vs double)
  int refine = 0;                 // output intervals per solver interval used
};

struct QuadratureOptions {
  int refine = 10;              // output intervals per solver interval (must be even)
  int point_intervals = 2000;   // intervals for single-time queries (must be even)
  double tolerance = 1e-8;      // ResolutionTooCoarse threshold
  int max_doublings = 6;        // resolution doublings tried before giving up
};

/// Closed-form g and composite-Simpson quadrature for f and f0 in the
/// decoupled regime.
///
/// Each output interval is split into two Simpson panels. The inner integral
/// of kappa is accumulated panel by panel from T with analytic midpoint
/// values, so f is available at every sub-node and f0 at every output node.
class ClosedFormOracle {
 public:
  explicit ClosedFormOracle(const DerivedConstants& consts, QuadratureOptions options = {});
  explicit ClosedFormOracle(DecoupledParams params, QuadratureOptions options = {});

  const DecoupledParams& params() const { return p_; }

  double g(int i, double t) const;
  double kappa(int i, double t) const;
  double zeta(int i, double t) const;
  Mat g_matrix(double t) const;

  double f(int i, double t) const;
  double f0(double t) const;

  /// Profile with M output intervals on [t0, T] (M >= 1, no Richardson check).
  BenchmarkProfile profile(double t0, int M) const;

  /// Benchmark on the K-step solver grid, certified by doubling the
  /// resolution. Starting from `refine`, the resolution is doubled until the
  /// estimate meets the tolerance; ResolutionTooCoarse after `max_doublings`.
  BenchmarkTable table(int K) const;

  /// phi(t_k, S) = phi1 + int_t^T phi1 du on the K-step solver grid, with the
  /// outer integral by composite Simpson on the oracle's output grid.
  std::vector<double> phi_on_grid(const Vec& S, int K) const;
  /// Same for several states; result[s][k]. Shares the quadrature profile.
  std::vector<std::vector<double>> phi_on_grid(const std::vector<Vec>& states, int K) const;

 private:
  DecoupledParams p_;
  QuadratureOptions options_;
};

/// Columns: t, g_i, f_i, f0 for the benchmark table.
void write_csv(std::ostream& out, const BenchmarkTable& table);

}  // namespace ouhjb
