#pragma once

#include <Eigen/Dense>

namespace ouhjb {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Market and preference constants for n log-OU assets plus one bond.
///
/// Log-prices follow dS = diag(alpha)(w - S) dt + sigma dB, utility is
/// gamma^{-1} psi^{1-gamma} c^gamma with the state-dependent discount
/// psi(t) = exp(-1/(1-gamma) * int (rho0 + S'rho + S' varrho S)).
struct ModelParams {
  int n = 0;
  double r = 0.0;
  double gamma = 0.5;
  double rho0 = 0.0;
  Vec rho;
  Mat varrho;
  Vec alpha;
  Vec mu;
  Mat sigma;
  double T = 1.0;
};

struct ValidationOptions {
  double varrho_asymmetry_tol = 1e-10;  // relative Frobenius
  double sigma_rank_tol = 1e-12;        // relative to ||sigma||_F
};

/// Constants derived once from validated parameters. Holds a copy of the
/// (symmetrized) parameters so downstream code needs only this object.
struct DerivedConstants {
  ModelParams params;
  Vec w;       // mu_i + |sigma_i|^2 / (2 alpha_i)
  Mat Q;       // sigma sigma'
  Mat Qinv;
  Mat Adiag;   // diag(alpha)
  Mat Gamma;   // diag(alpha) Q^{-1} diag(alpha)
  Vec excess;  // diag(alpha) mu - r e

  int n() const { return params.n; }
  double gamma() const { return params.gamma; }
  double one_minus_gamma() const { return 1.0 - params.gamma; }
};

/// Checks every parameter invariant and builds the derived constants.
/// Throws Error with DimensionMismatch, NonPositiveAlpha, SingularSigma,
/// GammaOutOfRange, AsymmetricVarrho or InvalidParameter.
DerivedConstants validate(const ModelParams& params,
                          const ValidationOptions& options = {});

/// Builds derived constants without any checks. Intended for synthetic
/// degenerate cases (alpha = 0, sigma = 0) in tests; Qinv falls back to the
/// pseudo-inverse.
DerivedConstants derive_unchecked(const ModelParams& params);

/// Quadratic field H(S) = r gamma/(1-gamma) + beta(S)
///   + gamma (excess - diag(alpha) S)' Q^{-1} (excess - diag(alpha) S) / (2(1-gamma)^2).
double field_H(const DerivedConstants& consts, const Vec& S);

/// beta(S) = -(rho0 + S'rho + S' varrho S)/(1-gamma).
double discount_rate(const DerivedConstants& consts, const Vec& S);

}  // namespace ouhjb
