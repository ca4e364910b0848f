#pragma once

#include <iosfwd>
#include <vector>

#include "ouhjb/coefficients.hpp"
#include "ouhjb/market_model.hpp"

namespace ouhjb {

enum class TimeQuadrature { Trapezoid, Simpson };

struct PolicyAction {
  Vec pi;          // amounts held in the risky assets
  double c = 0.0;  // consumption rate
};

/// Evaluates phi(t,S) = phi1(t,S) + int_t^T phi1(u,S) du from a coefficient
/// path, where phi1 = exp(S'g S + S'f + f0).
///
/// g, f, f0 are interpolated linearly in t between grid nodes. The time
/// integral uses the composite trapezoid rule for second-order paths and
/// composite Simpson (with a 3/8 tail on odd interval counts) for third-order
/// paths; a lone last interval there uses the parabola through the node
/// before it. The S-gradient is the exact derivative of the discrete phi.
///
/// Read-only after construction; safe to share across threads.
class PhiEvaluator {
 public:
  PhiEvaluator(const DerivedConstants& consts, CoefficientPath path, double exponent_cap = 700.0);
  PhiEvaluator(const DerivedConstants& consts, CoefficientPath path, TimeQuadrature quadrature,
               double exponent_cap = 700.0);

  const DerivedConstants& constants() const { return consts_; }
  const CoefficientPath& path() const { return path_; }
  TimeQuadrature quadrature() const { return quadrature_; }

  double phi1(double t, const Vec& S) const;
  double phi(double t, const Vec& S) const;
  Vec grad_phi(double t, const Vec& S) const;

  /// phi(t_k, S) for k = 0..K; equal to phi(path().time(k), S) but computes
  /// each phi1 node value once.
  std::vector<double> phi_at_nodes(const Vec& S) const;

  /// phi and its gradient from one pass over the quadrature nodes.
  void phi_and_grad(double t, const Vec& S, double& phi, Vec& grad) const;

  /// gamma^{-1} psi^{1-gamma} x^gamma phi^{1-gamma}.
  double value(double t, double x, const Vec& S, double psi) const;

  /// pi* = x/(1-gamma) Q^{-1}(diag(alpha)(mu - S) - r e) + x grad_phi/phi,
  /// C* = x/phi.
  PolicyAction feedback_policy(double t, double x, const Vec& S) const;

 private:
  struct Coefficients {
    Mat g;
    Vec f;
    double f0;
  };

  Coefficients interpolate(double t, int& k_next) const;
  double exponent(const Mat& g, const Vec& f, double f0, const Vec& S) const;
  double checked_exp(double e) const;

  DerivedConstants consts_;
  CoefficientPath path_;
  TimeQuadrature quadrature_;
  double exponent_cap_;
};

/// Residual of the reduced PDE
///   phi_t + b(S)' D phi + H(S) phi + tr(Q D^2 phi)/2 + 1,
///   b(S) = diag(alpha)(w - S) + gamma/(1-gamma) (diag(alpha)(mu - S) - r e),
/// at grid node k (2 <= k <= K-2) with every derivative taken by finite
/// differences: fourth-order central in t on the solver grid, fourth-order
/// central in each S_i with step `dS`, and second-order cross differences for
/// mixed S derivatives.
double pde_residual(const PhiEvaluator& phi, int k, const Vec& S, double dS = 4e-3);

/// Rows t, S_1..S_n, phi over the product of `times` and `states`.
void write_phi_lattice(std::ostream& out, const PhiEvaluator& phi, const std::vector<double>& times,
                       const std::vector<Vec>& states);

/// Quadrature weights for int_{x_0}^{x_m} on a uniform grid with m intervals
/// of width h. For m = 1 every rule is the trapezoid.
std::vector<double> uniform_quadrature_weights(int m, double h, TimeQuadrature rule);

}  // namespace ouhjb
