#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "ouhjb/market_model.hpp"
#include "ouhjb/riccati.hpp"

namespace ouhjb {

/// Law of S(tau) given S(t0) = S0: normal with mean eta and covariance Sigma.
struct OUMoments {
  double tau = 0.0;
  Vec eta;
  Mat Sigma;
};

OUMoments ou_moments(const DerivedConstants& consts, double t0, const Vec& S0, double tau);

/// Extremal eigenvalues of A Sigma for symmetric A and PSD Sigma, computed from
/// the similar symmetric matrix Sigma^{1/2} A Sigma^{1/2}. Throws EigenFailure
/// if Sigma has an eigenvalue below -1e-12 |Sigma| or a general eigensolve of
/// A Sigma shows imaginary parts above 1e-10 (relative).
struct ExtremeEigenvalues {
  double min = 0.0;
  double max = 0.0;
};
ExtremeEigenvalues product_eigenvalues(const Mat& A, const Mat& Sigma);

// Eigenvalue conditions, tau over the grid:
//   GUpper       lambda_max(g Sigma)          < 1/(4(1-gamma))
//   VarrhoLower  -lambda_min(varrho Sigma)    < 1/(8(1-gamma))
//   GammaValue   lambda_max(Gamma Sigma)      < 1/(8 gamma)
//   PiValue      lambda_max(Pi Sigma)         < 1/(256 gamma^2)
//   GammaPolicy  lambda_max(Gamma Sigma)      < min(1/8, (1-gamma)^2/gamma^2)
//   PiPolicy     lambda_max(Pi Sigma)         < 1/256
//   GLower       -lambda_min(g Sigma)         < 1/4
//   GIncrement   lambda_max((g(u)-g(t)) Sigma(t)) < 1/16 for u >= t
// The first four certify the value function, the rest the policy.
enum class Condition { GUpper, VarrhoLower, GammaValue, PiValue, GammaPolicy, PiPolicy, GLower, GIncrement };
inline constexpr int kConditionCount = 8;
const char* condition_label(Condition c);  // snake_case, e.g. "gamma_policy"

struct ConditionResult {
  Condition id = Condition::GUpper;
  double bound = 0.0;
  /// bound - extremal eigenvalue per grid node. For GIncrement the entry at node t
  /// is the minimum over all nodes u >= t.
  std::vector<double> margins;
  double min_margin = 0.0;
  int argmin = 0;
  bool passed = false;
  /// Nodes k where the margin changes sign between k and k+1 while both
  /// magnitudes exceed the strictness threshold; the grid is too coarse there.
  std::vector<int> refine_at;
};

struct VerificationOptions {
  double sigma_start = 0.0;       // t0 at which the OU covariance starts from zero
  double strictness = 1e-10;      // a margin passes only if it exceeds this
};

struct VerificationReport {
  std::vector<double> times;
  std::array<ConditionResult, kConditionCount> conditions;
  Mat Gamma;
  std::vector<Mat> Pi;
  std::vector<Mat> Sigma;
  bool value_function_verified = false; 
  bool policy_admissible = false;       
  bool passed = false;
  std::string caveat;

  const ConditionResult& result(Condition c) const { return conditions[static_cast<int>(c)]; }
};

VerificationReport check_conditions(const RiccatiGrid& riccati, const DerivedConstants& consts,
                                    const VerificationOptions& options = {});

/// True iff GammaPolicy holds with positive margin on every node; that
/// condition is what secures the change of measure behind the reduced ODEs.
bool check_novikov_surrogate(const VerificationReport& report);

/// Long format: condition, k, t, margin.
void write_csv(std::ostream& out, const VerificationReport& report);

/// One line, e.g. "verification: PASS (min margin gamma_policy = 0.0123 at t=0.25)".
std::string verdict_line(const VerificationReport& report);

}  // namespace ouhjb
