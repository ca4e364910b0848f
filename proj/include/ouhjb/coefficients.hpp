#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "ouhjb/market_model.hpp"
#include "ouhjb/riccati.hpp"

namespace ouhjb {

enum class CoefficientScheme { ExpEulerRK2, Erow3RK3 };

std::string_view to_string(CoefficientScheme scheme);
RiccatiScheme riccati_scheme(CoefficientScheme scheme);
int order(CoefficientScheme scheme);

/// Explicit Runge-Kutta tableau (strictly lower-triangular stage matrix).
struct RkTableau {
  int order = 0;
  std::vector<double> weights;                // d_i
  std::vector<double> abscissae;              // l_i
  std::vector<std::vector<double>> stages;    // m_ij, j < i

  int size() const { return static_cast<int>(weights.size()); }

  /// Explicit midpoint rule: l = (0, 1/2), d = (0, 1).
  static RkTableau midpoint();
  /// Kutta's third-order rule: l = (0, 1/2, 1), d = (1/6, 2/3, 1/6).
  static RkTableau kutta3();
  static RkTableau for_scheme(CoefficientScheme scheme);

  /// Sum d_i = 1 and sum_j m_ij = l_i, to 1e-14.
  bool is_consistent() const;
};

/// Affine form F(g, f) = A f + g B f + g C + D of the linear-coefficient ODE.
struct LinearRhsTerms {
  Mat A;  // diag(alpha)/(1-gamma)
  Mat B;  // -2 Q
  Vec C;  // -2 diag(alpha) w - 2 gamma excess/(1-gamma)
  Vec D;  // gamma diag(alpha) Q^{-1} excess/(1-gamma)^2 + rho/(1-gamma)
};

LinearRhsTerms linear_rhs_terms(const DerivedConstants& consts);

/// Right-hand side of f'(t).
Vec rhs_F(const DerivedConstants& consts, const Mat& g, const Vec& f);

/// Right-hand side of f0'(t); does not depend on f0.
double rhs_F0(const DerivedConstants& consts, const Mat& g, const Vec& f);

/// Time-gridded solution (g, f, f0) of the reduced ODE system on t_k = k T/K.
/// `f_half[k]` approximates f(t_k + h/2); it feeds the f0 stages.
struct CoefficientPath {
  CoefficientScheme scheme = CoefficientScheme::Erow3RK3;
  RiccatiGrid riccati;
  std::vector<Vec> f_values;
  std::vector<double> f0_values;
  std::vector<Vec> f_half;

  int K() const { return riccati.K; }
  double h() const { return riccati.h; }
  double T() const { return riccati.T; }
  double time(int k) const { return riccati.time(k); }
  const std::vector<Mat>& g_values() const { return riccati.values; }
};

/// Backward Runge-Kutta sweep for f and f0 driven by a precomputed Riccati
/// grid. Throws MissingStageValue when the tableau needs g at an abscissa the
/// grid does not carry, and StepTooLarge when h > 1/(2 max_k |A + g_k B|_2).
CoefficientPath solve_coefficients(const DerivedConstants& consts, const RiccatiGrid& riccati,
                                   const RkTableau& tableau, CoefficientScheme tag);

/// Riccati solve plus coefficient sweep with the tableau matching `scheme`.
CoefficientPath solve_coefficients(const DerivedConstants& consts, CoefficientScheme scheme,
                                   int K);

/// max_k |A + g_k B|_2, the Lipschitz constant of F in f along the grid.
double lipschitz_f(const DerivedConstants& consts, const RiccatiGrid& riccati);

/// Columns: t, f_1..f_n, f0.
void write_csv(std::ostream& out, const CoefficientPath& path);

/// Compact little-endian binary format ("OUCP" magic, version 1).
void write_binary(std::ostream& out, const CoefficientPath& path);
CoefficientPath read_binary(std::istream& in);

}  // namespace ouhjb
