#pragma once

#include <iosfwd>
#include <string_view>
#include <vector>

#include "ouhjb/market_model.hpp"

namespace ouhjb {

enum class RiccatiScheme { ExpEuler, Erow3 };

std::string_view to_string(RiccatiScheme scheme);

/// Right-hand side of the matrix Riccati equation
///   g' = A g + g A - 2 g Q g + C0,   A = diag(alpha)/(1-gamma),
///   C0 = -gamma Gamma / (2(1-gamma)^2) + varrho/(1-gamma).
class RiccatiRhs {
 public:
  explicit RiccatiRhs(const DerivedConstants& consts);

  Mat operator()(const Mat& g) const;

  const Mat& linear() const { return linear_; }
  const Mat& constant() const { return constant_; }
  const Mat& Q() const { return Q_; }

 private:
  Mat linear_;
  Mat constant_;
  Mat Q_;
};

/// M_k = diag(alpha)/(1-gamma) - 2 g_k Q, the generator of the Sylvester
/// operator E -> M_k E + E M_k'.
Mat sylvester_generator(const DerivedConstants& consts, const Mat& g_k);

/// Frechet derivative of the Riccati right-hand side at g_k applied to E.
Mat frechet_apply(const DerivedConstants& consts, const Mat& g_k, const Mat& E);

/// Vectorized Sylvester operator (column-major): I (x) M + M (x) I.
Mat sylvester_matrix(const Mat& M);

/// phi_j(A) v for a general square A via the exponential of the augmented
/// block matrix [[A, v e_1'], [0, J_j]] with J_j the j x j shift matrix.
Vec phi_times(const Mat& A, int j, const Vec& v);

/// phi_j(h S_k) applied to C, where S_k is the Frechet derivative at g_k.
/// `h` is a signed time increment. Throws StepTooLarge if the result is not
/// finite.
Mat phi_apply(const DerivedConstants& consts, const Mat& g_k, double h, int j, const Mat& C);

/// One exponential Euler step g_k -> g_{k+1} over the signed increment h.
Mat exp_euler_step(const DerivedConstants& consts, const Mat& g_k, double h);

/// One exprb32 step: predictor as exponential Euler, corrector
/// g_{k+1} = g_hat + 2h phi_3(h S_k)(N_k(g_hat) - N_k(g_k)), where
/// N_k(g) = G(g) - S_k(g) is the nonlinear remainder.
Mat erow3_step(const DerivedConstants& consts, const Mat& g_k, double h);

/// Time grid t_k = k T / K with symmetric matrices g_k. When half steps were
/// requested, `half_values[k]` holds g at t_k + h/2 for k = 0..K-1.
struct RiccatiGrid {
  RiccatiScheme scheme = RiccatiScheme::Erow3;
  double T = 0.0;
  double h = 0.0;
  int K = 0;
  std::vector<Mat> values;
  std::vector<Mat> half_values;

  bool has_half_steps() const { return !half_values.empty(); }
  double time(int k) const { return k == K ? T : T * static_cast<double>(k) / K; }
};

/// Integrates g backward from g(T) = 0 with K steps. With `need_half_steps`,
/// the same scheme is rerun at step h/2 and its odd nodes are stored as
/// half-step values.
RiccatiGrid solve_riccati(const DerivedConstants& consts, RiccatiScheme scheme, int K,
                          bool need_half_steps);

/// One row per t_k: t, then upper-triangle entries g_ij (i <= j).
void write_csv(std::ostream& out, const RiccatiGrid& grid);

}  // namespace ouhjb
