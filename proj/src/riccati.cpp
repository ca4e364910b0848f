#include "ouhjb/riccati.hpp"

#include <ostream>
#include <string>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"

namespace ouhjb {
namespace {

Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

Vec vec_of(const Mat& m) { return Eigen::Map<const Vec>(m.data(), m.size()); }

Mat unvec(const Vec& v, Eigen::Index n) { return Eigen::Map<const Mat>(v.data(), n, n); }

// phi_j(h S_k) for one step, reused by predictor and corrector.
class StepOperator {
 public:
  StepOperator(const DerivedConstants& consts, const Mat& g_k, double h)
      : n_(g_k.rows()), scaled_(h * sylvester_matrix(sylvester_generator(consts, g_k))) {}

  Mat apply(int j, const Mat& C) const {
    Mat out = unvec(phi_times(scaled_, j, vec_of(C)), n_);
    if (!out.allFinite()) {
      throw Error(ErrorCode::StepTooLarge, "phi_" + std::to_string(j) + " evaluation overflowed");
    }
    return out;
  }

 private:
  Eigen::Index n_;
  Mat scaled_;
};

}  // namespace

std::string_view to_string(RiccatiScheme scheme) {
  return scheme == RiccatiScheme::ExpEuler ? "expeuler" : "erow3";
}

RiccatiRhs::RiccatiRhs(const DerivedConstants& c) : Q_(c.Q) {
  const double omg = c.one_minus_gamma();
  linear_ = c.Adiag / omg;
  constant_ = -c.gamma() * c.Gamma / (2.0 * omg * omg) + c.params.varrho / omg;
  constant_ = symmetrize(constant_);
}

Mat RiccatiRhs::operator()(const Mat& g) const {
  Mat out = linear_ * g + g * linear_ - 2.0 * g * Q_ * g + constant_;
  return symmetrize(out);
}

Mat sylvester_generator(const DerivedConstants& c, const Mat& g_k) {
  return c.Adiag / c.one_minus_gamma() - 2.0 * g_k * c.Q;
}

Mat frechet_apply(const DerivedConstants& c, const Mat& g_k, const Mat& E) {
  const auto n = c.n();
  if (g_k.rows() != n || g_k.cols() != n || E.rows() != n || E.cols() != n) {
    throw Error(ErrorCode::DimensionMismatch, "frechet_apply expects n x n operands");
  }
  const Mat M = sylvester_generator(c, g_k);
  return M * E + E * M.transpose();
}

Mat sylvester_matrix(const Mat& M) {
  const Mat I = Mat::Identity(M.rows(), M.cols());
  Mat L = Eigen::kroneckerProduct(I, M);
  L += Eigen::kroneckerProduct(M, I);
  return L;
}

Vec phi_times(const Mat& A, int j, const Vec& v) {
  if (j < 1) throw Error(ErrorCode::InvalidParameter, "phi index must be >= 1");
  const Eigen::Index m = A.rows();
  if (A.cols() != m || v.size() != m) {
    throw Error(ErrorCode::DimensionMismatch, "phi_times operand sizes");
  }
  Mat aug = Mat::Zero(m + j, m + j);
  aug.topLeftCorner(m, m) = A;
  aug.block(0, m, m, 1) = v;
  for (int i = 0; i + 1 < j; ++i) aug(m + i, m + i + 1) = 1.0;
  const Mat E = aug.exp();
  return E.block(0, m + j - 1, m, 1);
}

Mat phi_apply(const DerivedConstants& c, const Mat& g_k, double h, int j, const Mat& C) {
  if (C.rows() != c.n() || C.cols() != c.n()) {
    throw Error(ErrorCode::DimensionMismatch, "phi_apply expects an n x n argument");
  }
  return StepOperator(c, g_k, h).apply(j, C);
}

Mat exp_euler_step(const DerivedConstants& c, const Mat& g_k, double h) {
  const RiccatiRhs G(c);
  const StepOperator op(c, g_k, h);
  return symmetrize(g_k + h * op.apply(1, G(g_k)));
}

Mat erow3_step(const DerivedConstants& c, const Mat& g_k, double h) {
  const RiccatiRhs G(c);
  const StepOperator op(c, g_k, h);
  const Mat G_k = G(g_k);
  const Mat g_hat = g_k + h * op.apply(1, G_k);
  // N_k(g_hat) - N_k(g_k) = G(g_hat) - G(g_k) - S_k(g_hat - g_k)
  const Mat remainder = G(g_hat) - G_k - frechet_apply(c, g_k, g_hat - g_k);
  return symmetrize(g_hat + 2.0 * h * op.apply(3, remainder));
}

namespace {

std::vector<Mat> integrate_backward(const DerivedConstants& c, RiccatiScheme scheme, int K) {
  const double h = c.params.T / K;
  std::vector<Mat> values(K + 1);
  values[K] = Mat::Zero(c.n(), c.n());
  // tau = T - t runs forward; a step of +h in tau is a step of -h in t.
  for (int k = K; k > 0; --k) {
    const Mat& g = values[k];
    values[k - 1] = scheme == RiccatiScheme::ExpEuler ? exp_euler_step(c, g, -h)
                                                      : erow3_step(c, g, -h);
    if (!values[k - 1].allFinite()) {
      throw Error(ErrorCode::StepTooLarge, "non-finite g at step " + std::to_string(k - 1));
    }
  }
  return values;
}

}  // namespace

RiccatiGrid solve_riccati(const DerivedConstants& c, RiccatiScheme scheme, int K,
                          bool need_half_steps) {
  if (K < 1) throw Error(ErrorCode::InvalidParameter, "step count K must be >= 1");
  RiccatiGrid grid;
  grid.scheme = scheme;
  grid.T = c.params.T;
  grid.K = K;
  grid.h = c.params.T / K;
  grid.values = integrate_backward(c, scheme, K);
  if (need_half_steps) {
    const auto fine = integrate_backward(c, scheme, 2 * K);
    grid.half_values.reserve(K);
    for (int k = 0; k < K; ++k) grid.half_values.push_back(fine[2 * k + 1]);
  }
  return grid;
}

void write_csv(std::ostream& out, const RiccatiGrid& grid) {
  csv::Writer w(out);
  const auto n = grid.values.empty() ? 0 : grid.values.front().rows();
  w.field("t");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j)
      w.field("g_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
  w.end_row();
  for (int k = 0; k <= grid.K; ++k) {
    w.field(grid.time(k));
    const Mat& g = grid.values[k];
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i; j < n; ++j) w.field(g(i, j));
    w.end_row();
  }
}

}  // namespace ouhjb
