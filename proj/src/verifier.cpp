#include "ouhjb/verifier.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"

namespace ouhjb {

OUMoments ou_moments(const DerivedConstants& c, double t0, const Vec& S0, double tau) {
  const int n = c.n();
  if (S0.size() != n) throw Error(ErrorCode::DimensionMismatch, "S0 size");
  if (tau < t0) throw Error(ErrorCode::InvalidParameter, "tau must not precede t0");
  const double dt = tau - t0;
  const Vec& a = c.params.alpha;
  OUMoments m;
  m.tau = tau;
  const Vec decay = (-dt * a.array()).exp().matrix();
  m.eta = decay.cwiseProduct(S0) + (Vec::Ones(n) - decay).cwiseProduct(c.w);
  m.Sigma.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = a(i) + a(j);
      m.Sigma(i, j) = c.Q(i, j) * -std::expm1(-dt * s) / s;
    }
  }
  return m;
}

ExtremeEigenvalues product_eigenvalues(const Mat& A, const Mat& Sigma) {
  const int n = static_cast<int>(A.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(Sigma);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "Sigma eigensolve failed");
  const double scale = std::max(Sigma.norm(), std::numeric_limits<double>::min());
  if (es.eigenvalues().minCoeff() < -1e-12 * scale) {
    throw Error(ErrorCode::EigenFailure, "Sigma is not positive semidefinite");
  }
  const Vec root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Mat half = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
  Mat sym = half * A * half;
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> ps(sym, Eigen::EigenvaluesOnly);
  if (ps.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "product eigensolve failed");

  const Mat prod = A * Sigma;
  const double pscale = std::max(prod.norm(), 1.0);
  Eigen::EigenSolver<Mat> gs(prod, false);
  if (gs.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "general eigensolve failed");
  for (int i = 0; i < n; ++i) {
    if (std::abs(gs.eigenvalues()(i).imag()) > 1e-10 * pscale) {
      throw Error(ErrorCode::EigenFailure, "product has a complex eigenvalue");
    }
  }
  return {ps.eigenvalues()(0), ps.eigenvalues()(n - 1)};
}

const char* condition_label(Condition c) {
  static const char* labels[] = {"g_upper", "varrho_lower", "gamma_value", "pi_value", "gamma_policy", "pi_policy", "g_lower", "g_increment"};
  return labels[static_cast<int>(c)];
}

namespace {

void finish(ConditionResult& r, double strictness) {
  r.min_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < static_cast<int>(r.margins.size()); ++k) {
    if (r.margins[k] < r.min_margin) {
      r.min_margin = r.margins[k];
      r.argmin = k;
    }
    if (k + 1 < static_cast<int>(r.margins.size())) {
      const double a = r.margins[k];
      const double b = r.margins[k + 1];
      if ((a > 0) != (b > 0) && std::abs(a) > strictness && std::abs(b) > strictness) {
        r.refine_at.push_back(k);
      }
    }
  }
  r.passed = r.min_margin > strictness;
}

}  // namespace

VerificationReport check_conditions(const RiccatiGrid& grid, const DerivedConstants& c,
                                    const VerificationOptions& options) {
  const int K = grid.K;
  if (K < 1 || static_cast<int>(grid.values.size()) != K + 1) {
    throw Error(ErrorCode::InvalidParameter, "Riccati grid is incomplete");
  }
  if (grid.values.front().rows() != c.n()) {
    throw Error(ErrorCode::DimensionMismatch, "Riccati grid dimension differs from model");
  }
  const double gm = c.gamma();
  const double omg = c.one_minus_gamma();
  const Vec zero = Vec::Zero(c.n());

  VerificationReport rep;
  rep.Gamma = c.Gamma;
  const Mat AQA = c.Adiag * c.Q * c.Adiag / omg;
  const std::array<double, kConditionCount> bounds = {
      1.0 / (4.0 * omg),
      1.0 / (8.0 * omg),
      1.0 / (8.0 * gm),
      1.0 / (256.0 * gm * gm),
      std::min(1.0 / 8.0, omg * omg / (gm * gm)),
      1.0 / 256.0,
      1.0 / 4.0,
      1.0 / 16.0,
  };
  for (int i = 0; i < kConditionCount; ++i) {
    rep.conditions[i].id = static_cast<Condition>(i);
    rep.conditions[i].bound = bounds[i];
    rep.conditions[i].margins.assign(K + 1, 0.0);
  }
  auto margin = [&](Condition cond, int k) -> double& {
    return rep.conditions[static_cast<int>(cond)].margins[k];
  };

  rep.times.resize(K + 1);
  rep.Pi.resize(K + 1);
  rep.Sigma.resize(K + 1);
  for (int k = 0; k <= K; ++k) {
    const double t = grid.time(k);
    rep.times[k] = t;
    const Mat& g = grid.values[k];
    rep.Pi[k] = 4.0 * g * c.Q * g + AQA;
    rep.Sigma[k] = t <= options.sigma_start ? Mat::Zero(c.n(), c.n())
                                            : ou_moments(c, options.sigma_start, zero, t).Sigma;
    const Mat& S = rep.Sigma[k];
    try {
      const auto eg = product_eigenvalues(g, S);
      const auto ev = product_eigenvalues(c.params.varrho, S);
      const auto eG = product_eigenvalues(c.Gamma, S);
      const auto eP = product_eigenvalues(rep.Pi[k], S);
      margin(Condition::GUpper, k) = bounds[0] - eg.max;
      margin(Condition::VarrhoLower, k) = bounds[1] + ev.min;
      margin(Condition::GammaValue, k) = bounds[2] - eG.max;
      margin(Condition::PiValue, k) = bounds[3] - eP.max;
      margin(Condition::GammaPolicy, k) = bounds[4] - eG.max;
      margin(Condition::PiPolicy, k) = bounds[5] - eP.max;
      margin(Condition::GLower, k) = bounds[6] + eg.min;
      double m410 = std::numeric_limits<double>::infinity();
      for (int u = k; u <= K; ++u) {
        const auto ed = product_eigenvalues(grid.values[u] - g, S);
        m410 = std::min(m410, bounds[7] - ed.max);
      }
      margin(Condition::GIncrement, k) = m410;
    } catch (const Error& e) {
      throw Error(e.code(), std::string(e.what()) + " at node k=" + std::to_string(k) +
                                " t=" + csv::format(t));
    }
  }
  for (auto& r : rep.conditions) finish(r, options.strictness);

  rep.value_function_verified = true;
  rep.policy_admissible = true;
  for (int i = 0; i < kConditionCount; ++i) {
    bool& group = i < 4 ? rep.value_function_verified : rep.policy_admissible;
    group = group && rep.conditions[i].passed;
  }
  rep.passed = rep.value_function_verified && rep.policy_admissible;
  rep.caveat =
      "initial wealth must equal the larger of the discounted expected consumption and terminal "
      "wealth under the adjusted measure; this is not computed";
  return rep;
}

bool check_novikov_surrogate(const VerificationReport& report) {
  return report.result(Condition::GammaPolicy).passed;
}

void write_csv(std::ostream& out, const VerificationReport& report) {
  csv::Writer w(out);
  w.header({"condition", "k", "t", "margin"});
  for (const auto& r : report.conditions) {
    for (int k = 0; k < static_cast<int>(r.margins.size()); ++k) {
      w.field(condition_label(r.id)).field(k).field(report.times[k]).field(r.margins[k]);
      w.end_row();
    }
  }
}

std::string verdict_line(const VerificationReport& report) {
  const ConditionResult* worst = &report.conditions[0];
  for (const auto& r : report.conditions) {
    if (r.min_margin < worst->min_margin) worst = &r;
  }
  std::string line = std::string("verification: ") + (report.passed ? "PASS" : "FAIL");
  line += " (min margin " + std::string(condition_label(worst->id)) + " = " +
          csv::format(worst->min_margin) + " at t=" + csv::format(report.times[worst->argmin]) + ")";
  return line;
}

}  // namespace ouhjb
