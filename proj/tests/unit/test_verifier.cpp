#include <cmath>
#include <random>

#include "doctest.h"
#include "ouhjb/error.hpp"
#include "ouhjb/presets.hpp"
#include "ouhjb/riccati.hpp"
#include "ouhjb/verifier.hpp"

using namespace ouhjb;

namespace {

VerificationReport oil_report(double gamma = 0.5) {
  auto p = presets::oil_two_asset();
  p.gamma = gamma;
  const auto c = validate(p);
  return check_conditions(solve_riccati(c, RiccatiScheme::Erow3, 100, false), c);
}

}  // namespace

TEST_CASE("OU moments at zero and infinite elapsed time") {
  const auto c = validate(presets::oil_two_asset());
  const Vec S0 = (Vec(2) << 1.0, 2.5).finished();
  const auto m0 = ou_moments(c, 0.1, S0, 0.1);
  CHECK(m0.eta == S0);
  CHECK(m0.Sigma == Mat::Zero(2, 2));
  const auto inf = ou_moments(c, 0.0, S0, 400.0);
  CHECK((inf.eta - c.w).norm() < 1e-12);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(inf.Sigma(i, j) == doctest::Approx(c.Q(i, j) / (c.params.alpha(i) + c.params.alpha(j))).epsilon(1e-12));
  CHECK_THROWS_AS(ou_moments(c, 0.2, S0, 0.1), Error);
}

TEST_CASE("OU covariance matches a Monte Carlo estimate") {
  const auto c = validate(presets::oil_two_asset());
  const auto& p = c.params;
  const int M = 100000, N = 250;
  const double dt = 0.25 / N, sdt = std::sqrt(dt);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<Vec> out(M);
  for (int m = 0; m < M; ++m) {
    Vec S = Vec::Constant(2, 2.0);
    for (int k = 0; k < N; ++k) {
      const Vec dB = (Vec(2) << z(rng), z(rng)).finished() * sdt;
      S += (c.Adiag * (c.w - S)) * dt + p.sigma * dB;
    }
    out[m] = S;
  }
  Vec mean = Vec::Zero(2);
  for (const auto& s : out) mean += s / M;
  const auto mom = ou_moments(c, 0.0, Vec::Constant(2, 2.0), 0.25);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      double s1 = 0, s2 = 0;
      for (const auto& s : out) {
        const double v = (s(i) - mean(i)) * (s(j) - mean(j));
        s1 += v;
        s2 += v * v;
      }
      const double cov = s1 / (M - 1);
      const double se = std::sqrt((s2 / M - (s1 / M) * (s1 / M)) / M);
      CHECK(std::abs(cov - mom.Sigma(i, j)) <= 3.0 * se);
    }
  }
}

TEST_CASE("product eigenvalues agree with a general eigensolve") {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    Mat A(3, 3), L(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        A(i, j) = z(rng);
        L(i, j) = z(rng);
      }
    A = (0.5 * (A + A.transpose())).eval();
    const Mat Sigma = L * L.transpose();
    const auto e = product_eigenvalues(A, Sigma);
    const Vec re = Eigen::EigenSolver<Mat>(A * Sigma).eigenvalues().real();
    CHECK(e.min == doctest::Approx(re.minCoeff()).epsilon(1e-9));
    CHECK(e.max == doctest::Approx(re.maxCoeff()).epsilon(1e-9));
  }
}

TEST_CASE("oil case passes every condition") {
  const auto rep = oil_report();
  CHECK(rep.passed);
  CHECK(rep.value_function_verified);
  CHECK(rep.policy_admissible);
  for (const auto& r : rep.conditions) CHECK(r.min_margin > 0.0);
  CHECK(check_novikov_surrogate(rep));
  CHECK(verdict_line(rep).rfind("verification: PASS", 0) == 0);
  CHECK(!rep.caveat.empty());
}

TEST_CASE("zero covariance at the start gives full margins") {
  const auto rep = oil_report();
  for (const auto& r : rep.conditions) CHECK(r.margins[0] == doctest::Approx(r.bound).epsilon(1e-14));
}

TEST_CASE("zero varrho leaves its margin at the bound") {
  const auto c = validate(presets::decoupled_random(3, 2));
  const auto rep = check_conditions(solve_riccati(c, RiccatiScheme::Erow3, 20, false), c);
  const auto& r = rep.result(Condition::VarrhoLower);
  for (double m : r.margins) CHECK(m == doctest::Approx(1.0 / (8.0 * c.one_minus_gamma())).epsilon(1e-14));
}

TEST_CASE("high risk tolerance fails the policy condition") {
  const auto rep = oil_report(0.99);
  CHECK_FALSE(rep.passed);
  CHECK_FALSE(rep.result(Condition::GammaPolicy).passed);
  CHECK(rep.result(Condition::GammaPolicy).min_margin < 0.0);
  CHECK_FALSE(check_novikov_surrogate(rep));
}

TEST_CASE("measure-change check is a conjunction over nodes") {
  auto rep = oil_report();
  auto& r = rep.conditions[static_cast<int>(Condition::GammaPolicy)];
  r.margins[37] = -1e-3;
  r.passed = false;
  CHECK_FALSE(check_novikov_surrogate(rep));
}
