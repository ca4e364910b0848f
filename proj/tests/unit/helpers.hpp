#pragma once

#include <cmath>
#include <random>

#include "ouhjb/market_model.hpp"

namespace testutil {

using ouhjb::Mat;
using ouhjb::Vec;

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

inline Mat random_symmetric(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return 0.5 * (m + m.transpose());
}

// A valid coupled market of dimension n: correlated volatility, small
// symmetric varrho and moderate coefficients.
inline ouhjb::ModelParams random_market(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ouhjb::ModelParams p;
  p.n = n;
  p.r = 0.02 + 0.05 * u(rng);
  p.gamma = 0.2 + 0.6 * u(rng);
  p.rho0 = 0.01 * u(rng);
  p.rho = Vec(n);
  p.alpha = Vec(n);
  p.mu = Vec(n);
  for (int i = 0; i < n; ++i) {
    p.rho(i) = 0.01 * u(rng);
    p.alpha(i) = 0.2 + 0.8 * u(rng);
    p.mu(i) = 1.0 + 2.0 * u(rng);
  }
  p.sigma = Mat::Identity(n, n) * 0.3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) p.sigma(i, j) += 0.05 * (u(rng) - 0.5);
  p.varrho = random_symmetric(n, rng, 0.01);
  p.T = 0.5 + 0.5 * u(rng);
  return p;
}

}  // namespace testutil
