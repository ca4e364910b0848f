#include "ouhjb/presets.hpp"

#include <random>

namespace ouhjb::presets {

ModelParams decoupled_random(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  ModelParams p;
  p.n = n;
  p.r = 0.5;
  p.gamma = 0.5;
  p.rho0 = 0.0;
  p.rho = Vec::Zero(n);
  p.varrho = Mat::Zero(n, n);
  p.T = 1.0;
  p.alpha.resize(n);
  p.mu.resize(n);
  for (int i = 0; i < n; ++i) p.alpha(i) = 0.3 + 0.4 * unif(rng);
  for (int i = 0; i < n; ++i) p.mu(i) = 5.0 + 3.0 * unif(rng);

  Mat raw(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) raw(i, j) = 0.01 * unif(rng);
  Eigen::HouseholderQR<Mat> qr(raw);
  p.sigma = qr.householderQ() * Mat::Identity(n, n);
  return p;
}

ModelParams single_asset_reference() {
  ModelParams p;
  p.n = 1;
  p.r = 0.01;
  p.gamma = 0.5;
  p.rho0 = 0.01;
  p.rho = Vec::Zero(1);
  p.varrho = Mat::Zero(1, 1);
  p.alpha = Vec::Constant(1, 0.005);
  p.mu = Vec::Constant(1, 3.0);
  p.sigma = Mat::Constant(1, 1, 1.0);
  p.T = 1.0;
  return p;
}

ModelParams oil_two_asset() {
  ModelParams p;
  p.n = 2;
  p.r = 0.3;
  p.gamma = 0.5;
  p.rho0 = 0.03;
  p.rho = Vec(2);
  p.rho << 0.02, 0.01;
  p.alpha = Vec(2);
  p.alpha << 0.301, 0.428;
  p.mu = Vec(2);
  p.mu << 3.093, 2.991;
  p.sigma = Mat(2, 2);
  p.sigma << 0.334, 0.01, 0.01, 0.257;
  p.varrho = Mat(2, 2);
  p.varrho << 0.002, 0.0, 0.0, 0.002;
  p.T = 0.25;
  return p;
}

ModelParams single_asset_stiff() {
  ModelParams p;
  p.n = 1;
  p.r = 0.05;
  p.gamma = 0.5;
  p.rho0 = 0.02;
  p.rho = Vec::Constant(1, 0.01);
  p.varrho = Mat::Zero(1, 1);
  p.alpha = Vec::Constant(1, 1.5);
  p.mu = Vec::Constant(1, 1.0);
  p.sigma = Mat::Constant(1, 1, 0.4);
  p.T = 1.0;
  return p;
}

}  // namespace ouhjb::presets
