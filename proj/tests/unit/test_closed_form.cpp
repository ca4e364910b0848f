#include <array>
#include <cmath>

#include "doctest.h"
#include "ouhjb/closed_form.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/presets.hpp"

using namespace ouhjb;

namespace {

// Scalar (g, f, f0) system written out for one asset, integrated backward
// from zero with classical RK4.
std::array<double, 3> scalar_rhs(const ModelParams& p, const std::array<double, 3>& y) {
  const double g = y[0], f = y[1];
  const double a = p.alpha(0), q = p.sigma(0, 0) * p.sigma(0, 0), gm = p.gamma, om = 1.0 - gm;
  const double w = p.mu(0) + q / (2.0 * a);
  const double ex = a * p.mu(0) - p.r;
  const double dg = 2.0 * a / om * g - 2.0 * q * g * g - gm * a * a / (2.0 * om * om * q);
  const double df = a / om * f - 2.0 * q * g * f + g * (-2.0 * a * w - 2.0 * gm * ex / om) +
                    gm * a * ex / (om * om * q) + p.rho(0) / om;
  const double df0 = -w * a * f - gm / om * ex * f - 0.5 * q * f * f - g * q -
                     gm * ex * ex / (2.0 * om * om * q) - (p.r * gm - p.rho0) / om;
  return {dg, df, df0};
}

std::array<double, 3> rk4_to_zero(const ModelParams& p, int steps) {
  std::array<double, 3> y{0, 0, 0};
  const double h = -p.T / steps;
  auto axpy = [](const std::array<double, 3>& a, double s, const std::array<double, 3>& b) {
    return std::array<double, 3>{a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]};
  };
  for (int k = 0; k < steps; ++k) {
    const auto k1 = scalar_rhs(p, y);
    const auto k2 = scalar_rhs(p, axpy(y, h / 2, k1));
    const auto k3 = scalar_rhs(p, axpy(y, h / 2, k2));
    const auto k4 = scalar_rhs(p, axpy(y, h, k3));
    for (int i = 0; i < 3; ++i) y[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
  }
  return y;
}

}  // namespace

TEST_CASE("closed-form g: terminal value, monotonicity and bound") {
  const auto c = validate(presets::decoupled_random(4, 3));
  const ClosedFormOracle o(c);
  const auto& p = o.params();
  for (int i = 0; i < 4; ++i) {
    CHECK(o.g(i, p.T) == 0.0);
    const double bound = p.gamma * p.alpha(i) / (2.0 * (1.0 - p.gamma) * p.q(i));
    double prev = 0.0;
    for (int k = 99; k >= 0; --k) {
      const double v = o.g(i, p.T * k / 100.0);
      CHECK(v > prev);
      CHECK(v < bound);
      prev = v;
    }
  }
}

TEST_CASE("closed forms agree with fine RK4 on the scalar system") {
  for (auto p : {presets::single_asset_reference(), presets::single_asset_stiff()}) {
    const auto c = validate(p);
    const ClosedFormOracle o(c);
    const auto y = rk4_to_zero(p, 20000);
    CHECK(std::abs(o.g(0, 0.0) - y[0]) < 1e-8);
    CHECK(std::abs(o.f(0, 0.0) - y[1]) < 1e-8);
    CHECK(std::abs(o.f0(0.0) - y[2]) < 1e-8);
  }
}

TEST_CASE("f and f0 vanish at the terminal time") {
  const auto c = validate(presets::decoupled_random(3, 8));
  const ClosedFormOracle o(c);
  for (int i = 0; i < 3; ++i) CHECK(o.f(i, o.params().T) == 0.0);
  CHECK(o.f0(o.params().T) == 0.0);
  const auto tab = o.table(10);
  CHECK(tab.values.f.back() == Vec::Zero(3));
  CHECK(tab.values.f0.back() == 0.0);
  CHECK(tab.quadrature_error <= 1e-8);
}

TEST_CASE("zero forcing gives zero f") {
  DecoupledParams d;
  d.n = 1;
  d.gamma = 0.5;
  d.T = 1.0;
  d.q = Vec::Constant(1, 1.0);
  d.alpha = Vec::Constant(1, 0.4);
  d.mu = Vec::Constant(1, 0.5);
  d.r = 0.4 * 0.5;  // no excess return
  d.w = Vec::Zero(1);
  d.rho = Vec::Zero(1);
  const ClosedFormOracle o(d);
  for (double t : {0.0, 0.3, 0.9}) {
    CHECK(o.zeta(0, t) == 0.0);
    CHECK(o.f(0, t) == 0.0);
  }
}

TEST_CASE("table points match single-time queries") {
  const auto c = validate(presets::decoupled_random(2, 1));
  const ClosedFormOracle o(c);
  const auto tab = o.table(8);
  for (int k = 0; k <= 8; ++k) {
    const double t = tab.values.times[k];
    for (int i = 0; i < 2; ++i) CHECK(std::abs(tab.values.f[k](i) - o.f(i, t)) < 1e-9);
    CHECK(std::abs(tab.values.f0[k] - o.f0(t)) < 1e-8);
  }
}

TEST_CASE("coupled markets are rejected") {
  const auto c = validate(presets::oil_two_asset());
  CHECK_THROWS_AS(ClosedFormOracle{c}, Error);
  try {
    ClosedFormOracle o(c);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDecoupled);
  }
}
