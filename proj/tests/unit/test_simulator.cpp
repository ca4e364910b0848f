#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "ouhjb/coefficients.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/presets.hpp"
#include "ouhjb/simulator.hpp"

using namespace ouhjb;

namespace {

Policy constant_policy(const std::string& name, Vec pi_frac, double c_frac) {
  Policy p;
  p.name = name;
  p.rule = [pi_frac, c_frac](double, double x, const Vec&, PolicyStream&) {
    return PolicyAction{x * pi_frac, x * c_frac};
  };
  return p;
}

SimulationOptions small_options(int paths = 200) {
  SimulationOptions o;
  o.paths = paths;
  o.policy_steps = 20;
  o.substeps = 2;
  o.S0 = Vec::Constant(2, 2.0);
  return o;
}

const Policy& by_name(const std::vector<Policy>& lib, const std::string& name) {
  for (const auto& p : lib)
    if (p.name == name) return p;
  FAIL("missing policy " << name);
  return lib.front();
}

}  // namespace

TEST_CASE("zero policy grows wealth at the riskless rate on every path") {
  const auto c = validate(presets::oil_two_asset());
  auto o = small_options(50);
  const auto e = simulate_paths(c, constant_policy("zero", Vec::Zero(2), 0.0), o);
  const double expect = o.x0 * std::exp(c.params.r * c.params.T);
  for (double x : e.terminal_wealth) CHECK(x == doctest::Approx(expect).epsilon(1e-13));
  CHECK(e.absorbed_count == 0);
}

TEST_CASE("without consumption the objective is the terminal utility") {
  const auto c = validate(presets::oil_two_asset());
  auto o = small_options(20);
  o.record_paths = 20;
  const Vec frac = (Vec(2) << 0.3, 0.2).finished();
  const auto e = simulate_paths(c, constant_policy("nc", frac, 0.0), o);
  for (int m = 0; m < 20; ++m) {
    const auto& r = e.recorded[m];
    const double u = std::pow(r.psi.back(), 0.5) * std::pow(r.X.back(), 0.5) / 0.5;
    CHECK(e.utility[m] == doctest::Approx(u).epsilon(1e-13));
  }
}

TEST_CASE("deterministic market with the riskless policy") {
  auto p = presets::oil_two_asset();
  p.sigma.setZero();
  const auto c = derive_unchecked(p);
  const auto pol = constant_policy("riskless", Vec::Zero(2), 0.5);
  const double exact = 25.0 * std::exp((p.r - 0.5) * p.T);
  std::vector<double> err;
  for (int N : {25, 50, 100}) {
    auto o = small_options(2);
    o.policy_steps = N;
    o.substeps = 1;
    const auto e = simulate_paths(c, pol, o);
    CHECK(e.terminal_wealth[0] == e.terminal_wealth[1]);
    err.push_back(std::abs(e.terminal_wealth[0] - exact));
  }
  CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.05));
  CHECK(err[1] / err[2] == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("standard error shrinks like one over root M") {
  const auto c = validate(presets::oil_two_asset());
  const auto pol = constant_policy("nb", (Vec(2) << 0.5, 0.5).finished(), 0.25);
  double ratio_sum = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    auto o = small_options(500);
    o.seed = seed;
    const double se1 = mean_utility(simulate_paths(c, pol, o)).std_error;
    o.paths = 2000;
    const double se4 = mean_utility(simulate_paths(c, pol, o)).std_error;
    ratio_sum += se4 / se1;
  }
  CHECK(ratio_sum / 4.0 == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("results do not depend on the thread count") {
  const auto c = validate(presets::oil_two_asset());
  const PhiEvaluator phi(c, solve_coefficients(c, CoefficientScheme::Erow3RK3, 20));
  const auto lib = policy_library(c, &phi);
  for (const char* name : {"Random", "Numerical Policy"}) {
    auto o = small_options(64);
    o.threads = 1;
    const auto a = simulate_paths(c, by_name(lib, name), o);
    o.threads = 5;
    const auto b = simulate_paths(c, by_name(lib, name), o);
    CHECK(a.utility == b.utility);
    CHECK(a.terminal_wealth == b.terminal_wealth);
  }
}

TEST_CASE("paired differences") {
  const auto c = validate(presets::oil_two_asset());
  const auto pol = constant_policy("nb", (Vec(2) << 0.5, 0.5).finished(), 0.25);
  auto o = small_options(100);
  const auto a = simulate_paths(c, pol, o);
  const auto d = paired_difference(a, a);
  CHECK(d.mean == 0.0);
  CHECK(d.std_error == 0.0);
  o.seed += 1;
  const auto b = simulate_paths(c, pol, o);
  CHECK_THROWS_AS(paired_difference(a, b), Error);
}

TEST_CASE("wealth is absorbed at zero") {
  auto p = presets::oil_two_asset();
  p.sigma *= 6.0;
  const auto c = validate(p);
  auto o = small_options(200);
  const auto e = simulate_paths(c, constant_policy("lev", (Vec(2) << -40.0, 50.0).finished(), 0.25), o);
  CHECK(e.absorbed_count > 0);
  for (int m = 0; m < o.paths; ++m)
    if (e.absorbed[m]) CHECK(e.terminal_wealth[m] == 0.0);
}

TEST_CASE("policy library") {
  const auto c = validate(presets::oil_two_asset());
  const PhiEvaluator phi(c, solve_coefficients(c, CoefficientScheme::Erow3RK3, 20));
  const auto lib = policy_library(c, &phi);
  REQUIRE(lib.size() == 11);
  CHECK(lib.back().name == "Numerical Policy");
  PolicyStream st;
  const Vec S = Vec::Constant(2, 2.0);

  auto a = by_name(lib, "Riskless").rule(0.0, 10.0, S, st);
  CHECK(a.pi == Vec::Zero(2));
  CHECK(a.c == 5.0);
  a = by_name(lib, "Balanced Leverage").rule(0.0, 4.0, S, st);
  CHECK(a.pi(0) == 4.0);
  CHECK(a.pi(1) == -2.0);
  CHECK(a.c == 2.0);
  a = by_name(lib, "Extreme Leverage").rule(0.0, 2.0, S, st);
  CHECK(a.pi(0) == -16.0);
  CHECK(a.pi(1) == 20.0);
  CHECK(a.c == 0.5);
  a = lib.back().rule(c.params.T, 7.5, S, st);
  CHECK(a.c == 7.5);

  st.rng.seed(3);
  for (int k = 0; k < 20; ++k) {
    a = by_name(lib, "Random").rule(0.01 * k, 8.0, S, st);
    CHECK(a.pi(0) >= 0.0);
    CHECK(a.pi(0) <= 4.0);
    CHECK(a.pi(1) >= 0.0);
    CHECK(a.pi(1) <= 4.0);
    CHECK(a.c >= 0.0);
    CHECK(a.c <= 2.0);
  }

  CHECK_THROWS_AS(policy_library(c, nullptr), Error);
  const auto c1 = validate(presets::single_asset_reference());
  const PhiEvaluator phi1(c1, solve_coefficients(c1, CoefficientScheme::Erow3RK3, 5));
  CHECK_THROWS_AS(policy_library(c1, &phi1), Error);
}

TEST_CASE("comparison and path exports") {
  const auto c = validate(presets::oil_two_asset());
  auto o = small_options(4);
  o.record_paths = 2;
  const auto e = simulate_paths(c, constant_policy("nb", (Vec(2) << 0.5, 0.5).finished(), 0.25), o);
  std::ostringstream out;
  write_paths_csv(out, e);
  const std::string s = out.str();
  CHECK(s.rfind("path,t,S_1,S_2,X,pi_1,pi_2,C,psi\n", 0) == 0);
  // header + 2 paths x (N + 1) rows
  CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 2 * (o.policy_steps * o.substeps + 1));
}
