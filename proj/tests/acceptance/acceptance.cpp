// One line per acceptance criterion; exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

#include "ouhjb/closed_form.hpp"
#include "ouhjb/coefficients.hpp"
#include "ouhjb/config.hpp"
#include "ouhjb/csv.hpp"
#include "ouhjb/experiments.hpp"
#include "ouhjb/presets.hpp"
#include "ouhjb/riccati.hpp"
#include "ouhjb/value_policy.hpp"
#include "ouhjb/verifier.hpp"

using namespace ouhjb;
namespace fs = std::filesystem;

namespace {

std::string configs_dir = "configs";

RunConfig config(const std::string& name) { return load_config((fs::path(configs_dir) / name).string()); }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

ModelParams coupled_market(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.n = n;
  p.r = 0.03;
  p.gamma = 0.2 + 0.6 * u(rng);
  p.rho0 = 0.01;
  p.rho = Vec::Constant(n, 0.005);
  p.alpha = Vec(n);
  p.mu = Vec(n);
  for (int i = 0; i < n; ++i) {
    p.alpha(i) = 0.2 + 0.8 * u(rng);
    p.mu(i) = 1.0 + 2.0 * u(rng);
  }
  p.sigma = 0.3 * Mat::Identity(n, n);
  Mat v(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      p.sigma(i, j) += 0.05 * (u(rng) - 0.5);
      v(i, j) = 0.01 * (u(rng) - 0.5);
    }
  p.varrho = (0.5 * (v + v.transpose())).eval();
  p.T = 0.5 + 0.5 * u(rng);
  return p;
}

Mat random_symmetric(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return (0.5 * (m + m.transpose())).eval();
}

// ---- criteria ----

Outcome terminal_exactness() {
  Outcome o;
  std::vector<ModelParams> models = {presets::decoupled_random(10, 42), presets::single_asset_reference(),
                                     presets::single_asset_stiff(), presets::oil_two_asset()};
  for (std::uint64_t s = 1; s <= 4; ++s) models.push_back(coupled_market(static_cast<int>(1 + s), s));
  int solves = 0;
  for (const auto& p : models) {
    const auto c = validate(p);
    for (auto scheme : {CoefficientScheme::ExpEulerRK2, CoefficientScheme::Erow3RK3}) {
      for (int K : {10, 25, 64, 100}) {
        const auto path = solve_coefficients(c, scheme, K);
        const int n = c.n();
        o.require(path.g_values().back() == Mat::Zero(n, n), "g(T) = 0");
        o.require(path.f_values.back() == Vec::Zero(n), "f(T) = 0");
        o.require(path.f0_values.back() == 0.0, "f0(T) = 0");
        ++solves;
      }
    }
  }
  o.note(std::to_string(solves) + " solves");
  return o;
}

Outcome convergence_orders() {
  Outcome o;
  const auto cfg = config("decoupled_n10.json");
  const auto t0 = std::chrono::steady_clock::now();
  const auto study = convergence_study(validate(cfg.model), 3, 7);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(cfg.model.n == 10, "n = 10");
  for (const auto& s : study.slopes) {
    const bool rk2 = order(s.scheme) == 2;
    const double lo = rk2 ? 1.7 : 2.7, hi = rk2 ? 2.3 : 3.3;
    const std::string tag(to_string(s.scheme));
    o.require(s.f && *s.f >= lo && *s.f <= hi, tag + " slope f in [" + fmt(lo) + ", " + fmt(hi) + "]");
    o.require(s.f0 && *s.f0 >= lo && *s.f0 <= hi, tag + " slope f0 in [" + fmt(lo) + ", " + fmt(hi) + "]");
    o.note(tag + " f " + (s.f ? fmt(*s.f) : "n/a") + " f0 " + (s.f0 ? fmt(*s.f0) : "n/a"));
  }
  o.require(secs < 60.0, "runtime under one minute");
  o.note(fmt(secs) + " s");
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  const auto c = validate(config("decoupled_n10.json").model);
  const ClosedFormOracle oracle(c);
  double worst_ratio = 0.0;
  for (auto scheme : {RiccatiScheme::ExpEuler, RiccatiScheme::Erow3}) {
    for (int k = 3; k <= 7; ++k) {
      const int K = 1 << k;
      const auto coarse = solve_riccati(c, scheme, K, false);
      const auto fine = solve_riccati(c, scheme, 2 * K, false);
      double conv = 0.0, off = 0.0, diag = 0.0;
      for (int j = 0; j <= K; ++j) {
        const Mat& g = coarse.values[j];
        conv = std::max(conv, (g - fine.values[2 * j]).norm());
        Mat od = g;
        od.diagonal().setZero();
        off = std::max(off, od.norm());
        diag = std::max(diag, (g.diagonal() - oracle.g_matrix(coarse.time(j)).diagonal()).cwiseAbs().maxCoeff());
      }
      o.require(off <= 10.0 * conv, std::string(to_string(scheme)) + " K=" + std::to_string(K) + " off-diagonal mass");
      o.require(diag <= 10.0 * conv, std::string(to_string(scheme)) + " K=" + std::to_string(K) + " diagonal vs closed form");
      worst_ratio = std::max(worst_ratio, diag / conv);
    }
  }
  o.note("max diagonal error / self-difference " + fmt(worst_ratio));
  return o;
}

long double phi_scalar(int j, long double z) {
  if (std::fabs(static_cast<double>(z)) < 0.5) {
    long double fact = 1.0L;
    for (int i = 2; i <= j; ++i) fact *= i;
    long double term = 1.0L / fact, sum = 0.0L;
    for (int k = 0; k < 40; ++k) {
      sum += term;
      term *= z / static_cast<long double>(k + j + 1);
    }
    return sum;
  }
  const long double e = std::exp(z);
  return j == 1 ? (e - 1.0L) / z : (e - 1.0L - z - z * z / 2.0L) / (z * z * z);
}

Outcome frechet_correctness() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 6;
    const auto c = validate(coupled_market(n, 1000 + trial));
    const RiccatiRhs G(c);
    const Mat g = random_symmetric(n, rng, 2.0);
    const Mat E = random_symmetric(n, rng, 1.0);
    const double eps = 1e-6;
    const Mat fd = (G(g + eps * E) - G(g - eps * E)) / (2.0 * eps);
    worst = std::max(worst, (frechet_apply(c, g, E) - fd).norm() / fd.norm());
  }
  o.require(worst <= 1e-6, "Frechet relative error <= 1e-6");

  const auto c = validate(presets::single_asset_reference());
  const double a = 2.0 * c.params.alpha(0) / c.one_minus_gamma(), q = c.Q(0, 0);
  double worst_phi = 0.0, smallest_z = 1.0;
  for (double gk : {0.0, -0.4, 0.9}) {
    for (double h : {-0.8, -0.1, 0.3, -2e-3, -1e-5, 4e-7, -1e-8}) {
      const long double z = static_cast<long double>(h) * (a - 4.0 * gk * q);
      smallest_z = std::min(smallest_z, std::fabs(static_cast<double>(z)));
      for (int j : {1, 3}) {
        const double expect = static_cast<double>(phi_scalar(j, z));
        const double got = phi_apply(c, Mat::Constant(1, 1, gk), h, j, Mat::Constant(1, 1, 1.0))(0, 0);
        worst_phi = std::max(worst_phi, std::abs(got - expect) / std::abs(expect));
      }
    }
  }
  o.require(worst_phi <= 1e-12, "phi closed forms to 1e-12");
  o.require(smallest_z < 1e-4, "covers |z| < 1e-4");
  o.note("Frechet " + fmt(worst) + ", phi " + fmt(worst_phi));
  return o;
}

Outcome verification_certification() {
  Outcome o;
  const auto cfg = config("oil.json");
  const auto c = validate(cfg.model);
  const auto grid = solve_riccati(c, RiccatiScheme::Erow3, 100, false);
  const auto rep = check_conditions(grid, c);
  o.require(rep.times.size() == 101, "100-step grid");
  double least = 1e300;
  for (const auto& r : rep.conditions) {
    o.require(r.passed, std::string(condition_label(r.id)) + " passes");
    for (double m : r.margins) o.require(m > 0.0, std::string(condition_label(r.id)) + " margin positive");
    least = std::min(least, r.min_margin);
  }
  o.require(rep.passed, "overall verdict");
  auto hot = cfg.model;
  hot.gamma = 0.99;
  const auto ch = validate(hot);
  const auto bad = check_conditions(solve_riccati(ch, RiccatiScheme::Erow3, 100, false), ch);
  o.require(!bad.result(Condition::GammaPolicy).passed, "gamma = 0.99 fails gamma_policy");
  o.note("least margin " + fmt(least) + "; gamma=0.99 gamma_policy margin " +
         fmt(bad.result(Condition::GammaPolicy).min_margin));
  return o;
}

Outcome value_policy_consistency() {
  Outcome o;
  const auto cfg = config("oil.json");
  const auto c = validate(cfg.model);
  const PhiEvaluator phi(c, solve_coefficients(c, CoefficientScheme::Erow3RK3, 50));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ut(0.0, c.params.T), us(0.0, 4.0), ux(1.0, 50.0);
  double worst = 0.0;
  bool homogeneous = true;
  for (int trial = 0; trial < 50; ++trial) {
    const double t = ut(rng), x = ux(rng);
    const Vec S = (Vec(2) << us(rng), us(rng)).finished();
    const Vec grad = phi.grad_phi(t, S);
    for (int i = 0; i < 2; ++i) {
      const double e = 1e-5;
      Vec a = S, b = S;
      a(i) += e;
      b(i) -= e;
      const double fd = (phi.phi(t, a) - phi.phi(t, b)) / (2 * e);
      worst = std::max(worst, std::abs(grad(i) - fd) / std::abs(fd));
    }
    const auto base = phi.feedback_policy(t, x, S);
    for (double lam : {2.0, 0.5, 16.0}) {
      const auto scaled = phi.feedback_policy(t, lam * x, S);
      homogeneous = homogeneous && scaled.pi == lam * base.pi && scaled.c == lam * base.c;
    }
    o.require(phi.feedback_policy(c.params.T, x, S).c == x, "C*(T, x, S) = x");
  }
  o.require(worst <= 1e-5, "gradient vs finite differences <= 1e-5");
  o.require(homogeneous, "policy homogeneous in wealth");
  o.note("gradient " + fmt(worst));
  return o;
}

Outcome fdm_cross_check() {
  Outcome o;
  const auto cfg = config("single_asset.json");
  const auto c = validate(cfg.model);
  o.require(cfg.fdm.spec.N_S == 100 && cfg.fdm.spec.N_t == 100 && cfg.fdm.solver_steps == 25, "100x100 vs 25 steps");
  const auto cmp = compare_fdm(c, cfg.fdm);
  o.require(cmp.fdm.max_error <= cmp.fdm.self_estimate, "FDM error within its self-estimate");
  o.require(cmp.erow3.max_error <= cmp.erow3.self_estimate, "Erow3-RK3 error within its self-estimate");
  o.require(cmp.fdm_space_order >= 1.7 && cmp.fdm_space_order <= 2.3, "FDM second order in space");
  o.require(cmp.erow3.max_error <= cmp.fdm.max_error, "Erow3-RK3 at least as accurate");
  o.require(cmp.erow3.wall_seconds < cmp.fdm.wall_seconds, "Erow3-RK3 strictly faster");
  o.note("FDM " + fmt(cmp.fdm.max_error) + " <= " + fmt(cmp.fdm.self_estimate) + " in " +
         fmt(cmp.fdm.wall_seconds) + " s; Erow3-RK3 " + fmt(cmp.erow3.max_error) + " <= " +
         fmt(cmp.erow3.self_estimate) + " in " + fmt(cmp.erow3.wall_seconds) + " s; space order " +
         fmt(cmp.fdm_space_order));
  return o;
}

Outcome policy_ordering() {
  Outcome o;
  const auto cfg = config("oil.json");
  const auto c = validate(cfg.model);
  const auto& so = cfg.simulate.options;
  o.require(so.paths >= 2000, "M >= 2000");
  o.require(so.x0 == 25.0 && so.S0 == Vec::Constant(2, 2.0), "x = 25, S(0) = (2, 2)");
  const PhiEvaluator phi(c, solve_coefficients(c, cfg.solver.scheme, cfg.simulate.phi_steps));
  const auto cmp = compare_policies(c, phi, cfg.simulate);
  o.require(cmp.rows.size() == 11, "all eleven policies");
  double least_z = 1e300;
  for (std::size_t i = 0; i < cmp.rows.size(); ++i) {
    if (static_cast<int>(i) == cmp.reference) continue;
    const auto& r = cmp.rows[i];
    o.require(r.advantage.mean > 2.0 * r.advantage.std_error, "beats " + r.policy->name);
    least_z = std::min(least_z, r.advantage.mean / r.advantage.std_error);
  }
  const auto& ref = cmp.rows[cmp.reference];
  o.note("numerical " + fmt(ref.utility.mean) + " +- " + fmt(ref.utility.std_error) +
         "; smallest paired z " + fmt(least_z));
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

Outcome determinism() {
  Outcome o;
  const auto base = fs::temp_directory_path() / ("ouhjb_acceptance_" + std::to_string(::getpid()));
  const std::pair<const char*, const char*> runs[] = {{"solve", "decoupled_n10.json"},
                                                      {"convergence", "decoupled_n10.json"},
                                                      {"verify", "oil.json"},
                                                      {"compare-fdm", "single_asset.json"},
                                                      {"simulate", "oil.json"}};
  int files = 0;
  for (const auto& [command, file] : runs) {
    std::vector<fs::path> dirs;
    for (int rep = 0; rep < 2; ++rep) {
      auto cfg = config(file);
      cfg.output = (base / (std::string(command) + "_" + std::to_string(rep))).string();
      // The second simulate run uses one thread to show scheduling does not matter.
      if (rep == 1) cfg.simulate.options.threads = 1;
      o.require(run_command(command, cfg, {false, true}) == 0, std::string(command) + " exits 0");
      dirs.push_back(cfg.output);
    }
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      const auto name = entry.path().filename().string();
      const bool table = entry.path().extension() == ".csv" || entry.path().extension() == ".bin";
      if (!table || name.find("_timing") != std::string::npos) continue;
      o.require(fs::exists(dirs[1] / name) && slurp(entry.path()) == slurp(dirs[1] / name),
                std::string(command) + " " + name + " identical");
      ++files;
    }
  }
  fs::remove_all(base);
  o.note(std::to_string(files) + " files compared (wall-clock timing tables excluded)");
  return o;
}

Outcome pde_residual_order() {
  Outcome o;
  const auto c = validate(presets::single_asset_stiff());
  for (auto scheme : {CoefficientScheme::ExpEulerRK2, CoefficientScheme::Erow3RK3}) {
    std::vector<double> hs, res;
    for (int K : {16, 32, 64, 128, 256}) {
      const PhiEvaluator phi(c, solve_coefficients(c, scheme, K));
      double worst = 0.0;
      for (int q = 1; q <= 3; ++q) {
        const int k = q * K / 4;
        for (double s : {0.5, 1.0, 1.5}) {
          const Vec S = Vec::Constant(1, s);
          worst = std::max(worst, std::abs(pde_residual(phi, k, S)) / phi.phi(phi.path().time(k), S));
        }
      }
      hs.push_back(phi.path().h());
      res.push_back(worst);
    }
    const auto slope = loglog_slope(hs, res);
    const int p = order(scheme);
    const std::string tag(to_string(scheme));
    o.require(slope && *slope >= p - 0.3 && *slope <= p + 0.3, tag + " residual order " + std::to_string(p));
    o.note(tag + " slope " + (slope ? fmt(*slope) : "n/a") + " (" + fmt(res.front()) + " -> " + fmt(res.back()) + ")");
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) configs_dir = argv[1];
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"terminal exactness", terminal_exactness},
      {"convergence orders", convergence_orders},
      {"oracle equivalence", oracle_equivalence},
      {"Frechet and phi functions", frechet_correctness},
      {"verification certification", verification_certification},
      {"value/policy consistency", value_policy_consistency},
      {"FDM cross-check", fdm_cross_check},
      {"policy ordering", policy_ordering},
      {"determinism", determinism},
      {"PDE residual order", pde_residual_order},
  };
  int failures = 0, index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    failures += out.pass ? 0 : 1;
    std::cout << "[" << (out.pass ? "PASS" : "FAIL") << "] " << index << ". " << name << ": " << out.detail
              << std::endl;
  }
  return failures;
}
