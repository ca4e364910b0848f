#include "ouhjb/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "ouhjb/closed_form.hpp"
#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/verifier.hpp"

#ifndef OUHJB_VERSION
#define OUHJB_VERSION "unknown"
#endif

namespace ouhjb {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

const char* version_string() { return OUHJB_VERSION; }

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] > 0 && y[i] > 0) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  if (lx.size() < 2) return std::nullopt;
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

ConvergenceStudy convergence_study(const DerivedConstants& consts, int k_min, int k_max) {
  const ClosedFormOracle oracle(consts);
  ConvergenceStudy out;
  for (auto scheme : {CoefficientScheme::ExpEulerRK2, CoefficientScheme::Erow3RK3}) {
    std::vector<double> hs, eg, ef, ef0;
    for (int k = k_min; k <= k_max; ++k) {
      ConvergenceRow row;
      row.scheme = scheme;
      row.k = k;
      row.K = 1 << k;
      const auto t0 = Clock::now();
      const auto path = solve_coefficients(consts, scheme, row.K);
      row.wall_seconds = seconds_since(t0);
      row.h = path.h();
      const auto bench = oracle.table(row.K);
      for (int j = 0; j <= row.K; ++j) {
        const Mat& g = path.g_values()[j];
        row.err_g = std::max(row.err_g, (g.diagonal() - bench.values.g[j]).cwiseAbs().maxCoeff());
        Mat off = g;
        off.diagonal().setZero();
        row.offdiag_g = std::max(row.offdiag_g, off.norm());
        row.err_f = std::max(row.err_f, (path.f_values[j] - bench.values.f[j]).cwiseAbs().maxCoeff());
        row.err_f0 = std::max(row.err_f0, std::abs(path.f0_values[j] - bench.values.f0[j]));
      }
      hs.push_back(row.h);
      eg.push_back(row.err_g);
      ef.push_back(row.err_f);
      ef0.push_back(row.err_f0);
      out.rows.push_back(row);
    }
    out.slopes.push_back({scheme, loglog_slope(hs, eg), loglog_slope(hs, ef), loglog_slope(hs, ef0)});
  }
  return out;
}

namespace {

std::vector<Vec> states_1d(const std::vector<double>& S) {
  std::vector<Vec> out;
  for (double s : S) out.push_back(Vec::Constant(1, s));
  return out;
}

// Max |a(j*at, i*as) - b(j*bt, i*bs)| over a rows x cols base lattice.
double lattice_diff(const Mat& a, int at, int as, const Mat& b, int bt, int bs, Eigen::Index rows,
                    Eigen::Index cols) {
  double d = 0.0;
  for (Eigen::Index j = 0; j < rows; ++j)
    for (Eigen::Index i = 0; i < cols; ++i) d = std::max(d, std::abs(a(j * at, i * as) - b(j * bt, i * bs)));
  return d;
}

void richardson(SurfaceError& s, double d1, double d2, double safety) {
  if (d1 > 0 && d2 > 0 && d1 > d2) {
    const double p = std::log2(d1 / d2);
    s.observed_order = p;
    const double r = std::pow(2.0, p);
    s.self_estimate = safety * d1 * r / (r - 1.0);
  } else {
    s.observed_order = std::numeric_limits<double>::quiet_NaN();
    s.self_estimate = std::numeric_limits<double>::quiet_NaN();
  }
}

Mat benchmark_surface(const ClosedFormOracle& oracle, const std::vector<double>& S, int steps) {
  const auto b = oracle.phi_on_grid(states_1d(S), steps);
  Mat out(steps + 1, static_cast<Eigen::Index>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i)
    for (int j = 0; j <= steps; ++j) out(j, static_cast<Eigen::Index>(i)) = b[i][j];
  return out;
}

Mat erow3_surface(const DerivedConstants& c, int K, const std::vector<double>& S) {
  const PhiEvaluator phi(c, solve_coefficients(c, CoefficientScheme::Erow3RK3, K));
  Mat out(K + 1, static_cast<Eigen::Index>(S.size()));
  for (std::size_t i = 0; i < S.size(); ++i) {
    const auto col = phi.phi_at_nodes(Vec::Constant(1, S[i]));
    for (int k = 0; k <= K; ++k) out(k, static_cast<Eigen::Index>(i)) = col[k];
  }
  return out;
}

}  // namespace

FdmComparison compare_fdm(const DerivedConstants& c, const FdmConfig& cfg) {
  if (c.n() != 1) throw Error(ErrorCode::DimensionMismatch, "the FDM comparison is one-dimensional");
  const ClosedFormOracle oracle(c);
  FdmComparison out;
  const double Fs = out.safety_factor;
  const FdmSpec base = cfg.spec;
  auto scaled = [&](int sx, int st) {
    FdmSpec s = base;
    s.N_S *= sx;
    s.N_t *= st;
    return s;
  };

  // FDM: base grid timed, then h/2 and h/4 in both directions.
  FdmGrid g1;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.repeats; ++r) {
    const auto t0 = Clock::now();
    g1 = solve_fdm_1d(c, base);
    best = std::min(best, seconds_since(t0));
  }
  const auto g2 = solve_fdm_1d(c, scaled(2, 2));
  const auto g4 = solve_fdm_1d(c, scaled(4, 4));
  auto& F = out.fdm;
  F.times = g1.times;
  F.S = g1.S;
  F.value = g1.phi;
  F.benchmark = benchmark_surface(oracle, g1.S, base.N_t);
  F.max_error = (F.value - F.benchmark).cwiseAbs().maxCoeff();
  F.wall_seconds = best;
  const auto rows = g1.phi.rows(), cols = g1.phi.cols();
  richardson(F, lattice_diff(g1.phi, 1, 1, g2.phi, 2, 2, rows, cols),
             lattice_diff(g2.phi, 2, 2, g4.phi, 4, 4, rows, cols), Fs);

  // Space-only refinement at fixed N_t.
  {
    const auto s2 = solve_fdm_1d(c, scaled(2, 1));
    const auto s4 = solve_fdm_1d(c, scaled(4, 1));
    const double d1 = lattice_diff(g1.phi, 1, 1, s2.phi, 1, 2, rows, cols);
    const double d2 = lattice_diff(s2.phi, 1, 2, s4.phi, 1, 4, rows, cols);
    out.fdm_space_order = d1 > 0 && d2 > 0 ? std::log2(d1 / d2) : std::numeric_limits<double>::quiet_NaN();
  }

  // Erow3-RK3 on the same S nodes.
  const int K = cfg.solver_steps;
  auto& E = out.erow3;
  best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < cfg.repeats; ++r) {
    const auto t0 = Clock::now();
    E.value = erow3_surface(c, K, g1.S);
    best = std::min(best, seconds_since(t0));
  }
  E.wall_seconds = best;
  E.S = g1.S;
  E.times.resize(K + 1);
  for (int k = 0; k <= K; ++k) E.times[k] = k == K ? c.params.T : c.params.T * k / K;
  E.benchmark = benchmark_surface(oracle, g1.S, K);
  E.max_error = (E.value - E.benchmark).cwiseAbs().maxCoeff();
  {
    const Mat e2 = erow3_surface(c, 2 * K, g1.S);
    const Mat e4 = erow3_surface(c, 4 * K, g1.S);
    const auto rows = E.value.rows(), cols = E.value.cols();
    const double d1 = lattice_diff(E.value, 1, 1, e2, 2, 1, rows, cols);
    const double d2 = lattice_diff(e2, 2, 1, e4, 4, 1, rows, cols);
    richardson(E, d1, d2, Fs);
  }
  return out;
}

PolicyComparison compare_policies(const DerivedConstants& c, const PhiEvaluator& phi,
                                  const SimulateConfig& cfg) {
  PolicyLibraryOptions lib_opt;
  lib_opt.redraw_random_each_step = cfg.redraw_random;
  auto all = policy_library(c, &phi, lib_opt);
  PolicyComparison out;
  for (const auto& name : cfg.policies) {
    const bool known = std::any_of(all.begin(), all.end(), [&](const Policy& p) { return p.name == name; });
    if (!known) throw Error(ErrorCode::ConfigError, "simulate.policies: unknown policy '" + name + "'");
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    const bool numerical = i + 1 == all.size();
    const bool wanted = cfg.policies.empty() ||
                        std::find(cfg.policies.begin(), cfg.policies.end(), all[i].name) != cfg.policies.end();
    if (wanted || numerical) out.policies.push_back(all[i]);
  }
  out.reference = static_cast<int>(out.policies.size()) - 1;
  for (const auto& p : out.policies) out.ensembles.push_back(simulate_paths(c, p, cfg.options));
  const auto& ref = out.ensembles[out.reference];
  for (std::size_t i = 0; i < out.policies.size(); ++i) {
    PolicyComparisonRow row;
    row.policy = &out.policies[i];
    row.utility = mean_utility(out.ensembles[i]);
    row.advantage = paired_difference(ref, out.ensembles[i]);
    row.absorbed = out.ensembles[i].absorbed_count;
    out.rows.push_back(row);
  }
  return out;
}

// ---- commands ----

namespace {

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  std::filesystem::create_directories(cfg.output);
  const auto path = std::filesystem::path(cfg.output) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  return out;
}

void write_summary(const RunConfig& cfg, const std::string& command, const json& results) {
  json doc;
  doc["command"] = command;
  doc["version"] = version_string();
  doc["config"] = to_json(cfg);
  doc["results"] = results;
  auto out = open_output(cfg, command + "_summary.json");
  out << doc.dump(2) << "\n";
}

json slope_json(const std::optional<double>& s) { return s ? json(*s) : json(nullptr); }

void write_scheme_profiles(const RunConfig& cfg, const CoefficientPath& path, const BenchmarkTable& bench) {
  const std::string tag(to_string(path.scheme));
  const int n = static_cast<int>(path.f_values.front().size());
  {
    auto out = open_output(cfg, "profile_" + tag + "_f.csv");
    csv::Writer w(out);
    w.field("t");
    for (int i = 0; i < n; ++i) w.field("f_" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i) w.field("benchmark_f_" + std::to_string(i + 1));
    w.end_row();
    for (int k = 0; k <= path.K(); ++k) {
      w.field(path.time(k));
      for (int i = 0; i < n; ++i) w.field(path.f_values[k](i));
      for (int i = 0; i < n; ++i) w.field(bench.values.f[k](i));
      w.end_row();
    }
  }
  {
    auto out = open_output(cfg, "profile_" + tag + "_f0.csv");
    csv::Writer w(out);
    w.header({"t", "f0", "benchmark_f0"});
    for (int k = 0; k <= path.K(); ++k) {
      w.field(path.time(k)).field(path.f0_values[k]).field(bench.values.f0[k]);
      w.end_row();
    }
  }
  {
    auto out = open_output(cfg, "profile_" + tag + "_error.csv");
    csv::Writer w(out);
    w.field("t");
    for (int i = 0; i < n; ++i) w.field("abs_err_f_" + std::to_string(i + 1));
    w.field("abs_err_f0");
    w.end_row();
    for (int k = 0; k <= path.K(); ++k) {
      w.field(path.time(k));
      for (int i = 0; i < n; ++i) w.field(std::abs(path.f_values[k](i) - bench.values.f[k](i)));
      w.field(std::abs(path.f0_values[k] - bench.values.f0[k]));
      w.end_row();
    }
  }
}

bool is_decoupled(const DerivedConstants& c) {
  try {
    decoupled_params(c);
    return true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotDecoupled) throw;
    return false;
  }
}

void say(const CommandOptions& o, const std::string& line) {
  if (!o.quiet) std::cout << line << "\n";
}

}  // namespace

int cmd_solve(const RunConfig& cfg, const CommandOptions& opt) {
  const auto c = validate(cfg.model);
  const int K = cfg.solver.steps;
  const auto path = solve_coefficients(c, cfg.solver.scheme, K);
  {
    auto out = open_output(cfg, "riccati.csv");
    write_csv(out, path.riccati);
  }
  {
    auto out = open_output(cfg, "coefficients.csv");
    write_csv(out, path);
  }
  {
    auto out = open_output(cfg, "coefficients.bin");
    write_binary(out, path);
  }
  json results;
  results["scheme"] = std::string(to_string(path.scheme));
  results["K"] = K;
  results["h"] = path.h();
  results["f0_at_0"] = path.f0_values.front();
  if (is_decoupled(c)) {
    const ClosedFormOracle oracle(c);
    const auto bench = oracle.table(K);
    {
      auto out = open_output(cfg, "benchmark.csv");
      write_csv(out, bench);
    }
    for (auto scheme : {CoefficientScheme::ExpEulerRK2, CoefficientScheme::Erow3RK3}) {
      const auto p = scheme == path.scheme ? path : solve_coefficients(c, scheme, K);
      write_scheme_profiles(cfg, p, bench);
      double ef = 0, ef0 = 0;
      for (int k = 0; k <= K; ++k) {
        ef = std::max(ef, (p.f_values[k] - bench.values.f[k]).cwiseAbs().maxCoeff());
        ef0 = std::max(ef0, std::abs(p.f0_values[k] - bench.values.f0[k]));
      }
      results["benchmark"][std::string(to_string(scheme))] = {{"max_err_f", ef}, {"max_err_f0", ef0}};
    }
    results["benchmark_quadrature_error"] = bench.quadrature_error;
  }
  write_summary(cfg, "solve", results);
  say(opt, "solve: " + std::string(to_string(path.scheme)) + " K=" + std::to_string(K) + " -> " + cfg.output);
  return 0;
}

int cmd_convergence(const RunConfig& cfg, const CommandOptions& opt) {
  const auto c = validate(cfg.model);
  const auto study = convergence_study(c, cfg.convergence.k_min, cfg.convergence.k_max);
  {
    auto out = open_output(cfg, "convergence.csv");
    csv::Writer w(out);
    w.header({"scheme", "k", "K", "h", "err_g", "offdiag_g", "err_f", "err_f0"});
    for (const auto& r : study.rows) {
      w.field(to_string(r.scheme)).field(r.k).field(r.K).field(r.h);
      w.field(r.err_g).field(r.offdiag_g).field(r.err_f).field(r.err_f0);
      w.end_row();
    }
  }
  json results;
  {
    auto out = open_output(cfg, "convergence_slopes.csv");
    csv::Writer w(out);
    w.header({"scheme", "quantity", "slope"});
    for (const auto& s : study.slopes) {
      const std::string tag(to_string(s.scheme));
      const std::pair<const char*, const std::optional<double>*> items[] = {
          {"g", &s.g}, {"f", &s.f}, {"f0", &s.f0}};
      for (const auto& [name, val] : items) {
        results["slopes"][tag][name] = slope_json(*val);
        if (!*val) continue;
        w.field(tag).field(name).field(**val);
        w.end_row();
      }
    }
  }
  {
    auto out = open_output(cfg, "convergence_timing.csv");
    csv::Writer w(out);
    w.header({"scheme", "K", "wall_seconds", "err_f", "err_f0"});
    for (const auto& r : study.rows) {
      w.field(to_string(r.scheme)).field(r.K).field(r.wall_seconds).field(r.err_f).field(r.err_f0);
      w.end_row();
    }
  }
  write_summary(cfg, "convergence", results);
  for (const auto& s : study.slopes) {
    say(opt, "convergence: " + std::string(to_string(s.scheme)) + " slope f=" +
                 (s.f ? csv::format(*s.f) : "n/a") + " f0=" + (s.f0 ? csv::format(*s.f0) : "n/a"));
  }
  return 0;
}

namespace {

VerificationReport run_verification(const RunConfig& cfg, const DerivedConstants& c) {
  const auto grid = solve_riccati(c, cfg.verify.scheme, cfg.verify.steps, false);
  VerificationOptions vo;
  vo.sigma_start = cfg.verify.sigma_start;
  return check_conditions(grid, c, vo);
}

}  // namespace

int cmd_verify(const RunConfig& cfg, const CommandOptions& opt) {
  const auto c = validate(cfg.model);
  const auto rep = run_verification(cfg, c);
  {
    auto out = open_output(cfg, "verification.csv");
    write_csv(out, rep);
  }
  json results;
  {
    auto out = open_output(cfg, "verification_conditions.csv");
    csv::Writer w(out);
    w.header({"condition", "bound", "min_margin", "t_at_min", "passed", "refine_nodes"});
    for (const auto& r : rep.conditions) {
      w.field(condition_label(r.id)).field(r.bound).field(r.min_margin);
      w.field(rep.times[r.argmin]).field(r.passed ? 1 : 0).field(static_cast<int>(r.refine_at.size()));
      w.end_row();
      results["conditions"][condition_label(r.id)] = {
          {"bound", r.bound}, {"min_margin", r.min_margin}, {"passed", r.passed}};
    }
  }
  results["passed"] = rep.passed;
  results["novikov_surrogate"] = check_novikov_surrogate(rep);
  results["caveat"] = rep.caveat;
  write_summary(cfg, "verify", results);
  say(opt, verdict_line(rep));
  say(opt, std::string("measure change (gamma_policy): ") + (check_novikov_surrogate(rep) ? "ok" : "not certified"));
  say(opt, "note: " + rep.caveat);
  return rep.passed ? 0 : 3;
}

int cmd_compare_fdm(const RunConfig& cfg, const CommandOptions& opt) {
  const auto c = validate(cfg.model);
  const auto cmp = compare_fdm(c, cfg.fdm);
  auto lattice = [&](const std::string& name, const SurfaceError& s) {
    auto out = open_output(cfg, name);
    csv::Writer w(out);
    w.header({"t", "S_1", "phi", "benchmark", "error"});
    for (std::size_t j = 0; j < s.times.size(); ++j) {
      for (std::size_t i = 0; i < s.S.size(); ++i) {
        const auto jj = static_cast<Eigen::Index>(j), ii = static_cast<Eigen::Index>(i);
        w.field(s.times[j]).field(s.S[i]).field(s.value(jj, ii)).field(s.benchmark(jj, ii));
        w.field(s.value(jj, ii) - s.benchmark(jj, ii));
        w.end_row();
      }
    }
  };
  lattice("fdm_lattice.csv", cmp.fdm);
  lattice("erow3_lattice.csv", cmp.erow3);
  const std::string fdm_grid = std::to_string(cfg.fdm.spec.N_S) + "x" + std::to_string(cfg.fdm.spec.N_t);
  const std::string erow_grid = "K=" + std::to_string(cfg.fdm.solver_steps);
  {
    auto out = open_output(cfg, "compare_fdm.csv");
    csv::Writer w(out);
    w.header({"method", "grid", "max_error", "self_estimate", "observed_order", "space_order"});
    w.field("fdm-" + std::string(to_string(cfg.fdm.spec.time_scheme))).field(fdm_grid);
    w.field(cmp.fdm.max_error).field(cmp.fdm.self_estimate).field(cmp.fdm.observed_order);
    w.field(cmp.fdm_space_order);
    w.end_row();
    w.field("erow3-rk3").field(erow_grid).field(cmp.erow3.max_error).field(cmp.erow3.self_estimate);
    w.field(cmp.erow3.observed_order).field("");
    w.end_row();
  }
  {
    auto out = open_output(cfg, "compare_fdm_timing.csv");
    csv::Writer w(out);
    w.header({"method", "grid", "wall_seconds", "max_error"});
    w.field("fdm").field(fdm_grid).field(cmp.fdm.wall_seconds).field(cmp.fdm.max_error);
    w.end_row();
    w.field("erow3-rk3").field(erow_grid).field(cmp.erow3.wall_seconds).field(cmp.erow3.max_error);
    w.end_row();
  }
  json results;
  results["fdm"] = {{"max_error", cmp.fdm.max_error},
                    {"self_estimate", cmp.fdm.self_estimate},
                    {"observed_order", cmp.fdm.observed_order},
                    {"space_order", cmp.fdm_space_order},
                    {"wall_seconds", cmp.fdm.wall_seconds}};
  results["erow3_rk3"] = {{"max_error", cmp.erow3.max_error},
                          {"self_estimate", cmp.erow3.self_estimate},
                          {"observed_order", cmp.erow3.observed_order},
                          {"wall_seconds", cmp.erow3.wall_seconds}};
  if (cmp.fdm.wall_seconds > 0) {
    results["wall_time_reduction"] = 1.0 - cmp.erow3.wall_seconds / cmp.fdm.wall_seconds;
  }
  write_summary(cfg, "compare-fdm", results);
  say(opt, "compare-fdm: fdm max error " + csv::format(cmp.fdm.max_error) + " in " +
               csv::format(cmp.fdm.wall_seconds) + " s; erow3-rk3 max error " +
               csv::format(cmp.erow3.max_error) + " in " + csv::format(cmp.erow3.wall_seconds) + " s");
  return 0;
}

int cmd_simulate(const RunConfig& cfg, const CommandOptions& opt) {
  const auto c = validate(cfg.model);
  const auto rep = run_verification(cfg, c);
  say(opt, verdict_line(rep));
  if (!rep.passed && !opt.force) {
    std::cerr << "simulate: verification failed; the feedback policy is not certified (use --force)\n";
    return 3;
  }
  const PhiEvaluator phi(c, solve_coefficients(c, cfg.solver.scheme, cfg.simulate.phi_steps));
  const auto cmp = compare_policies(c, phi, cfg.simulate);
  {
    auto out = open_output(cfg, "policy_comparison.csv");
    write_comparison_csv(out, cmp.rows);
  }
  if (cfg.simulate.options.record_paths > 0) {
    auto out = open_output(cfg, "paths_numerical.csv");
    write_paths_csv(out, cmp.ensembles[cmp.reference]);
  }
  json results;
  results["verification_passed"] = rep.passed;
  results["forced"] = !rep.passed;
  const auto& so = cfg.simulate.options;
  results["value_function_at_start"] = phi.value(0.0, so.x0, so.S0, 1.0);
  for (const auto& r : cmp.rows) {
    results["policies"].push_back({{"name", r.policy->name},
                                   {"mean_utility", r.utility.mean},
                                   {"std_error", r.utility.std_error},
                                   {"numerical_minus_policy", r.advantage.mean},
                                   {"paired_std_error", r.advantage.std_error},
                                   {"absorbed_paths", r.absorbed}});
  }
  write_summary(cfg, "simulate", results);
  for (const auto& r : cmp.rows) {
    say(opt, "  " + r.policy->name + ": " + csv::format(r.utility.mean) + " +- " +
                 csv::format(r.utility.std_error));
  }
  return 0;
}

int run_command(const std::string& name, const RunConfig& cfg, const CommandOptions& opt) {
  try {
    if (name == "solve") return cmd_solve(cfg, opt);
    if (name == "convergence") return cmd_convergence(cfg, opt);
    if (name == "verify") return cmd_verify(cfg, opt);
    if (name == "compare-fdm") return cmd_compare_fdm(cfg, opt);
    if (name == "simulate") return cmd_simulate(cfg, opt);
    std::cerr << "unknown command '" << name << "'\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace ouhjb
