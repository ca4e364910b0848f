#include "ouhjb/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <exception>
#include <thread>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"
#include "ouhjb/verifier.hpp"

namespace ouhjb {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t path, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                    stream};
  return std::mt19937_64(seq);
}

double discount_integrand(const DerivedConstants& c, const Vec& S) {
  const auto& p = c.params;
  return p.rho0 + S.dot(p.rho) + S.dot(p.varrho * S);
}

struct PathResult {
  double utility = 0.0;
  double terminal = 0.0;
  bool absorbed = false;
};

struct Stepper {
  const DerivedConstants& c;
  const Policy& policy;
  const SimulationOptions& opt;
  int N;
  double dt;
  Mat chol_exact;  // Cholesky factor of the one-step OU covariance
  Vec decay;

  PathResult run(int m, PathRecord* rec) const {
    const int n = c.n();
    const auto& p = c.params;
    const double gm = c.gamma();
    const double omg = c.one_minus_gamma();
    const double sdt = std::sqrt(dt);
    const double growth = std::exp(p.r * dt);
    auto noise = make_engine(opt.seed, static_cast<std::uint64_t>(m), 0);
    PolicyStream stream{make_engine(opt.seed, static_cast<std::uint64_t>(m), 1), {}};
    std::normal_distribution<double> normal(0.0, 1.0);

    Vec S = opt.S0;
    Vec Z(n), S_next(n);
    double X = opt.x0;
    double log_psi = 0.0;
    double running = 0.0;
    bool absorbed = false;
    double d_now = discount_integrand(c, S);
    auto check = [&](int k) {
      if (!std::isfinite(X) || !std::isfinite(log_psi) || !S.allFinite()) {
        throw Error(ErrorCode::NonFinitePath,
                    "policy " + policy.name + " path " + std::to_string(m) + " step " + std::to_string(k));
      }
    };

    for (int k = 0; k < N; ++k) {
      const double t = p.T * static_cast<double>(k) / N;
      PolicyAction a;
      if (absorbed) {
        a.pi = Vec::Zero(n);
        a.c = 0.0;
      } else {
        a = policy.rule(t, X, S, stream);
        if (a.pi.size() != n || !a.pi.allFinite() || !std::isfinite(a.c)) {
          throw Error(ErrorCode::NonFinitePath, "policy " + policy.name + " returned a non-finite action at path " +
                                                   std::to_string(m) + " step " + std::to_string(k));
        }
        a.c = std::max(a.c, 0.0);
      }
      const double psi = std::exp(log_psi);
      if (a.c > 0.0) running += std::pow(psi, omg) * std::pow(a.c, gm) / gm * dt;
      if (rec) {
        rec->t.push_back(t);
        rec->S.push_back(S);
        rec->X.push_back(X);
        rec->pi.push_back(a.pi);
        rec->C.push_back(a.c);
        rec->psi.push_back(psi);
      }

      for (int i = 0; i < n; ++i) Z(i) = normal(noise);
      const Vec dB = sdt * Z;
      if (opt.exact_ou) {
        S_next = decay.cwiseProduct(S) + (Vec::Ones(n) - decay).cwiseProduct(c.w) + chol_exact * Z;
      } else {
        S_next = S + (c.Adiag * (c.w - S)) * dt + p.sigma * dB;
      }
      if (!absorbed) {
        const Vec drift = c.excess - c.Adiag * S;
        X = growth * X + (a.pi.dot(drift) - a.c) * dt + a.pi.dot(p.sigma * dB);
        if (X < 0.0) {
          X = 0.0;
          absorbed = true;
        }
      }
      const double d_next = discount_integrand(c, S_next);
      log_psi -= 0.5 * dt * (d_now + d_next) / omg;
      d_now = d_next;
      S = S_next;
      check(k + 1);
    }
    const double psi_T = std::exp(log_psi);
    const double terminal = X > 0.0 ? std::pow(psi_T, omg) * std::pow(X, gm) / gm : 0.0;
    if (rec) {
      rec->t.push_back(p.T);
      rec->S.push_back(S);
      rec->X.push_back(X);
      rec->pi.push_back(Vec::Zero(n));
      rec->C.push_back(0.0);
      rec->psi.push_back(psi_T);
    }
    return {running + terminal, X, absorbed};
  }
};

}  // namespace

SimulationEnsemble simulate_paths(const DerivedConstants& c, const Policy& policy,
                                  const SimulationOptions& opt) {
  const int n = c.n();
  if (opt.paths < 1 || opt.policy_steps < 1 || opt.substeps < 1) {
    throw Error(ErrorCode::InvalidParameter, "paths, policy_steps and substeps must be positive");
  }
  if (opt.S0.size() != n) throw Error(ErrorCode::DimensionMismatch, "S0 size");
  if (!(opt.x0 > 0.0)) throw Error(ErrorCode::NonPositiveWealth, "initial wealth must be positive");
  if (!policy.rule) throw Error(ErrorCode::InvalidParameter, "policy has no rule");

  Stepper st{c, policy, opt, opt.policy_steps * opt.substeps, 0.0, Mat(), Vec()};
  st.dt = c.params.T / st.N;
  if (opt.exact_ou) {
    const auto mom = ou_moments(c, 0.0, Vec::Zero(n), st.dt);
    Eigen::LLT<Mat> llt(mom.Sigma);
    if (llt.info() != Eigen::Success) throw Error(ErrorCode::EigenFailure, "OU step covariance");
    st.chol_exact = llt.matrixL();
    st.decay = (-st.dt * c.params.alpha.array()).exp().matrix();
  }

  const int M = opt.paths;
  const int R = std::clamp(opt.record_paths, 0, M);
  std::vector<PathResult> results(M);
  SimulationEnsemble ens;
  ens.recorded.resize(R);

  int threads = opt.threads > 0 ? opt.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, M);
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](int w) {
    try {
      for (int m = w; m < M; m += threads) {
        results[m] = st.run(m, m < R ? &ens.recorded[m] : nullptr);
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ens.policy = policy.name;
  ens.seed = opt.seed;
  ens.steps = st.N;
  ens.dt = st.dt;
  ens.utility.resize(M);
  ens.terminal_wealth.resize(M);
  ens.absorbed.resize(M);
  for (int m = 0; m < M; ++m) {
    ens.utility[m] = results[m].utility;
    ens.terminal_wealth[m] = results[m].terminal;
    ens.absorbed[m] = results[m].absorbed ? 1 : 0;
    ens.absorbed_count += results[m].absorbed ? 1 : 0;
  }
  return ens;
}

namespace {

Estimate sample_estimate(const std::vector<double>& v) {
  const double M = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= M;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = v.size() > 1 ? ss / (M - 1.0) : 0.0;
  return {mean, std::sqrt(var / M)};
}

}  // namespace

Estimate mean_utility(const SimulationEnsemble& e) { return sample_estimate(e.utility); }

Estimate paired_difference(const SimulationEnsemble& a, const SimulationEnsemble& b) {
  if (a.utility.size() != b.utility.size() || a.seed != b.seed || a.steps != b.steps) {
    throw Error(ErrorCode::InvalidParameter, "paired comparison needs equal seed, steps and paths");
  }
  std::vector<double> d(a.utility.size());
  for (std::size_t m = 0; m < d.size(); ++m) d[m] = a.utility[m] - b.utility[m];
  return sample_estimate(d);
}

std::vector<Policy> policy_library(const DerivedConstants& c, const PhiEvaluator* phi,
                                   const PolicyLibraryOptions& options) {
  if (c.n() != 2) throw Error(ErrorCode::DimensionMismatch, "the comparison policies are two-asset");
  if (!phi) throw Error(ErrorCode::MissingPhi, "the numerical policy needs a phi evaluator");

  auto fixed = [](std::string name, double a1, double a2, double cc, std::string t1, std::string t2,
                  std::string tc) {
    Policy p;
    p.name = std::move(name);
    p.pi_text = t1 + " | " + t2;
    p.c_text = std::move(tc);
    p.rule = [a1, a2, cc](double, double x, const Vec&, PolicyStream&) {
      PolicyAction a;
      a.pi = Vec(2);
      a.pi << a1 * x, a2 * x;
      a.c = cc * x;
      return a;
    };
    return p;
  };

  std::vector<Policy> lib;
  lib.push_back(fixed("Riskless", 0.0, 0.0, 0.5, "0", "0", "X/2"));
  lib.push_back(fixed("No Consumption", 1.0 / 3.0, 1.0 / 3.0, 0.0, "X/3", "X/3", "0"));
  lib.push_back(fixed("No Consumption (alt.)", 0.25, 0.5, 0.0, "X/4", "X/2", "0"));
  lib.push_back(fixed("No Bonds", 0.5, 0.5, 0.25, "X/2", "X/2", "X/4"));
  lib.push_back(fixed("No Bonds (alt.)", 2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, "2X/3", "X/3", "X/3"));

  Policy random;
  random.name = "Random";
  random.pi_text = "xi1 X/2 | xi2 X/2";
  random.c_text = "xi3 X/4";
  const bool redraw = options.redraw_random_each_step;
  random.rule = [redraw](double, double x, const Vec&, PolicyStream& s) {
    if (redraw || s.memo.empty()) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      s.memo.resize(3);
      for (auto& v : s.memo) v = u(s.rng);
    }
    PolicyAction a;
    a.pi = Vec(2);
    a.pi << s.memo[0] * x / 2.0, s.memo[1] * x / 2.0;
    a.c = s.memo[2] * x / 4.0;
    return a;
  };
  lib.push_back(std::move(random));

  lib.push_back(fixed("Balanced Leverage", 1.0, -0.5, 0.5, "X", "-X/2", "X/2"));
  lib.push_back(fixed("Moderate Leverage", 3.0, -2.5, 1.0 / 3.0, "3X", "-2.5X", "X/3"));
  lib.push_back(fixed("High Leverage", -5.0, 5.0, 2.0 / 3.0, "-5X", "5X", "2X/3"));
  lib.push_back(fixed("Extreme Leverage", -8.0, 10.0, 0.25, "-8X", "10X", "X/4"));

  Policy numerical;
  numerical.name = "Numerical Policy";
  numerical.pi_text = "pi*_1 | pi*_2";
  numerical.c_text = "C*";
  numerical.rule = [phi](double t, double x, const Vec& S, PolicyStream&) {
    return phi->feedback_policy(t, x, S);
  };
  lib.push_back(std::move(numerical));
  return lib;
}

void write_comparison_csv(std::ostream& out, const std::vector<PolicyComparisonRow>& rows) {
  csv::Writer w(out);
  w.header({"policy", "pi", "C", "mean_utility", "std_error", "numerical_minus_policy",
            "paired_std_error", "absorbed_paths"});
  for (const auto& r : rows) {
    w.field(r.policy->name).field(r.policy->pi_text).field(r.policy->c_text);
    w.field(r.utility.mean).field(r.utility.std_error);
    w.field(r.advantage.mean).field(r.advantage.std_error).field(r.absorbed);
    w.end_row();
  }
}

void write_paths_csv(std::ostream& out, const SimulationEnsemble& e) {
  csv::Writer w(out);
  if (e.recorded.empty()) return;
  const auto n = e.recorded.front().S.front().size();
  w.field("path").field("t");
  for (Eigen::Index i = 0; i < n; ++i) w.field("S_" + std::to_string(i + 1));
  w.field("X");
  for (Eigen::Index i = 0; i < n; ++i) w.field("pi_" + std::to_string(i + 1));
  w.field("C").field("psi");
  w.end_row();
  for (std::size_t m = 0; m < e.recorded.size(); ++m) {
    const auto& r = e.recorded[m];
    for (std::size_t k = 0; k < r.t.size(); ++k) {
      w.field(static_cast<long long>(m)).field(r.t[k]);
      for (Eigen::Index i = 0; i < n; ++i) w.field(r.S[k](i));
      w.field(r.X[k]);
      for (Eigen::Index i = 0; i < n; ++i) w.field(r.pi[k](i));
      w.field(r.C[k]).field(r.psi[k]);
      w.end_row();
    }
  }
}

}  // namespace ouhjb
