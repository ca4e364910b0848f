#include "ouhjb/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"

namespace ouhjb {

DecoupledParams decoupled_params(const DerivedConstants& c) {
  const int n = c.n();
  const auto& p = c.params;
  const double scale = std::max(1.0, c.Q.diagonal().cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (std::abs(c.Q(i, j)) > 1e-14 * scale) {
        throw Error(ErrorCode::NotDecoupled, "sigma sigma' has off-diagonal entry (" +
                                                 std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  if (p.varrho.cwiseAbs().maxCoeff() > 1e-14) {
    throw Error(ErrorCode::NotDecoupled, "varrho must vanish");
  }
  DecoupledParams d;
  d.n = n;
  d.r = p.r;
  d.gamma = p.gamma;
  d.rho0 = p.rho0;
  d.T = p.T;
  d.q = c.Q.diagonal();
  d.alpha = p.alpha;
  d.mu = p.mu;
  d.w = c.w;
  d.rho = p.rho;
  return d;
}

ClosedFormOracle::ClosedFormOracle(const DerivedConstants& consts, QuadratureOptions options)
    : ClosedFormOracle(decoupled_params(consts), options) {}

ClosedFormOracle::ClosedFormOracle(DecoupledParams params, QuadratureOptions options)
    : p_(std::move(params)), options_(options) {
  if (options_.refine < 2 || options_.refine % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "quadrature refine must be even and >= 2");
  }
  if (options_.point_intervals < 2 || options_.point_intervals % 2 != 0) {
    throw Error(ErrorCode::InvalidParameter, "point_intervals must be even and >= 2");
  }
}

double ClosedFormOracle::g(int i, double t) const {
  const double omg = 1.0 - p_.gamma;
  const double s = std::sqrt(omg);
  const double theta = p_.alpha(i) * (p_.T - t) / s;
  const double th = std::tanh(theta);
  const double scale = p_.gamma * p_.alpha(i) / (2.0 * omg * p_.q(i));
  return scale * th / (th + s);
}

double ClosedFormOracle::kappa(int i, double t) const {
  return 2.0 * p_.q(i) * g(i, t) - p_.alpha(i) / (1.0 - p_.gamma);
}

double ClosedFormOracle::zeta(int i, double t) const {
  const double omg = 1.0 - p_.gamma;
  const double ex = p_.mu(i) * p_.alpha(i) - p_.r;
  return 2.0 * (p_.alpha(i) * p_.w(i) + p_.gamma * ex / omg) * g(i, t) -
         p_.gamma * p_.alpha(i) * ex / (omg * omg * p_.q(i)) - p_.rho(i) / omg;
}

Mat ClosedFormOracle::g_matrix(double t) const {
  Mat out = Mat::Zero(p_.n, p_.n);
  for (int i = 0; i < p_.n; ++i) out(i, i) = g(i, t);
  return out;
}

BenchmarkProfile ClosedFormOracle::profile(double t0, int M) const {
  if (M < 1) throw Error(ErrorCode::InvalidParameter, "profile needs M >= 1");
  const int n = p_.n;
  const int N = 2 * M;  // Simpson panels
  const double span = p_.T - t0;
  auto node = [&](int j) { return j == N ? p_.T : t0 + span * static_cast<double>(j) / N; };

  const double omg = 1.0 - p_.gamma;
  std::vector<Vec> f_sub(N + 1, Vec::Zero(n));
  std::vector<Vec> g_sub(N + 1, Vec::Zero(n));
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i < n; ++i) g_sub[j](i) = g(i, node(j));

  for (int i = 0; i < n; ++i) {
    // P(u) = int_u^T kappa and J(u) = int_u^T zeta e^{-P}, so f(u) = e^{P(u)} J(u).
    double P_right = 0.0;
    double J_right = 0.0;
    double u_right = p_.T;
    double k_right = kappa(i, u_right);
    double z_right = zeta(i, u_right);
    for (int j = N - 1; j >= 0; --j) {
      const double u_left = node(j);
      const double mid = 0.5 * (u_left + u_right);
      const double quarter = 0.5 * (mid + u_right);
      const double k_left = kappa(i, u_left);
      const double k_mid = kappa(i, mid);
      const double P_mid = P_right + (u_right - mid) / 6.0 *
                                         (k_mid + 4.0 * kappa(i, quarter) + k_right);
      const double P_left = P_right + (u_right - u_left) / 6.0 * (k_left + 4.0 * k_mid + k_right);
      const double z_left = zeta(i, u_left);
      const double J_left =
          J_right + (u_right - u_left) / 6.0 *
                        (z_left * std::exp(-P_left) + 4.0 * zeta(i, mid) * std::exp(-P_mid) +
                         z_right * std::exp(-P_right));
      f_sub[j](i) = std::exp(P_left) * J_left;
      P_right = P_left;
      J_right = J_left;
      u_right = u_left;
      k_right = k_left;
      z_right = z_left;
    }
  }

  Vec lin(n);
  double constant = (p_.r * p_.gamma - p_.rho0) / omg;
  for (int i = 0; i < n; ++i) {
    const double ex = p_.mu(i) * p_.alpha(i) - p_.r;
    lin(i) = p_.w(i) * p_.alpha(i) + p_.gamma / omg * ex;
    constant += p_.gamma * ex * ex / (2.0 * omg * omg * p_.q(i));
  }
  auto integrand = [&](int j) {
    const Vec& f = f_sub[j];
    return lin.dot(f) + 0.5 * p_.q.dot(f.cwiseProduct(f)) + p_.q.dot(g_sub[j]);
  };

  BenchmarkProfile out;
  out.times.resize(M + 1);
  out.g.resize(M + 1);
  out.f.resize(M + 1);
  out.f0.assign(M + 1, 0.0);
  double acc = 0.0;
  for (int m = M; m >= 0; --m) {
    if (m < M) {
      const int j = 2 * m;
      acc += (node(j + 2) - node(j)) / 6.0 *
             (integrand(j) + 4.0 * integrand(j + 1) + integrand(j + 2));
    }
    out.times[m] = node(2 * m);
    out.g[m] = g_sub[2 * m];
    out.f[m] = f_sub[2 * m];
    out.f0[m] = acc + constant * (p_.T - node(2 * m));
  }
  return out;
}

double ClosedFormOracle::f(int i, double t) const {
  int M = options_.point_intervals / 2;
  for (int d = 0; d <= options_.max_doublings; ++d, M *= 2) {
    const double coarse = profile(t, M).f[0](i);
    const double fine = profile(t, 2 * M).f[0](i);
    if (std::abs(coarse - fine) <= options_.tolerance) return fine;
  }
  throw Error(ErrorCode::ResolutionTooCoarse, "f quadrature did not reach tolerance");
}

double ClosedFormOracle::f0(double t) const {
  int M = options_.point_intervals / 2;
  for (int d = 0; d <= options_.max_doublings; ++d, M *= 2) {
    const double coarse = profile(t, M).f0[0];
    const double fine = profile(t, 2 * M).f0[0];
    if (std::abs(coarse - fine) <= options_.tolerance) return fine;
  }
  throw Error(ErrorCode::ResolutionTooCoarse, "f0 quadrature did not reach tolerance");
}

namespace {

BenchmarkProfile subsample(const BenchmarkProfile& p, int K, int stride) {
  BenchmarkProfile out;
  for (int k = 0; k <= K; ++k) {
    out.times.push_back(p.times[k * stride]);
    out.g.push_back(p.g[k * stride]);
    out.f.push_back(p.f[k * stride]);
    out.f0.push_back(p.f0[k * stride]);
  }
  return out;
}

}  // namespace

BenchmarkTable ClosedFormOracle::table(int K) const {
  if (K < 1) throw Error(ErrorCode::InvalidParameter, "table needs K >= 1");
  int refine = options_.refine;
  double err = 0.0;
  for (int d = 0; d <= options_.max_doublings; ++d, refine *= 2) {
    const auto coarse = subsample(profile(0.0, K * refine), K, refine);
    auto fine = subsample(profile(0.0, 2 * K * refine), K, 2 * refine);
    err = 0.0;
    for (int k = 0; k <= K; ++k) {
      err = std::max(err, (coarse.f[k] - fine.f[k]).cwiseAbs().maxCoeff());
      err = std::max(err, std::abs(coarse.f0[k] - fine.f0[k]));
    }
    if (err <= options_.tolerance) {
      BenchmarkTable t;
      t.K = K;
      t.T = p_.T;
      t.values = std::move(fine);
      for (int k = 0; k <= K; ++k) t.values.times[k] = k == K ? p_.T : p_.T * k / K;
      t.quadrature_error = err;
      t.refine = 2 * refine;
      return t;
    }
  }
  throw Error(ErrorCode::ResolutionTooCoarse, "benchmark quadrature error estimate " + csv::format(err));
}

namespace {

std::vector<double> phi_from_profile(const BenchmarkProfile& p, const Vec& S, int K, int stride) {
  const int M = static_cast<int>(p.times.size()) - 1;
  std::vector<double> phi1(M + 1);
  for (int m = 0; m <= M; ++m) {
    phi1[m] = std::exp(S.dot(p.g[m].cwiseProduct(S)) + S.dot(p.f[m]) + p.f0[m]);
  }
  std::vector<double> phi2(M + 1, 0.0);
  for (int m = M - 2; m >= 0; m -= 2) {
    phi2[m] = phi2[m + 2] +
              (p.times[m + 2] - p.times[m]) / 6.0 * (phi1[m] + 4.0 * phi1[m + 1] + phi1[m + 2]);
  }
  std::vector<double> out(K + 1);
  for (int k = 0; k <= K; ++k) out[k] = phi1[k * stride] + phi2[k * stride];
  return out;
}

}  // namespace

std::vector<double> ClosedFormOracle::phi_on_grid(const Vec& S, int K) const {
  return phi_on_grid(std::vector<Vec>{S}, K).front();
}

std::vector<std::vector<double>> ClosedFormOracle::phi_on_grid(const std::vector<Vec>& states,
                                                               int K) const {
  if (K < 1) throw Error(ErrorCode::InvalidParameter, "phi_on_grid needs K >= 1");
  for (const auto& S : states) {
    if (S.size() != p_.n) throw Error(ErrorCode::DimensionMismatch, "phi_on_grid state size");
  }
  int refine = options_.refine;
  double err = 0.0;
  for (int d = 0; d <= options_.max_doublings; ++d, refine *= 2) {
    const auto pc = profile(0.0, K * refine);
    const auto pf = profile(0.0, 2 * K * refine);
    std::vector<std::vector<double>> out;
    err = 0.0;
    for (const auto& S : states) {
      const auto coarse = phi_from_profile(pc, S, K, refine);
      auto fine = phi_from_profile(pf, S, K, 2 * refine);
      for (int k = 0; k <= K; ++k) err = std::max(err, std::abs(coarse[k] - fine[k]));
      out.push_back(std::move(fine));
    }
    if (err <= options_.tolerance) return out;
  }
  throw Error(ErrorCode::ResolutionTooCoarse, "phi quadrature error estimate " + csv::format(err));
}

void write_csv(std::ostream& out, const BenchmarkTable& table) {
  csv::Writer w(out);
  const auto n = table.values.f.empty() ? 0 : table.values.f.front().size();
  w.field("t");
  for (Eigen::Index i = 0; i < n; ++i) w.field("g_" + std::to_string(i + 1));
  for (Eigen::Index i = 0; i < n; ++i) w.field("f_" + std::to_string(i + 1));
  w.field("f0");
  w.end_row();
  for (std::size_t k = 0; k < table.values.times.size(); ++k) {
    w.field(table.values.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) w.field(table.values.g[k](i));
    for (Eigen::Index i = 0; i < n; ++i) w.field(table.values.f[k](i));
    w.field(table.values.f0[k]);
    w.end_row();
  }
}

}  // namespace ouhjb
