#include "ouhjb/value_policy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"

namespace ouhjb {

std::vector<double> uniform_quadrature_weights(int m, double h, TimeQuadrature rule) {
  std::vector<double> w(m + 1, 0.0);
  if (m <= 0) return w;
  if (rule == TimeQuadrature::Trapezoid || m == 1) {
    for (int j = 0; j < m; ++j) {
      w[j] += 0.5 * h;
      w[j + 1] += 0.5 * h;
    }
    return w;
  }
  // Odd counts take a 3/8 panel on the first three intervals so the Simpson
  // panels stay anchored at the right end.
  int start = 0;
  if (m % 2 == 1) {
    const double c = 3.0 * h / 8.0;
    w[0] += c;
    w[1] += 3.0 * c;
    w[2] += 3.0 * c;
    w[3] += c;
    start = 3;
  }
  for (int j = start; j < m; j += 2) {
    w[j] += h / 3.0;
    w[j + 1] += 4.0 * h / 3.0;
    w[j + 2] += h / 3.0;
  }
  return w;
}

namespace {

// A single Simpson-mode interval [t_k, t_{k+1}] borrows t_{k-1}: integrating
// the parabola through the three nodes keeps the local error at O(h^4).
constexpr double kBackWeights[3] = {-1.0 / 12.0, 8.0 / 12.0, 5.0 / 12.0};

TimeQuadrature default_rule(const CoefficientPath& path) {
  return order(path.scheme) >= 3 ? TimeQuadrature::Simpson : TimeQuadrature::Trapezoid;
}

}  // namespace

PhiEvaluator::PhiEvaluator(const DerivedConstants& consts, CoefficientPath path, double exponent_cap)
    : PhiEvaluator(consts, path, default_rule(path), exponent_cap) {}

PhiEvaluator::PhiEvaluator(const DerivedConstants& consts, CoefficientPath path,
                           TimeQuadrature quadrature, double exponent_cap)
    : consts_(consts), path_(std::move(path)), quadrature_(quadrature), exponent_cap_(exponent_cap) {
  if (path_.K() < 1 || static_cast<int>(path_.f_values.size()) != path_.K() + 1 ||
      static_cast<int>(path_.f0_values.size()) != path_.K() + 1) {
    throw Error(ErrorCode::InvalidParameter, "coefficient path is incomplete");
  }
  if (path_.g_values().front().rows() != consts_.n()) {
    throw Error(ErrorCode::DimensionMismatch, "coefficient path dimension differs from model");
  }
}

PhiEvaluator::Coefficients PhiEvaluator::interpolate(double t, int& k_next) const {
  const int K = path_.K();
  const double T = path_.T();
  if (!(t >= -1e-12 * T && t <= T * (1.0 + 1e-12))) {
    throw Error(ErrorCode::InvalidParameter, "time " + std::to_string(t) + " outside [0, T]");
  }
  const double s = std::clamp(t / path_.h(), 0.0, static_cast<double>(K));
  int k = static_cast<int>(std::floor(s));
  double theta = s - k;
  if (theta > 1.0 - 1e-10) {
    ++k;
    theta = 0.0;
  } else if (theta < 1e-10) {
    theta = 0.0;
  }
  if (k >= K) {
    k = K;
    theta = 0.0;
  }
  const auto& g = path_.g_values();
  if (theta == 0.0) {
    k_next = k;
    return {g[k], path_.f_values[k], path_.f0_values[k]};
  }
  k_next = k + 1;
  return {(1.0 - theta) * g[k] + theta * g[k + 1],
          (1.0 - theta) * path_.f_values[k] + theta * path_.f_values[k + 1],
          (1.0 - theta) * path_.f0_values[k] + theta * path_.f0_values[k + 1]};
}

double PhiEvaluator::exponent(const Mat& g, const Vec& f, double f0, const Vec& S) const {
  return S.dot(g * S) + S.dot(f) + f0;
}

double PhiEvaluator::checked_exp(double e) const {
  if (!(e <= exponent_cap_)) {
    throw Error(ErrorCode::Overflow, "phi1 exponent " + std::to_string(e) + " exceeds cap");
  }
  return std::exp(e);
}

double PhiEvaluator::phi1(double t, const Vec& S) const {
  if (S.size() != consts_.n()) throw Error(ErrorCode::DimensionMismatch, "state size");
  int k_next = 0;
  const auto c = interpolate(t, k_next);
  return checked_exp(exponent(c.g, c.f, c.f0, S));
}

void PhiEvaluator::phi_and_grad(double t, const Vec& S, double& phi, Vec& grad) const {
  if (S.size() != consts_.n()) throw Error(ErrorCode::DimensionMismatch, "state size");
  int k_next = 0;
  const auto c = interpolate(t, k_next);
  const double p_t = checked_exp(exponent(c.g, c.f, c.f0, S));
  phi = p_t;
  grad = p_t * (c.f + 2.0 * c.g * S);

  const auto& g = path_.g_values();
  const double t_next = path_.time(k_next);
  const double gap = t_next - t;
  if (gap > 0.0) {
    // Partial interval [t, t_next] between grid nodes.
    const double p_next =
        checked_exp(exponent(g[k_next], path_.f_values[k_next], path_.f0_values[k_next], S));
    const Vec d_next = path_.f_values[k_next] + 2.0 * g[k_next] * S;
    const Vec d_t = c.f + 2.0 * c.g * S;
    if (quadrature_ == TimeQuadrature::Simpson) {
      int dummy = 0;
      const auto m = interpolate(0.5 * (t + t_next), dummy);
      const double p_m = checked_exp(exponent(m.g, m.f, m.f0, S));
      phi += gap / 6.0 * (p_t + 4.0 * p_m + p_next);
      grad += gap / 6.0 * (p_t * d_t + 4.0 * p_m * (m.f + 2.0 * m.g * S) + p_next * d_next);
    } else {
      phi += 0.5 * gap * (p_t + p_next);
      grad += 0.5 * gap * (p_t * d_t + p_next * d_next);
    }
  }

  const int m = path_.K() - k_next;
  auto add = [&](int k, double weight) {
    const double p = checked_exp(exponent(g[k], path_.f_values[k], path_.f0_values[k], S));
    phi += weight * p;
    grad += (weight * p) * (path_.f_values[k] + 2.0 * g[k] * S);
  };
  if (m == 1 && quadrature_ == TimeQuadrature::Simpson && k_next >= 1) {
    for (int j = 0; j < 3; ++j) add(k_next - 1 + j, kBackWeights[j] * path_.h());
    return;
  }
  const auto w = uniform_quadrature_weights(m, path_.h(), quadrature_);
  for (int j = 0; j <= m; ++j) {
    if (w[j] != 0.0) add(k_next + j, w[j]);
  }
}

std::vector<double> PhiEvaluator::phi_at_nodes(const Vec& S) const {
  if (S.size() != consts_.n()) throw Error(ErrorCode::DimensionMismatch, "state size");
  const int K = path_.K();
  const auto& g = path_.g_values();
  std::vector<double> p1(K + 1);
  for (int k = 0; k <= K; ++k) {
    p1[k] = checked_exp(exponent(g[k], path_.f_values[k], path_.f0_values[k], S));
  }
  std::vector<double> out(K + 1);
  for (int k = 0; k <= K; ++k) {
    double phi = p1[k];
    if (K - k == 1 && quadrature_ == TimeQuadrature::Simpson && k >= 1) {
      for (int j = 0; j < 3; ++j) phi += kBackWeights[j] * path_.h() * p1[k - 1 + j];
      out[k] = phi;
      continue;
    }
    const auto w = uniform_quadrature_weights(K - k, path_.h(), quadrature_);
    for (int j = 0; j <= K - k; ++j) {
      if (w[j] != 0.0) phi += w[j] * p1[k + j];
    }
    out[k] = phi;
  }
  return out;
}

double PhiEvaluator::phi(double t, const Vec& S) const {
  double p = 0.0;
  Vec grad;
  phi_and_grad(t, S, p, grad);
  return p;
}

Vec PhiEvaluator::grad_phi(double t, const Vec& S) const {
  double p = 0.0;
  Vec grad;
  phi_and_grad(t, S, p, grad);
  return grad;
}

double PhiEvaluator::value(double t, double x, const Vec& S, double psi) const {
  if (!(x > 0.0)) throw Error(ErrorCode::NonPositiveWealth, "wealth must be positive");
  if (!(psi > 0.0)) throw Error(ErrorCode::InvalidParameter, "discount factor must be positive");
  const double gm = consts_.gamma();
  const double omg = 1.0 - gm;
  return std::pow(psi, omg) * std::pow(x, gm) * std::pow(phi(t, S), omg) / gm;
}

PolicyAction PhiEvaluator::feedback_policy(double t, double x, const Vec& S) const {
  double p = 0.0;
  Vec grad;
  phi_and_grad(t, S, p, grad);
  if (!(p >= 1e-300)) throw Error(ErrorCode::PhiUnderflow, "phi below 1e-300");
  const Vec drift = consts_.excess - consts_.Adiag * S;
  PolicyAction a;
  a.pi = (x / consts_.one_minus_gamma()) * (consts_.Qinv * drift) + (x / p) * grad;
  a.c = x / p;
  return a;
}

double pde_residual(const PhiEvaluator& phi, int k, const Vec& S, double dS) {
  const auto& c = phi.constants();
  const auto& path = phi.path();
  const int K = path.K();
  const int n = c.n();
  if (k < 2 || k > K - 2) throw Error(ErrorCode::InvalidParameter, "residual needs 2 <= k <= K-2");
  if (S.size() != n) throw Error(ErrorCode::DimensionMismatch, "state size");
  const double h = path.h();
  auto at = [&](int j, const Vec& x) { return phi.phi_at_nodes(x)[j]; };

  const auto nodes = phi.phi_at_nodes(S);
  const double u = nodes[k];
  const double u_t = (-nodes[k + 2] + 8.0 * nodes[k + 1] - 8.0 * nodes[k - 1] + nodes[k - 2]) / (12.0 * h);

  Vec grad(n);
  Mat hess(n, n);
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e(i) = dS;
    const double p1 = at(k, S + e), m1 = at(k, S - e);
    const double p2 = at(k, S + 2.0 * e), m2 = at(k, S - 2.0 * e);
    grad(i) = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * dS);
    hess(i, i) = (-p2 + 16.0 * p1 - 30.0 * u + 16.0 * m1 - m2) / (12.0 * dS * dS);
    for (int j = 0; j < i; ++j) {
      Vec f = Vec::Zero(n);
      f(j) = dS;
      const double v = (at(k, S + e + f) - at(k, S + e - f) - at(k, S - e + f) + at(k, S - e - f)) /
                       (4.0 * dS * dS);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  const double gm = c.gamma();
  const Vec drift = c.Adiag * (c.w - S) + gm / c.one_minus_gamma() * (c.excess - c.Adiag * S);
  return u_t + drift.dot(grad) + field_H(c, S) * u + 0.5 * (c.Q * hess).trace() + 1.0;
}

void write_phi_lattice(std::ostream& out, const PhiEvaluator& phi, const std::vector<double>& times,
                       const std::vector<Vec>& states) {
  csv::Writer w(out);
  const int n = phi.constants().n();
  w.field("t");
  for (int i = 0; i < n; ++i) w.field("S_" + std::to_string(i + 1));
  w.field("phi");
  w.end_row();
  for (double t : times) {
    for (const auto& S : states) {
      w.field(t);
      for (int i = 0; i < n; ++i) w.field(S(i));
      w.field(phi.phi(t, S));
      w.end_row();
    }
  }
}

}  // namespace ouhjb
