#include "ouhjb/coefficients.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"

namespace ouhjb {

std::string_view to_string(CoefficientScheme scheme) {
  return scheme == CoefficientScheme::ExpEulerRK2 ? "expeuler-rk2" : "erow3-rk3";
}

RiccatiScheme riccati_scheme(CoefficientScheme scheme) {
  return scheme == CoefficientScheme::ExpEulerRK2 ? RiccatiScheme::ExpEuler
                                                  : RiccatiScheme::Erow3;
}

int order(CoefficientScheme scheme) { return scheme == CoefficientScheme::ExpEulerRK2 ? 2 : 3; }

RkTableau RkTableau::midpoint() {
  RkTableau t;
  t.order = 2;
  t.weights = {0.0, 1.0};
  t.abscissae = {0.0, 0.5};
  t.stages = {{}, {0.5}};
  return t;
}

RkTableau RkTableau::kutta3() {
  RkTableau t;
  t.order = 3;
  t.weights = {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0};
  t.abscissae = {0.0, 0.5, 1.0};
  t.stages = {{}, {0.5}, {-1.0, 2.0}};
  return t;
}

RkTableau RkTableau::for_scheme(CoefficientScheme scheme) {
  return scheme == CoefficientScheme::ExpEulerRK2 ? midpoint() : kutta3();
}

bool RkTableau::is_consistent() const {
  if (abscissae.size() != weights.size() || stages.size() != weights.size()) return false;
  double sum_d = 0.0;
  for (double d : weights) sum_d += d;
  if (std::abs(sum_d - 1.0) > 1e-14) return false;
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (stages[i].size() > i) return false;
    double row = 0.0;
    for (double m : stages[i]) row += m;
    if (std::abs(row - abscissae[i]) > 1e-14) return false;
  }
  return true;
}

LinearRhsTerms linear_rhs_terms(const DerivedConstants& c) {
  const double g = c.gamma();
  const double omg = c.one_minus_gamma();
  LinearRhsTerms t;
  t.A = c.Adiag / omg;
  t.B = -2.0 * c.Q;
  t.C = -2.0 * c.Adiag * c.w - 2.0 * g * c.excess / omg;
  t.D = g * c.Adiag * (c.Qinv * c.excess) / (omg * omg) + c.params.rho / omg;
  return t;
}

Vec rhs_F(const DerivedConstants& c, const Mat& g, const Vec& f) {
  if (g.rows() != c.n() || g.cols() != c.n() || f.size() != c.n()) {
    throw Error(ErrorCode::DimensionMismatch, "rhs_F operand sizes");
  }
  const double omg = c.one_minus_gamma();
  const double gam = c.gamma();
  const Vec gf_term = -2.0 * (g * (c.Q * f));
  const Vec gc_term = g * (-2.0 * c.Adiag * c.w - 2.0 * gam * c.excess / omg);
  const Vec D = gam * c.Adiag * (c.Qinv * c.excess) / (omg * omg) + c.params.rho / omg;
  return c.Adiag * f / omg + gf_term + gc_term + D;
}

double rhs_F0(const DerivedConstants& c, const Mat& g, const Vec& f) {
  const double omg = c.one_minus_gamma();
  const double gam = c.gamma();
  const auto& p = c.params;
  return -c.w.dot(c.Adiag * f) - gam / omg * c.excess.dot(f) - 0.5 * f.dot(c.Q * f) -
         (g * c.Q).trace() - gam * c.excess.dot(c.Qinv * c.excess) / (2.0 * omg * omg) -
         (p.r * gam - p.rho0) / omg;
}

double lipschitz_f(const DerivedConstants& c, const RiccatiGrid& riccati) {
  const auto terms = linear_rhs_terms(c);
  double best = 0.0;
  for (const auto& g : riccati.values) {
    const Mat J = terms.A + g * terms.B;
    Eigen::JacobiSVD<Mat> svd(J);
    best = std::max(best, svd.singularValues()(0));
  }
  return best;
}

namespace {

enum class Abscissa { Right, Half, Left };

Abscissa classify(double l) {
  if (l == 0.0) return Abscissa::Right;
  if (l == 0.5) return Abscissa::Half;
  if (l == 1.0) return Abscissa::Left;
  throw Error(ErrorCode::MissingStageValue,
              "no stored abscissa for l = " + std::to_string(l));
}

}  // namespace

CoefficientPath solve_coefficients(const DerivedConstants& c, const RiccatiGrid& riccati,
                                   const RkTableau& tableau, CoefficientScheme tag) {
  if (!tableau.is_consistent()) {
    throw Error(ErrorCode::InvalidParameter, "inconsistent Runge-Kutta tableau");
  }
  const int K = riccati.K;
  const int s = tableau.size();
  const double h = riccati.h;
  const int n = c.n();

  std::vector<Abscissa> where(s);
  for (int i = 0; i < s; ++i) {
    where[i] = classify(tableau.abscissae[i]);
    if (where[i] == Abscissa::Half && !riccati.has_half_steps()) {
      throw Error(ErrorCode::MissingStageValue,
                  "tableau stage " + std::to_string(i) + " needs g at half steps");
    }
  }

  const double lf = lipschitz_f(c, riccati);
  if (lf > 0.0 && h > 1.0 / (2.0 * lf)) {
    throw Error(ErrorCode::StepTooLarge, "h = " + std::to_string(h) + " exceeds 1/(2 L_f) = " +
                                             std::to_string(1.0 / (2.0 * lf)));
  }

  CoefficientPath path;
  path.scheme = tag;
  path.riccati = riccati;
  path.f_values.assign(K + 1, Vec::Zero(n));
  path.f0_values.assign(K + 1, 0.0);
  path.f_half.assign(K, Vec::Zero(n));

  auto g_at = [&](int k, Abscissa a) -> const Mat& {
    switch (a) {
      case Abscissa::Right: return riccati.values[k + 1];
      case Abscissa::Half: return riccati.half_values[k];
      case Abscissa::Left: break;
    }
    return riccati.values[k];
  };

  std::vector<Vec> y(s);
  // Step from t_{k+1} back to t_k; stage i sits at t_{k+1} - l_i h and the
  // backward derivative is -F.
  for (int k = K - 1; k >= 0; --k) {
    const Vec& f_right = path.f_values[k + 1];
    Vec f_left = f_right;
    for (int i = 0; i < s; ++i) {
      Vec arg = f_right;
      for (int j = 0; j < i; ++j) arg += h * tableau.stages[i][j] * y[j];
      y[i] = -rhs_F(c, g_at(k, where[i]), arg);
      f_left += h * tableau.weights[i] * y[i];
    }
    path.f_values[k] = f_left;

    const Vec dleft = rhs_F(c, riccati.values[k], f_left);
    const Vec dright = rhs_F(c, riccati.values[k + 1], f_right);
    path.f_half[k] = 0.5 * (f_left + f_right) + h / 8.0 * (dleft - dright);

    double f0 = path.f0_values[k + 1];
    for (int i = 0; i < s; ++i) {
      const Vec& f_stage = where[i] == Abscissa::Right ? f_right
                           : where[i] == Abscissa::Half ? path.f_half[k]
                                                        : f_left;
      f0 += h * tableau.weights[i] * -rhs_F0(c, g_at(k, where[i]), f_stage);
    }
    path.f0_values[k] = f0;

    if (!f_left.allFinite() || !std::isfinite(f0)) {
      throw Error(ErrorCode::StepTooLarge, "non-finite coefficients at step " + std::to_string(k));
    }
  }
  return path;
}

CoefficientPath solve_coefficients(const DerivedConstants& c, CoefficientScheme scheme, int K) {
  const auto tableau = RkTableau::for_scheme(scheme);
  const auto grid = solve_riccati(c, riccati_scheme(scheme), K, /*need_half_steps=*/true);
  return solve_coefficients(c, grid, tableau, scheme);
}

void write_csv(std::ostream& out, const CoefficientPath& path) {
  csv::Writer w(out);
  const auto n = path.f_values.empty() ? 0 : path.f_values.front().size();
  w.field("t");
  for (Eigen::Index i = 0; i < n; ++i) w.field("f_" + std::to_string(i + 1));
  w.field("f0");
  w.end_row();
  for (int k = 0; k <= path.K(); ++k) {
    w.field(path.time(k));
    for (Eigen::Index i = 0; i < n; ++i) w.field(path.f_values[k](i));
    w.field(path.f0_values[k]);
    w.end_row();
  }
}

// Binary layout (little-endian):
//   "OUCP" u32 version i32 scheme i32 riccati_scheme i32 n i32 K f64 T u8 has_half
//   g[K+1] (n*n col-major), g_half[K] if has_half, f[K+1] (n), f0[K+1], f_half[K] (n)
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary path format assumes a little-endian host");

constexpr std::array<char, 4> kMagic{'O', 'U', 'C', 'P'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw Error(ErrorCode::IoError, "truncated coefficient path");
  return value;
}

void put_doubles(std::ostream& out, const double* data, Eigen::Index count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

void get_doubles(std::istream& in, double* data, Eigen::Index count) {
  in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
  if (!in) throw Error(ErrorCode::IoError, "truncated coefficient path");
}

}  // namespace

void write_binary(std::ostream& out, const CoefficientPath& path) {
  const auto& grid = path.riccati;
  const int n = grid.values.empty() ? 0 : static_cast<int>(grid.values.front().rows());
  out.write(kMagic.data(), kMagic.size());
  put(out, kVersion);
  put(out, static_cast<std::int32_t>(path.scheme));
  put(out, static_cast<std::int32_t>(grid.scheme));
  put(out, static_cast<std::int32_t>(n));
  put(out, static_cast<std::int32_t>(grid.K));
  put(out, grid.T);
  put(out, static_cast<std::uint8_t>(grid.has_half_steps() ? 1 : 0));
  for (const auto& g : grid.values) put_doubles(out, g.data(), g.size());
  for (const auto& g : grid.half_values) put_doubles(out, g.data(), g.size());
  for (const auto& f : path.f_values) put_doubles(out, f.data(), f.size());
  put_doubles(out, path.f0_values.data(), static_cast<Eigen::Index>(path.f0_values.size()));
  for (const auto& f : path.f_half) put_doubles(out, f.data(), f.size());
  if (!out) throw Error(ErrorCode::IoError, "failed writing coefficient path");
}

CoefficientPath read_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw Error(ErrorCode::IoError, "bad coefficient path magic");
  if (get<std::uint32_t>(in) != kVersion) {
    throw Error(ErrorCode::IoError, "unsupported coefficient path version");
  }
  CoefficientPath path;
  path.scheme = static_cast<CoefficientScheme>(get<std::int32_t>(in));
  auto& grid = path.riccati;
  grid.scheme = static_cast<RiccatiScheme>(get<std::int32_t>(in));
  const int n = get<std::int32_t>(in);
  grid.K = get<std::int32_t>(in);
  grid.T = get<double>(in);
  if (n <= 0 || grid.K < 1) throw Error(ErrorCode::IoError, "corrupt coefficient path header");
  grid.h = grid.T / grid.K;
  const bool has_half = get<std::uint8_t>(in) != 0;
  grid.values.assign(grid.K + 1, Mat(n, n));
  for (auto& g : grid.values) get_doubles(in, g.data(), g.size());
  if (has_half) {
    grid.half_values.assign(grid.K, Mat(n, n));
    for (auto& g : grid.half_values) get_doubles(in, g.data(), g.size());
  }
  path.f_values.assign(grid.K + 1, Vec(n));
  for (auto& f : path.f_values) get_doubles(in, f.data(), f.size());
  path.f0_values.assign(grid.K + 1, 0.0);
  get_doubles(in, path.f0_values.data(), grid.K + 1);
  path.f_half.assign(grid.K, Vec(n));
  for (auto& f : path.f_half) get_doubles(in, f.data(), f.size());
  return path;
}

}  // namespace ouhjb
