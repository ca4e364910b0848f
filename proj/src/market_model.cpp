#include "ouhjb/market_model.hpp"

#include <cmath>
#include <string>

#include "ouhjb/error.hpp"

namespace ouhjb {
namespace {

void require_dims(bool ok, const std::string& field) {
  if (!ok) throw Error(ErrorCode::DimensionMismatch, "field '" + field + "'");
}

void require_finite(bool ok, const std::string& field) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, "non-finite entries in '" + field + "'");
}

}  // namespace

DerivedConstants derive_unchecked(const ModelParams& params) {
  DerivedConstants c;
  c.params = params;
  const int n = params.n;
  c.Q = params.sigma * params.sigma.transpose();
  c.Q = 0.5 * (c.Q + c.Q.transpose());
  c.Adiag = params.alpha.asDiagonal();
  c.w.resize(n);
  for (int i = 0; i < n; ++i) {
    c.w(i) = params.mu(i) + params.sigma.row(i).squaredNorm() / (2.0 * params.alpha(i));
  }
  Eigen::LLT<Mat> llt(c.Q);
  if (llt.info() == Eigen::Success) {
    c.Qinv = llt.solve(Mat::Identity(n, n));
  } else {
    c.Qinv = c.Q.completeOrthogonalDecomposition().pseudoInverse();
  }
  c.Qinv = 0.5 * (c.Qinv + c.Qinv.transpose());
  c.Gamma = c.Adiag * c.Qinv * c.Adiag;
  c.excess = params.alpha.cwiseProduct(params.mu) - params.r * Vec::Ones(n);
  return c;
}

DerivedConstants validate(const ModelParams& params, const ValidationOptions& options) {
  const int n = params.n;
  if (n <= 0) throw Error(ErrorCode::DimensionMismatch, "field 'n' must be positive");
  require_dims(params.rho.size() == n, "rho");
  require_dims(params.alpha.size() == n, "alpha");
  require_dims(params.mu.size() == n, "mu");
  require_dims(params.varrho.rows() == n && params.varrho.cols() == n, "varrho");
  require_dims(params.sigma.rows() == n && params.sigma.cols() == n, "sigma");

  require_finite(std::isfinite(params.r), "r");
  require_finite(std::isfinite(params.rho0), "rho0");
  require_finite(params.rho.allFinite(), "rho");
  require_finite(params.varrho.allFinite(), "varrho");
  require_finite(params.alpha.allFinite(), "alpha");
  require_finite(params.mu.allFinite(), "mu");
  require_finite(params.sigma.allFinite(), "sigma");

  if (!(params.gamma > 0.0 && params.gamma < 1.0)) {
    throw Error(ErrorCode::GammaOutOfRange,
                "field 'gamma' = " + std::to_string(params.gamma) + " not in (0,1)");
  }
  if (!(params.T > 0.0) || !std::isfinite(params.T)) {
    throw Error(ErrorCode::InvalidParameter, "field 'T' must be positive");
  }
  for (int i = 0; i < n; ++i) {
    if (!(params.alpha(i) > 0.0)) {
      throw Error(ErrorCode::NonPositiveAlpha,
                  "field 'alpha[" + std::to_string(i) + "]' = " + std::to_string(params.alpha(i)));
    }
  }

  // Numerical rank of sigma from column-pivoted QR.
  const double sigma_norm = params.sigma.norm();
  if (sigma_norm == 0.0) throw Error(ErrorCode::SingularSigma, "field 'sigma' is zero");
  Eigen::ColPivHouseholderQR<Mat> qr(params.sigma);
  const double pivot_tol = options.sigma_rank_tol * sigma_norm;
  for (int i = 0; i < n; ++i) {
    if (std::abs(qr.matrixQR()(i, i)) <= pivot_tol) {
      throw Error(ErrorCode::SingularSigma,
                  "field 'sigma' has numerical rank " + std::to_string(i) + " < " +
                      std::to_string(n));
    }
  }

  const double varrho_norm = params.varrho.norm();
  const double asym = (params.varrho - params.varrho.transpose()).norm();
  if (varrho_norm > 0.0 && asym > options.varrho_asymmetry_tol * varrho_norm) {
    throw Error(ErrorCode::AsymmetricVarrho,
                "field 'varrho' relative asymmetry " + std::to_string(asym / varrho_norm));
  }

  ModelParams sym = params;
  sym.varrho = 0.5 * (params.varrho + params.varrho.transpose());
  return derive_unchecked(sym);
}

double discount_rate(const DerivedConstants& c, const Vec& S) {
  const auto& p = c.params;
  return -(p.rho0 + S.dot(p.rho) + S.dot(p.varrho * S)) / c.one_minus_gamma();
}

double field_H(const DerivedConstants& c, const Vec& S) {
  const double g = c.gamma();
  const double omg = c.one_minus_gamma();
  const Vec d = c.excess - c.Adiag * S;
  return c.params.r * g / omg + discount_rate(c, S) + g * d.dot(c.Qinv * d) / (2.0 * omg * omg);
}

}  // namespace ouhjb
