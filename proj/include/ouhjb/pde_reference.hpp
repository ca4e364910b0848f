#pragma once

#include <functional>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "ouhjb/closed_form.hpp"
#include "ouhjb/market_model.hpp"

namespace ouhjb {

/// Backward parabolic problem on [0,T] x [S_lo, S_hi]:
///   phi_t + a(S) phi_SS + b(S) phi_S + c(S) phi + source = 0,  phi(T,S) = terminal.
/// `boundary_lo(steps)` / `boundary_hi(steps)` return Dirichlet values at
/// t_j = j T / steps, j = 0..steps.
struct Pde1d {
  double T = 1.0;
  std::function<double(double)> diffusion;
  std::function<double(double)> drift;
  std::function<double(double)> reaction;
  double source = 0.0;
  double terminal = 1.0;
  std::function<std::vector<double>(int)> boundary_lo;
  std::function<std::vector<double>(int)> boundary_hi;
};

enum class FdmTimeScheme {
  ImplicitEuler,
  /// Each step is 2 * (two half steps) - (one full step) of implicit Euler.
  RichardsonEuler,
};

std::string_view to_string(FdmTimeScheme scheme);

struct FdmSpec {
  double S_lo = -10.0;
  double S_hi = 10.0;
  int N_S = 100;
  int N_t = 100;
  FdmTimeScheme time_scheme = FdmTimeScheme::ImplicitEuler;
  bool upwind = false;
};

struct FdmGrid {
  FdmSpec spec;
  double T = 0.0;
  std::vector<double> times;  // t_j, j = 0..N_t
  std::vector<double> S;      // S_i, i = 0..N_S
  Mat phi;                    // phi(t_j, S_i), (N_t+1) x (N_S+1)
  double wall_seconds = 0.0;  // boundary evaluation plus sweep
};

/// Thomas algorithm; lower(0) and upper(m-1) are ignored. Throws SingularSystem on a zero or
/// non-finite pivot.
Vec solve_tridiagonal(const Vec& lower, const Vec& diag, const Vec& upper, const Vec& rhs);

FdmGrid solve_fdm(const Pde1d& pde, const FdmSpec& spec);

/// The reduced PDE for phi in one dimension with boundary columns taken from
/// the quadrature oracle. Requires n = 1 (DimensionMismatch otherwise).
Pde1d phi_pde_1d(const DerivedConstants& consts, const ClosedFormOracle& oracle, double S_lo,
                 double S_hi);

/// Model-based convenience: phi_pde_1d followed by solve_fdm.
FdmGrid solve_fdm_1d(const DerivedConstants& consts, const FdmSpec& spec);

/// Rows t, S_1, phi: the same layout as the value/policy lattice export.
void write_csv(std::ostream& out, const FdmGrid& grid);

}  // namespace ouhjb
