#include "ouhjb/pde_reference.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <string>

#include "ouhjb/csv.hpp"
#include "ouhjb/error.hpp"

namespace ouhjb {

std::string_view to_string(FdmTimeScheme scheme) {
  return scheme == FdmTimeScheme::ImplicitEuler ? "implicit-euler" : "richardson-euler";
}

Vec solve_tridiagonal(const Vec& lower, const Vec& diag, const Vec& upper, const Vec& rhs) {
  const Eigen::Index m = diag.size();
  Vec c(m), d(m);
  double piv = diag(0);
  if (!std::isfinite(piv) || std::abs(piv) < 1e-300) {
    throw Error(ErrorCode::SingularSystem, "zero pivot in row 0");
  }
  c(0) = m > 1 ? upper(0) / piv : 0.0;
  d(0) = rhs(0) / piv;
  for (Eigen::Index i = 1; i < m; ++i) {
    piv = diag(i) - lower(i) * c(i - 1);
    if (!std::isfinite(piv) || std::abs(piv) < 1e-300) {
      throw Error(ErrorCode::SingularSystem, "zero pivot in row " + std::to_string(i));
    }
    c(i) = i + 1 < m ? upper(i) / piv : 0.0;
    d(i) = (rhs(i) - lower(i) * d(i - 1)) / piv;
  }
  Vec x(m);
  x(m - 1) = d(m - 1);
  for (Eigen::Index i = m - 2; i >= 0; --i) x(i) = d(i) - c(i) * x(i + 1);
  return x;
}

namespace {

// Interior operator rows for unknowns S_1..S_{N-1}.
struct Stencil {
  Vec lo, mid, up;
};

Stencil build_stencil(const Pde1d& pde, const std::vector<double>& S, bool upwind) {
  const int N = static_cast<int>(S.size()) - 1;
  const double dx = S[1] - S[0];
  Stencil st{Vec::Zero(N - 1), Vec::Zero(N - 1), Vec::Zero(N - 1)};
  for (int i = 1; i < N; ++i) {
    const double a = pde.diffusion(S[i]);
    const double b = pde.drift(S[i]);
    const double c = pde.reaction(S[i]);
    double lo = a / (dx * dx);
    double up = a / (dx * dx);
    double mid = -2.0 * a / (dx * dx) + c;
    if (upwind) {
      if (b >= 0) {
        up += b / dx;
        mid -= b / dx;
      } else {
        lo -= b / dx;
        mid += b / dx;
      }
    } else {
      up += 0.5 * b / dx;
      lo -= 0.5 * b / dx;
    }
    st.lo(i - 1) = lo;
    st.mid(i - 1) = mid;
    st.up(i - 1) = up;
  }
  return st;
}

// One implicit Euler step in reversed time: (I - dt L) u_new = u_old + dt source,
// with Dirichlet values at both ends of u_new.
Vec implicit_step(const Stencil& st, const Vec& u_old, double dt, double source, double b_lo,
                  double b_hi) {
  const Eigen::Index m = st.mid.size();
  Vec lower = -dt * st.lo;
  Vec diag = Vec::Ones(m) - dt * st.mid;
  Vec upper = -dt * st.up;
  Vec rhs = u_old.segment(1, m).array() + dt * source;
  rhs(0) += dt * st.lo(0) * b_lo;
  rhs(m - 1) += dt * st.up(m - 1) * b_hi;
  Vec u(m + 2);
  u(0) = b_lo;
  u(m + 1) = b_hi;
  u.segment(1, m) = solve_tridiagonal(lower, diag, upper, rhs);
  return u;
}

}  // namespace

FdmGrid solve_fdm(const Pde1d& pde, const FdmSpec& spec) {
  if (spec.N_S < 2 || spec.N_t < 1 || !(spec.S_hi > spec.S_lo) || !(pde.T > 0)) {
    throw Error(ErrorCode::InvalidParameter, "invalid FDM grid");
  }
  const int Nx = spec.N_S;
  const int Nt = spec.N_t;
  const bool richardson = spec.time_scheme == FdmTimeScheme::RichardsonEuler;
  const auto t0 = std::chrono::steady_clock::now();
  const int bsteps = richardson ? 2 * Nt : Nt;
  const auto blo = pde.boundary_lo(bsteps);
  const auto bhi = pde.boundary_hi(bsteps);
  if (static_cast<int>(blo.size()) != bsteps + 1 || static_cast<int>(bhi.size()) != bsteps + 1) {
    throw Error(ErrorCode::DimensionMismatch, "boundary vectors have the wrong length");
  }
  const int bstride = richardson ? 2 : 1;

  FdmGrid out;
  out.spec = spec;
  out.T = pde.T;
  out.S.resize(Nx + 1);
  for (int i = 0; i <= Nx; ++i) {
    out.S[i] = i == Nx ? spec.S_hi : spec.S_lo + (spec.S_hi - spec.S_lo) * i / Nx;
  }
  out.times.resize(Nt + 1);
  for (int j = 0; j <= Nt; ++j) out.times[j] = j == Nt ? pde.T : pde.T * j / Nt;
  out.phi.resize(Nt + 1, Nx + 1);

  const Stencil st = build_stencil(pde, out.S, spec.upwind);
  const double dt = pde.T / Nt;
  Vec u = Vec::Constant(Nx + 1, pde.terminal);
  u(0) = blo[bsteps];
  u(Nx) = bhi[bsteps];
  out.phi.row(Nt) = u.transpose();
  for (int j = Nt - 1; j >= 0; --j) {
    const int b = j * bstride;
    if (richardson) {
      const Vec full = implicit_step(st, u, dt, pde.source, blo[b], bhi[b]);
      const Vec half = implicit_step(st, u, 0.5 * dt, pde.source, blo[b + 1], bhi[b + 1]);
      const Vec two = implicit_step(st, half, 0.5 * dt, pde.source, blo[b], bhi[b]);
      u = 2.0 * two - full;
    } else {
      u = implicit_step(st, u, dt, pde.source, blo[b], bhi[b]);
    }
    out.phi.row(j) = u.transpose();
  }
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Pde1d phi_pde_1d(const DerivedConstants& c, const ClosedFormOracle& oracle, double S_lo,
                 double S_hi) {
  if (c.n() != 1) throw Error(ErrorCode::DimensionMismatch, "the FDM reference is one-dimensional");
  const double a = c.params.alpha(0);
  const double q = c.Q(0, 0);
  const double w = c.w(0);
  const double mu = c.params.mu(0);
  const double r = c.params.r;
  const double gm = c.gamma();
  const double omg = c.one_minus_gamma();
  Pde1d pde;
  pde.T = c.params.T;
  pde.diffusion = [q](double) { return 0.5 * q; };
  pde.drift = [=](double S) { return a * (w - S) + gm / omg * (a * (mu - S) - r); };
  pde.reaction = [c](double S) { return field_H(c, Vec::Constant(1, S)); };
  pde.source = 1.0;
  pde.terminal = 1.0;
  pde.boundary_lo = [&oracle, S_lo](int steps) {
    return oracle.phi_on_grid(Vec::Constant(1, S_lo), steps);
  };
  pde.boundary_hi = [&oracle, S_hi](int steps) {
    return oracle.phi_on_grid(Vec::Constant(1, S_hi), steps);
  };
  return pde;
}

FdmGrid solve_fdm_1d(const DerivedConstants& consts, const FdmSpec& spec) {
  const ClosedFormOracle oracle(consts);
  return solve_fdm(phi_pde_1d(consts, oracle, spec.S_lo, spec.S_hi), spec);
}

void write_csv(std::ostream& out, const FdmGrid& grid) {
  csv::Writer w(out);
  w.header({"t", "S_1", "phi"});
  for (int j = 0; j < static_cast<int>(grid.times.size()); ++j) {
    for (int i = 0; i < static_cast<int>(grid.S.size()); ++i) {
      w.field(grid.times[j]).field(grid.S[i]).field(grid.phi(j, i));
      w.end_row();
    }
  }
}

}  // namespace ouhjb
