#pragma once

#include <cstddef>
#include <vector>

#include "lltf/grid.hpp"
#include "lltf/kernels.hpp"
#include "lltf/report.hpp"

namespace lltf {

// Channel-resolved longitudinal densities rho_m(z) of the coupled
// lowest-band theory, together with the chemical potential mu that
// fixed their total mass. Channels whose unscreened well never opens
// (sup_z Z V_m(z) + mu <= 0) are identically zero.
struct ChannelDensity {
  UniformGrid grid;
  std::vector<std::vector<double>> rho;  // [m][j], m = 0 .. m_max
  double Z = 0.0;
  double B = 0.0;
  double mu = 0.0;      // nonpositive
  double N = 0.0;       // captured mass, sum of channel masses
  bool capped = false;  // requested mass exceeded the critical number; mu pinned at 0

  int m_max() const { return static_cast<int>(rho.size()) - 1; }
  double channel_mass(int m) const;
  double mass() const;
};

struct DstfOptions {
  double mixing = 0.5;      // initial damping of the fixed-point sweep
  double tol = 1e-10;       // sup-norm Thomas-Fermi residual across channels
  double mass_tol = 1e-10;  // mu search stops at |mass - N| <= mass_tol * max(N, Z)
  int max_iters = 3000;     // sweep budget per fixed-mu solve
  int bisect_iters = 80;    // chemical-potential bisection budget
  int m_limit = -1;         // restrict to channels 0 .. m_limit; -1 means the table's m_max

  // Critical states of the single-channel theory carry an extended contact
  // zone (well and density both near zero over many nodes) where the sweep
  // residual stalls at a grid noise floor instead of converging; subcritical
  // and multi-channel solves are unaffected. A stall at budget exhaustion is
  // accepted when the residual is below accept_tol * Z * sup V_0 (the well
  // depth scale), and throws SolverError otherwise. Diagnostics report the
  // residual actually reached.
  double accept_tol = 1e-4;
};

struct DstfDiagnostics {
  int iterations = 0;  // fixed-point sweeps, summed over the chemical-potential search
  int bisections = 0;
  double residual = 0.0;  // sup-norm TF residual of the returned iterate
};

// Energy of a channel density: kinetic-like pi^2/3 sum_m int rho_m^3,
// attraction -Z sum_m int V_m rho_m, and the channel-coupled repulsion
// 1/2 sum_{m,n} int int V_{m,n}(z-z') rho_m(z) rho_n(z'), all by trapezoid
// sums with the pair kernels convolved exactly on the table's difference
// grid. Throws std::invalid_argument on channel or grid mismatch.
EnergyReport dstf_functional(const ChannelDensity& rho, const KernelTable& K);

// The same energy evaluated through the three-dimensional route: the density
// is reconstructed as rho(x) = (B/2pi) sum_m chi_m(x_perp) rho_m(z) on the
// transverse annuli chi_m, and each term carries the annulus areas and
// reconstruction factors explicitly. Agrees with dstf_functional to rounding.
EnergyReport mstf_energy(const ChannelDensity& rho, const KernelTable& K);

// Area of the m-th transverse annulus sqrt(2m/B) <= |x_perp| <= sqrt(2(m+1)/B).
double annulus_area(int m, double B);

// Coupled fixed point 3 kappa rho_m^2 = [Z V_m - sum_n V_{m,n} * rho_n + mu]_+
// at the mass constraint sum_m int rho_m = N. mu <= 0 is found by bisection;
// each fixed-mu problem is solved by a damped Jacobi sweep over all channels.
// Requests beyond the critical mass return the mu = 0 solution with the
// captured mass and capped = true. Throws std::invalid_argument on bad
// inputs, SolverError when an iteration budget is exhausted.
ChannelDensity solve_dstf(double Z, double B, double N, const KernelTable& K,
                          const DstfOptions& opts = {}, DstfDiagnostics* diag = nullptr);

// The mu = 0 solution: maximal mass the potential binds.
ChannelDensity solve_dstf_critical(double Z, double B, const KernelTable& K,
                                   const DstfOptions& opts = {},
                                   DstfDiagnostics* diag = nullptr);

// Total mass of the mu = 0 solution. Throws TruncationError when the table's
// outermost channel still holds at least truncation_tol * Z of mass, since
// the table then provably undercounts.
double critical_particle_number(double Z, double B, const KernelTable& K,
                                double truncation_tol = 1e-4, const DstfOptions& opts = {});

// Single-channel (m = 0) restriction of the theory.
ChannelDensity solve_1dstf(double Z, double B, double N, const KernelTable& K,
                           const DstfOptions& opts = {});
// Its absolute minimum: mu = 0, mass free.
ChannelDensity solve_1dstf_minimum(double Z, double B, const KernelTable& K,
                                   const DstfOptions& opts = {});

// Minimum of the single-channel functional without the repulsion term:
// -(2/3pi) Z^{3/2} B^{1/4} int (V_0(z; B=1))^{3/2} dz, the weak-coupling
// floor of the one-dimensional energy. The z-integral is evaluated once by
// tanh-sinh quadrature (split at z = 12 with an inverted tail map) and cached.
double weak_1d_energy(double Z, double B);

// Channel budget heuristic: the atom's transverse extent holds roughly
// B r_S^2 / 2 annuli, with r_S the neutral support radius 3.7 Z^{1/5} B^{-2/5}.
// Generous by design; channels beyond the last occupied one converge to zero.
int suggest_m_max(double Z, double B);

}  // namespace lltf
