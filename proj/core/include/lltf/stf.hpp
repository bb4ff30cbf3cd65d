#pragma once

#include <cstddef>
#include <vector>

#include <lltf/grid.hpp>
#include <lltf/report.hpp>

namespace lltf {

// Self-consistent radial density of the strong-field Thomas-Fermi atom.
// The solved state satisfies 4 pi^4 rho^2 / B^2 = [phi + nu]_+ with
// phi = Z/r - rho * 1/|x|, so rho has sharp compact support.
struct RadialDensity {
  RadialGrid grid;
  std::vector<double> rho;   // values at grid nodes, >= 0
  double Z = 0.0;
  double B = 0.0;
  double N = 0.0;            // 4 pi integral of rho r^2 dr
  double nu = 0.0;           // chemical potential, <= 0 (0 for the neutral atom)
};

struct StfOptions {
  std::size_t points = 4000;      // radial nodes (geometric-then-uniform)
  double mixing = 0.5;            // initial damping, adapted during the run
  double tol = 1e-9;              // residual target, see solve_stf
  // the marginal (quartic) support edge of the neutral atom pins the sup-norm
  // residual at the grid noise floor ~1e-6 * Z/length; a run that exhausts
  // max_iters is accepted if it got below accept_tol, rejected otherwise
  double accept_tol = 1e-4;
  std::size_t max_iters = 30000;  // inner fixed-point budget
  std::size_t bisect_iters = 80;  // outer chemical-potential search budget
};

// characteristic length Z^{1/5} B^{-2/5}; energies scale as Z^{9/5} B^{2/5}
double stf_length(double Z, double B);
double stf_energy_scale(double Z, double B);

// default solver grid: geometric from 1e-6 * length to the knee, uniform
// out to twice the support-radius bound 3.3 pi^2 * length
RadialGrid stf_grid(double Z, double B, std::size_t points = 4000);

// phi at every grid node by the shell theorem (cumulative trapezoid)
std::vector<double> newton_radial_potential(const RadialDensity& d);
// phi at an arbitrary radius inside the grid span; exact for the
// piecewise-linear density the trapezoid rule integrates
double newton_radial_potential(const RadialDensity& d, double r);

// Damped fixed-point solve of the TF equation. The inner iteration stops
// when sup_r |4 pi^4 rho^2/B^2 - [phi+nu]_+| < tol * Z/length, or at the
// max_iters floor if below accept_tol on the same scale; for N < Z an outer
// bisection adjusts nu until |mass - N| < tol * N. N == Z is solved directly
// at nu = 0 with free total mass. Throws std::invalid_argument for N > Z or
// nonpositive inputs, std::runtime_error with a residual history on
// non-convergence.
RadialDensity solve_stf(double Z, double B, double N, const StfOptions& opts = {});
RadialDensity solve_stf(double Z, double B, double N, const RadialGrid& grid,
                        const StfOptions& opts = {});
RadialDensity solve_stf_neutral(double Z, double B, const StfOptions& opts = {});

// kinetic_like = (4 pi^4 / 3 B^2) int rho^3, attraction = -Z int rho/|x|,
// repulsion = D(rho, rho) via the shell theorem
EnergyReport stf_energy(const RadialDensity& d);
// equivalent total from the bracket form: -(B/3pi^2) int [phi+nu]_+^{3/2}
// + nu N - D(rho, rho); agrees with stf_energy at the fixed point
double stf_energy_reconstructed(const RadialDensity& d);

// largest node with rho above 1e-12 * max rho; throws if the support
// touches the last grid node
double support_radius(const RadialDensity& d);
// log-log slope of [phi+nu]_+ against (rS - r) near the support edge;
// the effective potential vanishes quartically, so this sits near 4
double edge_exponent(const RadialDensity& d);

// sup-norm of 4 pi^4 rho^2/B^2 - [phi+nu]_+ over the grid
double tf_residual(const RadialDensity& d);

}  // namespace lltf
