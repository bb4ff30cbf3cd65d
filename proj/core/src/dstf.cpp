#include "lltf/dstf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lltf/errors.hpp"
#include "lltf/quadrature.hpp"
#include "lltf/stf.hpp"

namespace lltf {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;  // 3 kappa

std::vector<double> grid_weights(const UniformGrid& g) {
  std::vector<double> w(g.n);
  for (std::size_t j = 0; j < g.n; ++j) w[j] = g.weight(j);
  return w;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
  return s;
}

// out[j] += sum_k w_k rho_k row[(n-1) + j - k]. The pair rows are even about
// index n-1, so the sum is accumulated with the contiguous offset (n-1) - j + k.
void convolve_add(const std::vector<double>& rho_w, const std::vector<double>& row,
                  std::vector<double>& out) {
  const std::size_t n = rho_w.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double* rp = row.data() + (n - 1) - j;
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += rho_w[k] * rp[k];
    out[j] += acc;
  }
}

// scr[m] = sum_n (V_{m,n} * rho_n) on the grid, empty source channels skipped.
void screen_all(const KernelTable& K, const std::vector<std::vector<double>>& rho,
                const std::vector<double>& w, std::vector<std::vector<double>>& scr) {
  const std::size_t nz = K.grid().n;
  const int mc = static_cast<int>(rho.size());
  for (int m = 0; m < mc; ++m) scr[static_cast<std::size_t>(m)].assign(nz, 0.0);
  std::vector<double> rho_w(nz);
  for (int n = 0; n < mc; ++n) {
    const auto& rn = rho[static_cast<std::size_t>(n)];
    double peak = 0.0;
    for (double v : rn) peak = std::max(peak, v);
    if (peak == 0.0) continue;
    for (std::size_t j = 0; j < nz; ++j) rho_w[j] = w[j] * rn[j];
    for (int m = 0; m < mc; ++m) convolve_add(rho_w, K.pair(m, n), scr[static_cast<std::size_t>(m)]);
  }
}

void check_table(const ChannelDensity& rho, const KernelTable& K, const char* who) {
  const UniformGrid& g = K.grid();
  if (rho.rho.empty() || rho.m_max() > K.m_max())
    throw std::invalid_argument(std::string(who) + ": channel count exceeds the kernel table");
  if (rho.grid.n != g.n || rho.grid.zmax != g.zmax)
    throw std::invalid_argument(std::string(who) + ": density grid differs from the table grid");
  for (const auto& r : rho.rho)
    if (r.size() != g.n)
      throw std::invalid_argument(std::string(who) + ": channel length differs from the grid");
}

struct Problem {
  double Z = 0.0;
  int mc = 0;  // channels in play
  const KernelTable* K = nullptr;
  std::vector<double> w;        // trapezoid weights (h included)
  std::vector<double> vs_max;   // sup_z V_m per channel
};

Problem make_problem(double Z, double B, const KernelTable& K, const DstfOptions& opts,
                     const char* who) {
  if (!(Z > 0.0)) throw std::invalid_argument(std::string(who) + ": charge must be positive");
  if (!(B > 0.0)) throw std::invalid_argument(std::string(who) + ": field strength must be positive");
  if (K.m_max() < 0) throw std::invalid_argument(std::string(who) + ": empty kernel table");
  if (std::abs(B - K.B()) > 1e-12 * B)
    throw std::invalid_argument(std::string(who) + ": field strength differs from the kernel table");
  if (opts.m_limit > K.m_max())
    throw std::invalid_argument(std::string(who) + ": channel limit exceeds the kernel table");
  Problem p;
  p.Z = Z;
  p.mc = (opts.m_limit < 0 ? K.m_max() : opts.m_limit) + 1;
  p.K = &K;
  p.w = grid_weights(K.grid());
  p.vs_max.resize(static_cast<std::size_t>(p.mc));
  for (int m = 0; m < p.mc; ++m) {
    const auto& row = K.single(m);
    p.vs_max[static_cast<std::size_t>(m)] = *std::max_element(row.begin(), row.end());
  }
  return p;
}

// Interaction-free channel density sqrt([Z V_m + mu]_+) / pi.
std::vector<std::vector<double>> decoupled_density(const Problem& p, double mu) {
  const std::size_t nz = p.K->grid().n;
  std::vector<std::vector<double>> rho(static_cast<std::size_t>(p.mc), std::vector<double>(nz, 0.0));
  for (int m = 0; m < p.mc; ++m)
    for (std::size_t j = 0; j < nz; ++j) {
      const double well = p.Z * p.K->single_at(m, j) + mu;
      if (well > 0.0) rho[static_cast<std::size_t>(m)][j] = std::sqrt(well) / kPi;
    }
  return rho;
}

double total_mass(const Problem& p, const std::vector<std::vector<double>>& rho) {
  double s = 0.0;
  for (const auto& r : rho) s += dot(p.w, r);
  return s;
}

// Mass of the interaction-free density at chemical potential mu.
double decoupled_mass(const Problem& p, double mu) {
  double s = 0.0;
  for (int m = 0; m < p.mc; ++m)
    for (std::size_t j = 0; j < p.w.size(); ++j) {
      const double well = p.Z * p.K->single_at(m, j) + mu;
      if (well > 0.0) s += p.w[j] * std::sqrt(well) / kPi;
    }
  return s;
}

// Damped Jacobi sweep toward 3 kappa rho_m^2 = [Z V_m - sum_n V_{m,n} * rho_n + mu]_+
// at fixed mu. rho carries the initial iterate in and the solution out; the
// returned value is the sup-norm TF residual of that solution. Channels whose
// unscreened well never opens are zeroed on entry and stay exactly zero.
double solve_fixed_mu(const Problem& p, double mu, const DstfOptions& opts,
                      std::vector<std::vector<double>>& rho, int& sweeps) {
  const std::size_t nz = p.K->grid().n;
  const std::size_t mc = static_cast<std::size_t>(p.mc);
  const double h = p.K->grid().h;
  for (std::size_t m = 0; m < mc; ++m)
    if (p.Z * p.vs_max[m] + mu <= 0.0) rho[m].assign(nz, 0.0);

  // Jacobi row gain of the sweep map at node (m,j) is unit_scr/(2 pi^2 tgt),
  // where unit_scr is the screening of a unit density. Steps are capped to
  // beta/gain wherever the gain exceeds one; otherwise the long-range kernel
  // drives a collective tail oscillation no global damping can settle (the
  // single-channel theory sloshes forever at the 0.05 floor without this).
  // The floor unit_scr*h/(2 pi^2) on tgt bounds the cap at 1/h per node.
  std::vector<std::vector<double>> unit(mc, std::vector<double>(nz, 1.0)), gain(mc);
  screen_all(*p.K, unit, p.w, gain);

  std::vector<std::vector<double>> scr(mc), tgt(mc, std::vector<double>(nz));
  std::vector<std::vector<double>> lvl(mc, std::vector<double>(nz));
  const bool trace = std::getenv("LLTF_DSTF_TRACE") != nullptr;
  double beta = opts.mixing;
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    screen_all(*p.K, rho, p.w, scr);
    double dmax = 0.0, res = 0.0;
    std::size_t rm = 0, rj = 0, sm = 0, sj = 0;
    for (std::size_t m = 0; m < mc; ++m)
      for (std::size_t j = 0; j < nz; ++j) {
        const double raw = p.Z * p.K->single_at(static_cast<int>(m), j) - scr[m][j] + mu;
        const double well = raw < 0.0 ? 0.0 : raw;
        const double t = std::sqrt(well) / kPi;
        tgt[m][j] = t;
        lvl[m][j] = std::sqrt(std::abs(raw)) / kPi;
        if (std::abs(t - rho[m][j]) > dmax) { dmax = std::abs(t - rho[m][j]); sm = m; sj = j; }
        if (std::abs(kPi2 * rho[m][j] * rho[m][j] - well) > res) {
          res = std::abs(kPi2 * rho[m][j] * rho[m][j] - well); rm = m; rj = j;
        }
      }
    sweeps = it + 1;
    if (trace && it % 50 == 0)
      std::fprintf(stderr,
                   "it=%d beta=%.3f dmax=%.3e@(%zu,%zu:rho=%.3e,tgt=%.3e) res=%.3e@(%zu,%zu:rho=%.3e,tgt=%.3e,g=%.2f)\n",
                   it, beta, dmax, sm, sj, rho[sm][sj], tgt[sm][sj], res, rm, rj, rho[rm][rj],
                   tgt[rm][rj], gain[rm][rj]);
    if (res < opts.tol) return res;
    if (dmax > prev * (1.0 + 1e-12)) beta = std::max(0.5 * beta, 0.05);
    else if (it % 40 == 39) beta = std::min(1.25 * beta, 0.8);
    prev = dmax;
    for (std::size_t m = 0; m < mc; ++m)
      for (std::size_t j = 0; j < nz; ++j) {
        const double t = tgt[m][j];
        const double lam =
            gain[m][j] / (2.0 * kPi2 * std::max(lvl[m][j], gain[m][j] * h / (2.0 * kPi2)));
        const double bj = lam > 1.0 ? beta / lam : beta;
        double v = rho[m][j] + bj * (t - rho[m][j]);
        if (v < 1e-300) v = 0.0;  // keep dying channels off the denormal range
        rho[m][j] = v;
      }
  }
  // Residual of the final iterate, for the accept test below.
  screen_all(*p.K, rho, p.w, scr);
  double res = 0.0;
  for (std::size_t m = 0; m < mc; ++m)
    for (std::size_t j = 0; j < nz; ++j) {
      double well = p.Z * p.K->single_at(static_cast<int>(m), j) - scr[m][j] + mu;
      if (well < 0.0) well = 0.0;
      res = std::max(res, std::abs(kPi2 * rho[m][j] * rho[m][j] - well));
    }
  if (res <= opts.accept_tol * p.Z * p.vs_max[0]) return res;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "solve_dstf: %d sweeps at mu=%.6g left sup-norm residual %.3e above tol %.3e",
                opts.max_iters, mu, res, opts.tol);
  throw SolverError(buf);
}

ChannelDensity pack(const Problem& p, double B, double mu, bool capped,
                    std::vector<std::vector<double>>&& rho) {
  ChannelDensity out;
  out.grid = p.K->grid();
  out.rho = std::move(rho);
  out.Z = p.Z;
  out.B = B;
  out.mu = mu;
  out.capped = capped;
  out.N = total_mass(p, out.rho);
  return out;
}

ChannelDensity solve_critical_impl(const Problem& p, double B, const DstfOptions& opts,
                                   DstfDiagnostics* diag) {
  auto rho = decoupled_density(p, 0.0);
  int sweeps = 0;
  const double res = solve_fixed_mu(p, 0.0, opts, rho, sweeps);
  if (diag) {
    diag->iterations += sweeps;
    diag->residual = res;
  }
  return pack(p, B, 0.0, false, std::move(rho));
}

}  // namespace

double ChannelDensity::channel_mass(int m) const {
  const auto& r = rho.at(static_cast<std::size_t>(m));
  double s = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) s += grid.weight(j) * r[j];
  return s;
}

double ChannelDensity::mass() const {
  double s = 0.0;
  for (int m = 0; m <= m_max(); ++m) s += channel_mass(m);
  return s;
}

double annulus_area(int m, double B) {
  if (m < 0) throw std::invalid_argument("annulus_area: negative channel");
  if (!(B > 0.0)) throw std::invalid_argument("annulus_area: field strength must be positive");
  const double ri = std::sqrt(2.0 * m / B);
  const double ro = std::sqrt(2.0 * (m + 1) / B);
  return kPi * (ro - ri) * (ro + ri);
}

EnergyReport dstf_functional(const ChannelDensity& rho, const KernelTable& K) {
  check_table(rho, K, "dstf_functional");
  const std::size_t nz = K.grid().n;
  const std::size_t mc = static_cast<std::size_t>(rho.m_max()) + 1;
  const std::vector<double> w = grid_weights(K.grid());

  EnergyReport rep{};
  std::vector<std::vector<double>> scr(mc);
  screen_all(K, rho.rho, w, scr);
  for (std::size_t m = 0; m < mc; ++m) {
    const auto& r = rho.rho[m];
    double kin = 0.0, att = 0.0, pair = 0.0;
    for (std::size_t j = 0; j < nz; ++j) {
      kin += w[j] * r[j] * r[j] * r[j];
      att += w[j] * K.single_at(static_cast<int>(m), j) * r[j];
      pair += w[j] * r[j] * scr[m][j];
    }
    rep.kinetic_like += (kPi2 / 3.0) * kin;
    rep.attraction -= rho.Z * att;
    rep.repulsion += 0.5 * pair;
    rep.particle_number += dot(w, r);
  }
  rep.total = rep.kinetic_like + rep.attraction + rep.repulsion;
  rep.chemical_potential = rho.mu;
  return rep;
}

EnergyReport mstf_energy(const ChannelDensity& rho, const KernelTable& K) {
  check_table(rho, K, "mstf_energy");
  const std::size_t nz = K.grid().n;
  const std::size_t mc = static_cast<std::size_t>(rho.m_max()) + 1;
  const double B = rho.B;
  const std::vector<double> w = grid_weights(K.grid());
  const double fill = B / (2.0 * kPi);  // reconstruction height of one channel

  // Every transverse integral of the reconstruction contributes one factor
  // annulus_area(n) * fill per channel, so the repulsion needs the source
  // densities carrying their own annulus weight before the convolution.
  std::vector<std::vector<double>> scaled(mc, std::vector<double>(nz));
  for (std::size_t n = 0; n < mc; ++n) {
    const double an = annulus_area(static_cast<int>(n), B) * fill;
    for (std::size_t j = 0; j < nz; ++j) scaled[n][j] = an * rho.rho[n][j];
  }
  std::vector<std::vector<double>> scr(mc);
  screen_all(K, scaled, w, scr);

  EnergyReport rep{};
  for (std::size_t m = 0; m < mc; ++m) {
    const auto& r = rho.rho[m];
    const double am = annulus_area(static_cast<int>(m), B);
    double kin = 0.0, att = 0.0, pair = 0.0;
    for (std::size_t j = 0; j < nz; ++j) {
      kin += w[j] * r[j] * r[j] * r[j];
      att += w[j] * K.single_at(static_cast<int>(m), j) * r[j];
      pair += w[j] * r[j] * scr[m][j];
    }
    rep.kinetic_like += (4.0 * kPi2 * kPi2 / (3.0 * B * B)) * am * fill * fill * fill * kin;
    rep.attraction -= rho.Z * am * fill * att;
    rep.repulsion += 0.5 * am * fill * pair;
    rep.particle_number += am * fill * dot(w, r);
  }
  rep.total = rep.kinetic_like + rep.attraction + rep.repulsion;
  rep.chemical_potential = rho.mu;
  return rep;
}

ChannelDensity solve_dstf(double Z, double B, double N, const KernelTable& K,
                          const DstfOptions& opts, DstfDiagnostics* diag) {
  const Problem p = make_problem(Z, B, K, opts, "solve_dstf");
  if (!(N > 0.0)) throw std::invalid_argument("solve_dstf: particle number must be positive");
  if (N > 4.0 * Z)
    throw std::invalid_argument("solve_dstf: no solution binds more than 4Z particles");

  // The full channel range binds at least Z at mu = 0, so requests below Z
  // are subcritical for sure; otherwise (and for restricted channel ranges,
  // whose maximal mass can drop below Z) settle criticality up front.
  std::vector<std::vector<double>> warm;
  if (N >= 0.98 * Z || p.mc <= K.m_max()) {
    ChannelDensity crit = solve_critical_impl(p, B, opts, diag);
    if (N >= crit.N * (1.0 - opts.mass_tol)) {
      crit.capped = N > crit.N * (1.0 + opts.mass_tol);
      return crit;
    }
    warm = std::move(crit.rho);
  }

  // Tune the opening chemical potential on the interaction-free mass, which
  // bounds the interacting mass from above: the root mu0 satisfies
  // mass(mu0) <= N, so [mu0, 0] brackets the constraint.
  double lo = -Z * p.vs_max[0];
  {
    double a = lo, b = 0.0;
    for (int k = 0; k < 200 && (b - a) > 1e-15 * -lo; ++k) {
      const double mid = 0.5 * (a + b);
      (decoupled_mass(p, mid) > N ? b : a) = mid;
    }
    lo = a;
  }

  auto rho = warm.empty() ? decoupled_density(p, lo) : std::move(warm);
  double res = 0.0, mu = lo, hi = 0.0;
  bool bracketed = false;  // some iterate reached mass >= N
  double mu1 = 0.0, f1 = 0.0;  // previous (mu, mass - N) for the secant step
  bool have1 = false;
  for (int k = 0; k < opts.bisect_iters; ++k) {
    int sweeps = 0;
    res = solve_fixed_mu(p, mu, opts, rho, sweeps);
    if (diag) {
      diag->iterations += sweeps;
      diag->bisections = k + 1;
      diag->residual = res;
    }
    // Mass matching is judged against max(N, Z): the sweep tolerance bounds
    // the density pointwise on the scale of the full cloud, so tiny fillings
    // cannot be resolved relative to N itself.
    const double tol_mass = opts.mass_tol * std::max(N, Z);
    const double M = total_mass(p, rho);
    if (std::abs(M - N) <= tol_mass)
      return pack(p, B, mu, false, std::move(rho));
    if (M > N) {
      hi = mu;
      bracketed = true;
    } else {
      lo = mu;
    }
    if (bracketed && hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() *
                                     std::max(std::abs(lo), std::abs(hi))) {
      // mu is resolved to the last bit; any remaining mismatch is sweep noise
      if (std::abs(M - N) <= 1e4 * tol_mass) return pack(p, B, mu, false, std::move(rho));
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "solve_dstf: mass %.12g misses target %.12g at machine-resolved mu=%.6g",
                    M, N, mu);
      throw SolverError(buf);
    }
    // Secant step on the increasing map mu -> mass, kept strictly inside the
    // bracket; midpoint otherwise. Mass is smooth in mu, so this converges in
    // a handful of solves where plain bisection needs tens.
    double next = 0.5 * (lo + hi);
    if (have1 && f1 != M - N) {
      const double sec = mu - (M - N) * (mu1 - mu) / (f1 - (M - N));
      const double margin = 0.01 * (hi - lo);
      if (sec > lo + margin && sec < hi - margin) next = sec;
    }
    mu1 = mu;
    f1 = M - N;
    have1 = true;
    mu = next;
  }
  if (!bracketed) {
    // never reached the requested mass: the request exceeds the critical
    // number for this channel range (possible when it was not prechecked)
    ChannelDensity crit = solve_critical_impl(p, B, opts, diag);
    if (N >= crit.N * (1.0 - opts.mass_tol)) {
      crit.capped = true;
      return crit;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "solve_dstf: %d bisections left the mass off target %.6g (mu in [%.6g, %.6g])",
                opts.bisect_iters, N, lo, hi);
  throw SolverError(buf);
}

ChannelDensity solve_dstf_critical(double Z, double B, const KernelTable& K,
                                   const DstfOptions& opts, DstfDiagnostics* diag) {
  const Problem p = make_problem(Z, B, K, opts, "solve_dstf_critical");
  return solve_critical_impl(p, B, opts, diag);
}

double critical_particle_number(double Z, double B, const KernelTable& K, double truncation_tol,
                                const DstfOptions& opts) {
  const ChannelDensity crit = solve_dstf_critical(Z, B, K, opts);
  const double last = crit.channel_mass(crit.m_max());
  if (last >= truncation_tol * Z) {
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "critical_particle_number: channel %d still holds mass %.3e >= %.3e; "
                  "the table needs more channels",
                  crit.m_max(), last, truncation_tol * Z);
    throw TruncationError(buf);
  }
  return crit.N;
}

ChannelDensity solve_1dstf(double Z, double B, double N, const KernelTable& K,
                           const DstfOptions& opts) {
  DstfOptions one = opts;
  one.m_limit = 0;
  return solve_dstf(Z, B, N, K, one);
}

ChannelDensity solve_1dstf_minimum(double Z, double B, const KernelTable& K,
                                   const DstfOptions& opts) {
  DstfOptions one = opts;
  one.m_limit = 0;
  return solve_dstf_critical(Z, B, K, one);
}

double weak_1d_energy(double Z, double B) {
  if (!(Z > 0.0)) throw std::invalid_argument("weak_1d_energy: charge must be positive");
  if (!(B > 0.0)) throw std::invalid_argument("weak_1d_energy: field strength must be positive");
  static const double integral = [] {
    KernelOptions ko;
    ko.tol = 1e-12;
    const auto& rule = quad::tanh_sinh(9);
    const double zs = 12.0;
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double x = rule.x[i];
      head += rule.w[i] * zs * std::pow(v_single(0, 1.0, zs * x, ko), 1.5);
      // z = zs / x^2 maps the tail onto (0, 1] with a finite endpoint limit
      // 2 / sqrt(zs); a plain 1/x map leaves an x^{-1/2} tip whose truncated
      // mass (~1e-7) the rule would silently drop
      tail += rule.w[i] * (2.0 * zs / (x * x * x)) * std::pow(v_single(0, 1.0, zs / (x * x), ko), 1.5);
    }
    return 2.0 * (head + tail);
  }();
  return -(2.0 / (3.0 * kPi)) * std::pow(Z, 1.5) * std::pow(B, 0.25) * integral;
}

int suggest_m_max(double Z, double B) {
  if (!(Z > 0.0) || !(B > 0.0)) throw std::invalid_argument("suggest_m_max: inputs must be positive");
  const double rs = 3.7 * stf_length(Z, B);
  return static_cast<int>(std::ceil(0.5 * B * rs * rs)) + 2;
}

}  // namespace lltf
