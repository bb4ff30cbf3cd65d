#pragma once

// Independent reference implementations used only by tests. Nothing here may
// call into lltf: oracle results cross-check the library through entirely
// different representations (adaptive Simpson instead of Gaussian rules,
// Bessel-Laplace transforms instead of elliptic integrals, Monte Carlo
// instead of quadrature).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

namespace detail {

template <typename F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth, int force) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double both = left + right;
  // stop on the requested tolerance, or when the correction sits at the
  // roundoff floor of the local chunk (halving tol forever would recurse
  // past what doubles can resolve); forced levels guard against narrow
  // bumps the first few samples miss entirely
  const double floor = std::max(15.0 * tol, 4e-16 * std::abs(both));
  if (force <= 0 && (depth <= 0 || std::abs(both - whole) <= floor))
    return both + (both - whole) / 15.0;
  if (depth <= 0) return both + (both - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

}  // namespace detail

// adaptive Simpson with Richardson correction; the depth cap bounds work even
// when integrand roundoff noise keeps the refinement criterion from firing
template <typename F>
double integrate(const F& f, double a, double b, double tol = 1e-12, int depth = 26,
                 int force = 8) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth, force);
}

// integral over (a, infinity) via x = a + t/(1-t); f must decay at infinity
template <typename F>
double integrate_to_inf(const F& f, double a, double tol = 1e-12) {
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double om = 1.0 - t;
    return f(a + t / om) / (om * om);
  };
  // stop a hair before t = 1 so the Jacobian stays finite; the remainder is
  // the tail beyond x ~ 1e13 which is zero for every decaying integrand here
  return integrate(g, 0.0, 1.0 - 1e-13, tol);
}

// plain Laguerre polynomial L_k(x) by the three-term recurrence
inline double laguerre(int k, double x) {
  if (k == 0) return 1.0;
  double lm1 = 1.0, l = 1.0 - x;
  for (int j = 1; j < k; ++j) {
    const double lp1 = ((2.0 * j + 1.0 - x) * l - j * lm1) / (j + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

// ---------------------------------------------------------------------------
// Bessel-Laplace representations of the effective interactions.
//
// The 2D Fourier transform of the lowest-band orbital density
// (B/2pi)(Br^2/2)^m e^{-Br^2/2}/m! is F_m(p) = e^{-x} L_m(x), x = p^2/(2B),
// and 1/sqrt(rho^2 + z^2) = int_0^inf J_0(p rho) e^{-p|z|} dp. Averaging the
// Bessel factor over one or two orbital densities gives one-dimensional
// integrals with no elliptic functions and no Laguerre quadrature anywhere.
// ---------------------------------------------------------------------------

// V_m(z) = int_0^inf e^{-p|z|} e^{-x} L_m(x) dp,  x = p^2/(2B)
inline double bessel_laplace_single(int m, double B, double z, double tol = 1e-12) {
  const double az = std::abs(z);
  auto f = [&](double p) {
    const double x = p * p / (2.0 * B);
    return std::exp(-p * az - x) * laguerre(m, x);
  };
  // e^{-x} L_m(x) is bounded by e^{-x/2}; beyond x = 120 the tail is ~1e-26
  const double pmax = std::sqrt(2.0 * B * 120.0);
  return integrate(f, 0.0, pmax, tol);
}

// V_{m,n}(zeta) = int_0^inf e^{-p|zeta|} e^{-2x} L_m(x) L_n(x) dp
inline double bessel_laplace_pair(int m, int n, double B, double zeta, double tol = 1e-12) {
  const double az = std::abs(zeta);
  auto f = [&](double p) {
    const double x = p * p / (2.0 * B);
    return std::exp(-p * az - 2.0 * x) * laguerre(m, x) * laguerre(n, x);
  };
  const double pmax = std::sqrt(2.0 * B * 120.0);
  return integrate(f, 0.0, pmax, tol);
}

// ---------------------------------------------------------------------------
// Monte Carlo estimate of V_m(z): u ~ Gamma(m+1) sampled as a sum of unit
// exponentials, averaging 1/sqrt(2u/B + z^2). Returns the sample mean.
// ---------------------------------------------------------------------------
inline double mc_single(int m, double B, double z, std::size_t nsamp, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double acc = 0.0;
  for (std::size_t s = 0; s < nsamp; ++s) {
    double u = 0.0;
    for (int j = 0; j <= m; ++j) u -= std::log(1.0 - unif(rng));
    acc += 1.0 / std::sqrt(2.0 * u / B + z * z);
  }
  return acc / static_cast<double>(nsamp);
}

// ---------------------------------------------------------------------------
// Bound states of the symmetric finite square well W(z) = -V0 for |z| < a,
// 0 otherwise, found from the matching conditions
//   even:  k tan(k a) = kappa,   odd:  -k cot(k a) = kappa,
// with k = sqrt(V0 + E), kappa = sqrt(-E). Returns energies ascending.
// ---------------------------------------------------------------------------
inline std::vector<double> square_well_levels(double V0, double a) {
  if (!(V0 > 0.0) || !(a > 0.0)) throw std::invalid_argument("square_well_levels: bad well");
  const double kmax = std::sqrt(V0);
  auto even_f = [&](double k) { return k * std::tan(k * a) - std::sqrt(V0 - k * k); };
  auto odd_f = [&](double k) { return -k / std::tan(k * a) - std::sqrt(V0 - k * k); };

  auto bisect = [](auto f, double lo, double hi) {
    double flo = f(lo);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = f(mid);
      if (fmid == 0.0) return mid;
      if ((flo < 0.0) != (fmid < 0.0)) {
        hi = mid;
      } else {
        lo = mid;
        flo = fmid;
      }
    }
    return 0.5 * (lo + hi);
  };

  const double pi = std::acos(-1.0);
  std::vector<double> ks;
  // even branches: k a in (j pi, j pi + pi/2); odd: k a in (j pi + pi/2, (j+1) pi)
  for (int j = 0;; ++j) {
    const double lo = (j * pi) / a + 1e-12;
    const double hi = std::min((j * pi + 0.5 * pi) / a - 1e-12, kmax - 1e-12);
    if (lo >= hi) break;
    if (even_f(lo) < 0.0 && even_f(hi) > 0.0) ks.push_back(bisect(even_f, lo, hi));
  }
  for (int j = 0;; ++j) {
    const double lo = (j * pi + 0.5 * pi) / a + 1e-12;
    const double hi = std::min(((j + 1) * pi) / a - 1e-12, kmax - 1e-12);
    if (lo >= hi) break;
    if (odd_f(lo) < 0.0 && odd_f(hi) > 0.0) ks.push_back(bisect(odd_f, lo, hi));
  }
  std::vector<double> E;
  E.reserve(ks.size());
  for (double k : ks) E.push_back(k * k - V0);
  std::sort(E.begin(), E.end());
  return E;
}

}  // namespace oracle
