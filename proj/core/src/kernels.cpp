#include "lltf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "lltf/errors.hpp"
#include "lltf/quadrature.hpp"

namespace lltf {
namespace {

constexpr double kPi = 3.14159265358979323846;

// Azimuthally averaged Coulomb kernel between two rings of radii r, rp at
// longitudinal separation zeta: (2/pi) K(k) / sqrt((r+rp)^2 + zeta^2) with
// k^2 = 4 r rp / ((r+rp)^2 + zeta^2). The complementary modulus squared is
// formed from (r-rp)^2 directly so nothing cancels near the diagonal.
double kern_az(double r, double rp, double zeta) {
  const double D = (r + rp) * (r + rp) + zeta * zeta;
  const double kp2 = ((r - rp) * (r - rp) + zeta * zeta) / D;
  return (2.0 / kPi) * quad::elliptic_K_comp(kp2) / std::sqrt(D);
}

double v_single_order(int m, double B, double z, int order) {
  const double c = 0.5 * B * z * z;
  if (c >= 1.0 || m >= 8) {
    // average of the Coulomb distance over the Gamma(m+1) radial profile
    const quad::Rule& g = quad::gauss_laguerre_prob(static_cast<double>(m), order);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
      acc += g.w[i] / std::sqrt(2.0 * g.x[i] / B + z * z);
    return acc;
  }
  // subordinated form, analytic in z near 0:
  //   sqrt(B/2) (2/sqrt(pi)) int_0^inf e^{-c s^2} (1+s^2)^{-(m+1)} ds
  // split at s = 1: the head is entire; the tail, under u = 1/s, puts the
  // Gaussian cutoff's layer at u ~ sqrt(c) next to the endpoint u = 0, where
  // tanh-sinh node clustering resolves it at any c (plain Gauss rules need
  // order ~ c^{-1/4} there and stall for small nonzero z).
  const quad::Rule& g = quad::gauss_legendre(order);
  double head = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    const double s = 0.5 * (g.x[i] + 1.0);
    head += 0.5 * g.w[i] * std::exp(-c * s * s) * std::pow(1.0 + s * s, -(m + 1.0));
  }
  int level = 5;
  while ((1 << level) < order && level < 10) ++level;
  const quad::Rule& ts = quad::tanh_sinh(level);
  double tail = 0.0;
  for (std::size_t i = 0; i < ts.x.size(); ++i) {
    const double u = ts.x[i];
    const double u2 = u * u;
    tail += ts.w[i] * std::exp(-c / u2) * std::pow(u2 / (1.0 + u2), m) / (1.0 + u2);
  }
  return std::sqrt(0.5 * B) * (2.0 / std::sqrt(kPi)) * (head + tail);
}

double v_single_impl(int m, double B, double z, const KernelOptions& opts, int* settled) {
  int order = std::max(8, opts.initial_order);
  double prev = v_single_order(m, B, z, order);
  while (2 * order <= opts.max_order) {
    order *= 2;
    const double cur = v_single_order(m, B, z, order);
    if (std::abs(cur - prev) <= opts.tol * std::max(std::abs(cur), 1e-300)) {
      if (settled) *settled = std::max(*settled, order);
      return cur;
    }
    prev = cur;
  }
  throw QuadratureError("v_single did not settle under order doubling");
}

double v_pair_tensor(int m, int n, double B, double zeta, int order) {
  const quad::Rule& gu = quad::gauss_laguerre_prob(static_cast<double>(m), order);
  const quad::Rule& gv = quad::gauss_laguerre_prob(static_cast<double>(n), order);
  std::vector<double> rp(gv.x.size());
  for (std::size_t j = 0; j < gv.x.size(); ++j) rp[j] = std::sqrt(2.0 * gv.x[j] / B);
  double tot = 0.0;
  for (std::size_t i = 0; i < gu.x.size(); ++i) {
    const double r = std::sqrt(2.0 * gu.x[i] / B);
    double row = 0.0;
    for (std::size_t j = 0; j < gv.x.size(); ++j) row += gv.w[j] * kern_az(r, rp[j], zeta);
    tot += gu.w[i] * row;
  }
  return tot;
}

// Near-diagonal scheme for small B zeta^2 / 2: the azimuthal kernel has an
// integrable log singularity at u' = u, zeta = 0. Outer nodes follow the
// Gamma(m+1) measure; the inner integral is split at u' = u with tanh-sinh
// panels on both sides (clustering nodes at the singularity) plus a
// Gauss-Laguerre tail. The inner Gamma(n+1) weight is kept in log space.
double v_pair_panel(int m, int n, double B, double zeta, int outer_order, int ts_level) {
  const quad::Rule& outer = quad::gauss_laguerre_prob(static_cast<double>(m), outer_order);
  const quad::Rule& ts = quad::tanh_sinh(ts_level);
  const quad::Rule& tail = quad::gauss_laguerre_prob(0.0, 24);
  const double lgn = std::lgamma(n + 1.0);
  const double W = std::max(12.0, n + 6.0 * std::sqrt(n + 1.0));
  double tot = 0.0;
  for (std::size_t i = 0; i < outer.x.size(); ++i) {
    const double u = outer.x[i];
    const double r = std::sqrt(2.0 * u / B);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0;
    for (std::size_t j = 0; j < ts.x.size(); ++j) {
      const double up1 = u * ts.x[j];
      const double lw1 = (n > 0 ? n * std::log(up1) : 0.0) - up1 - lgn;
      s1 += ts.w[j] * std::exp(lw1) * kern_az(r, std::sqrt(2.0 * up1 / B), zeta);
      const double up2 = u + W * ts.x[j];
      const double lw2 = (n > 0 ? n * std::log(up2) : 0.0) - up2 - lgn;
      s2 += ts.w[j] * std::exp(lw2) * kern_az(r, std::sqrt(2.0 * up2 / B), zeta);
    }
    for (std::size_t j = 0; j < tail.x.size(); ++j) {
      // tail weights carry e^{-v} dv; the remaining e^{-(u+W)} sits in lw3
      const double up3 = u + W + tail.x[j];
      const double lw3 = (n > 0 ? n * std::log(up3) : 0.0) - (u + W) - lgn;
      s3 += tail.w[j] * std::exp(lw3) * kern_az(r, std::sqrt(2.0 * up3 / B), zeta);
    }
    tot += outer.w[i] * (u * s1 + W * s2 + s3);
  }
  return tot;
}

double v_pair_scheme(int m, int n, double B, double zeta, int order, int ts_level) {
  const double c = 0.5 * B * zeta * zeta;
  if (c >= 2.0) return v_pair_tensor(m, n, B, zeta, order);
  return v_pair_panel(m, n, B, zeta, std::max(32, order / 2), ts_level);
}

double v_pair_impl(int m, int n, double B, double zeta, const KernelOptions& opts, int* settled) {
  if (m > n) std::swap(m, n);  // exact symmetry by canonicalization
  zeta = std::abs(zeta);
  int order = std::max(16, opts.initial_order);
  int level = 6;
  double prev = v_pair_scheme(m, n, B, zeta, order, level);
  while (2 * order <= opts.max_order) {
    order *= 2;
    ++level;
    const double cur = v_pair_scheme(m, n, B, zeta, order, level);
    if (std::abs(cur - prev) <= opts.tol * std::max(std::abs(cur), 1e-300)) {
      if (settled) *settled = std::max(*settled, order);
      return cur;
    }
    prev = cur;
  }
  throw QuadratureError("v_pair did not settle under order doubling");
}

// row index for the stored m <= n triangle
std::size_t tri_index(int m, int n, int m_max) {
  return static_cast<std::size_t>(m) * static_cast<std::size_t>(2 * m_max + 3 - m) / 2 +
         static_cast<std::size_t>(n - m);
}

void check_channel(int m, const char* who) {
  if (m < 0) throw std::invalid_argument(std::string(who) + ": channel index must be nonnegative");
}

void check_field(double B, const char* who) {
  if (!(B > 0.0)) throw std::invalid_argument(std::string(who) + ": field strength must be positive");
}

}  // namespace

double orbital_density(int m, double B, double r) {
  check_channel(m, "orbital_density");
  check_field(B, "orbital_density");
  const double t = 0.5 * B * r * r;
  if (m == 0) return B / (2.0 * kPi) * std::exp(-t);
  if (t == 0.0) return 0.0;
  return B / (2.0 * kPi) * std::exp(m * std::log(t) - t - std::lgamma(m + 1.0));
}

double v_single(int m, double B, double z, const KernelOptions& opts) {
  check_channel(m, "v_single");
  check_field(B, "v_single");
  return v_single_impl(m, B, z, opts, nullptr);
}

double v_pair(int m, int n, double B, double zeta, const KernelOptions& opts) {
  check_channel(m, "v_pair");
  check_channel(n, "v_pair");
  check_field(B, "v_pair");
  return v_pair_impl(m, n, B, zeta, opts, nullptr);
}

double kernel_inequality_residual(int m, int n, double B, double z, double zp,
                                  const KernelOptions& opts) {
  const double inv = 1.0 / v_single(m, B, z, opts) + 1.0 / v_single(n, B, z, opts) +
                     1.0 / v_single(m, B, zp, opts) + 1.0 / v_single(n, B, zp, opts);
  return inv * v_pair(m, n, B, z - zp, opts) - 1.0;
}

const std::vector<double>& KernelTable::pair(int m, int n) const {
  if (m < 0 || n < 0 || m > m_max_ || n > m_max_)
    throw std::out_of_range("KernelTable::pair: channel index out of range");
  if (m > n) std::swap(m, n);
  return v_pair_[tri_index(m, n, m_max_)];
}

KernelTable build_kernel_table(double B, int m_max, const UniformGrid& grid,
                               const KernelOptions& opts) {
  check_field(B, "build_kernel_table");
  check_channel(m_max, "build_kernel_table");
  if (grid.n < 3) throw std::invalid_argument("build_kernel_table: grid too small");

  std::string path;
  if (opts.cache_dir != "off") {
    path = cache_directory(opts.cache_dir);
    if (!path.empty()) {
      path += "/" + cache_key(B, m_max, grid, opts.tol);
      KernelTable cached;
      if (cache_load(path, B, m_max, grid, opts.tol, cached)) return cached;
    }
  }

  KernelTable t;
  t.B_ = B;
  t.m_max_ = m_max;
  t.grid_ = grid;
  int settled = 0;

  // V_m is even in z and V_{m,n} is even in zeta, so only z >= 0 is computed.
  const std::size_t nz = grid.n;
  const std::size_t mid = (nz - 1) / 2;
  t.v_single_.assign(static_cast<std::size_t>(m_max) + 1, std::vector<double>(nz, 0.0));
  for (int m = 0; m <= m_max; ++m) {
    auto& row = t.v_single_[static_cast<std::size_t>(m)];
    for (std::size_t i = mid; i < nz; ++i) {
      const double val = v_single_impl(m, B, grid.z(i), opts, &settled);
      row[i] = val;
      row[nz - 1 - i] = val;
    }
  }

  const std::size_t nd = grid.diff_size();
  const std::size_t dmid = nz - 1;  // zeta = 0
  const std::size_t npairs = static_cast<std::size_t>(m_max + 1) * (m_max + 2) / 2;
  t.v_pair_.assign(npairs, std::vector<double>(nd, 0.0));
  for (int m = 0; m <= m_max; ++m) {
    for (int n = m; n <= m_max; ++n) {
      auto& row = t.v_pair_[tri_index(m, n, m_max)];
      for (std::size_t k = dmid; k < nd; ++k) {
        const double val = v_pair_impl(m, n, B, grid.diff(k), opts, &settled);
        row[k] = val;
        row[2 * dmid - k] = val;
      }
    }
  }
  t.order_ = settled;

  if (!path.empty()) cache_store(path, t, opts.tol);
  return t;
}

}  // namespace lltf
