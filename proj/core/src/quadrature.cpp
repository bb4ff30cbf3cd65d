#include "lltf/quadrature.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>

#include "lltf/tridiag.hpp"

namespace lltf::quad {

namespace {

Rule make_gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // recurrence for P_n(x) and P'_n(x)
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    r.x[i] = -x;
    r.x[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

Rule make_gauss_laguerre_prob(double alpha, int n) {
  // Golub-Welsch: nodes are eigenvalues of the Jacobi matrix; weights from the
  // Christoffel function of the orthonormal polynomials of the probability
  // measure (p_0 = 1), so nothing overflows for large alpha.
  std::vector<double> d(n), e(n - 1);
  for (int k = 0; k < n; ++k) d[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k * (k + alpha));
  double scale = 0.0;
  for (int k = 0; k < n; ++k) scale = std::max(scale, std::abs(d[k]));
  for (int k = 0; k + 1 < n; ++k) scale = std::max(scale, std::abs(e[k]));
  const auto nodes =
      tridiag::eigenvalues_below(d, e, std::numeric_limits<double>::infinity(), 1e-15 * scale);
  if (static_cast<int>(nodes.size()) != n)
    throw std::runtime_error("gauss_laguerre_prob: eigenvalue count mismatch");
  Rule r;
  r.x = nodes;
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = nodes[i];
    double pm = 0.0, p = 1.0, lam = 1.0;
    for (int k = 0; k + 1 < n; ++k) {
      const double pn = ((x - d[k]) * p - (k > 0 ? e[k - 1] : 0.0) * pm) / e[k];
      pm = p;
      p = pn;
      lam += p * p;
    }
    r.w[i] = 1.0 / lam;
  }
  return r;
}

Rule make_tanh_sinh(int level) {
  Rule r;
  const double pi = std::acos(-1.0);
  const double tmax = 3.7;
  const int half = 1 << level;
  const double dt = tmax / half;
  for (int j = -half; j <= half; ++j) {
    const double t = j * dt;
    const double s = 0.5 * pi * std::sinh(t);
    const double x = std::tanh(s);
    const double one_minus = 1.0 - std::abs(x);
    if (one_minus < 1e-14) continue;
    const double ch = std::cosh(s);
    const double w = 0.5 * pi * std::cosh(t) / (ch * ch) * dt;
    r.x.push_back(0.5 * (x + 1.0));
    r.w.push_back(0.5 * w);
  }
  return r;
}

std::mutex cache_mutex;

}  // namespace

const Rule& gauss_legendre(int n) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lk(cache_mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

const Rule& gauss_laguerre_prob(double alpha, int n) {
  static std::map<std::pair<double, int>, Rule> cache;
  std::lock_guard<std::mutex> lk(cache_mutex);
  const auto key = std::make_pair(alpha, n);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make_gauss_laguerre_prob(alpha, n)).first;
  return it->second;
}

const Rule& tanh_sinh(int level) {
  static std::map<int, Rule> cache;
  std::lock_guard<std::mutex> lk(cache_mutex);
  auto it = cache.find(level);
  if (it == cache.end()) it = cache.emplace(level, make_tanh_sinh(level)).first;
  return it->second;
}

double elliptic_K_comp(double kp2) {
  const double pi = std::acos(-1.0);
  double a = 1.0, b = std::sqrt(std::max(kp2, 1e-300));
  for (int i = 0; i < 80; ++i) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    if (std::abs(a - b) < 1e-17 * a) break;
  }
  return pi / (2.0 * a);
}

}  // namespace lltf::quad
