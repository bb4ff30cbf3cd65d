#include "lltf/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lltf::tridiag {

int count_below(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const std::size_t n = d.size();
  int cnt = 0;
  double q = 1.0;
  const double tiny = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < n; ++i) {
    const double ee = (i == 0) ? 0.0 : e[i - 1];
    q = d[i] - x - ((i == 0) ? 0.0 : ee * ee / q);
    if (q == 0.0) q = tiny;
    if (q < 0.0) ++cnt;
  }
  return cnt;
}

std::vector<double> eigenvalues_below(const std::vector<double>& d, const std::vector<double>& e,
                                      double cutoff, double tol) {
  const std::size_t n = d.size();
  double glo = d[0], ghi = d[0];
  for (std::size_t i = 0; i < n; ++i) {
    const double lo_off = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
    glo = std::min(glo, d[i] - lo_off);
    ghi = std::max(ghi, d[i] + lo_off);
  }
  const double top = std::min(cutoff, ghi);
  const int k_total = count_below(d, e, top);
  std::vector<double> ev;
  ev.reserve(static_cast<std::size_t>(std::max(k_total, 0)));
  double lo_floor = glo;
  for (int k = 0; k < k_total; ++k) {
    double lo = lo_floor, hi = top;
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;  // interval at roundoff limit
      if (count_below(d, e, mid) > k)
        hi = mid;
      else
        lo = mid;
    }
    const double lam = 0.5 * (lo + hi);
    ev.push_back(lam);
    lo_floor = lo;  // eigenvalues are returned in ascending order
  }
  return ev;
}

std::vector<double> eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                double lambda) {
  const std::size_t n = d.size();
  // LU of (T - lambda I) with partial pivoting; bandwidth grows by one superdiagonal.
  std::vector<double> du(n, 0.0), du2(n, 0.0), dl(n, 0.0), diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = d[i] - lambda;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    du[i] = e[i];
    dl[i] = e[i];
  }
  std::vector<int> piv(n, 0);
  std::vector<double> a(diag), b(du), c(du2);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(dl[i]) > std::abs(a[i])) {
      piv[i] = 1;
      std::swap(a[i], dl[i]);
      const double tb = b[i];
      b[i] = a[i + 1];
      a[i + 1] = tb;
      c[i] = (i + 2 < n) ? b[i + 1] : 0.0;
      if (i + 2 < n) b[i + 1] = 0.0;
    }
    if (a[i] == 0.0) a[i] = 1e-300;
    const double m = dl[i] / a[i];
    dl[i] = m;  // store multiplier
    a[i + 1] -= m * b[i];
    if (i + 2 < n) b[i + 1] -= m * c[i];
  }
  if (a[n - 1] == 0.0) a[n - 1] = 1e-300;

  auto solve = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i + 1 < n; ++i) {
      if (piv[i]) std::swap(v[i], v[i + 1]);
      v[i + 1] -= dl[i] * v[i];
    }
    for (std::size_t ii = n; ii-- > 0;) {
      double s = v[ii];
      if (ii + 1 < n) s -= b[ii] * v[ii + 1];
      if (ii + 2 < n) s -= c[ii] * v[ii + 2];
      v[ii] = s / a[ii];
    }
  };

  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = ((i * 2654435761u + 12345u) % 1000u) / 1000.0 - 0.5;
  for (int it = 0; it < 3; ++it) {
    solve(v);
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;
  }
  return v;
}

}  // namespace lltf::tridiag
