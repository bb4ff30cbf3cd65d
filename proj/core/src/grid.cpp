#include "lltf/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace lltf {

UniformGrid::UniformGrid(double zmax_, std::size_t n_) : zmax(zmax_), n(n_) {
  if (!(zmax > 0.0)) throw std::invalid_argument("UniformGrid: zmax must be positive");
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("UniformGrid: n must be odd and >= 3");
  h = 2.0 * zmax / static_cast<double>(n - 1);
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> zs(n);
  for (std::size_t i = 0; i < n; ++i) zs[i] = z(i);
  return zs;
}

RadialGrid::RadialGrid(double r1, double rmax, std::size_t n, double knee_frac, double geo_frac) {
  if (!(r1 > 0.0) || !(rmax > r1)) throw std::invalid_argument("RadialGrid: need 0 < r1 < rmax");
  if (n < 16) throw std::invalid_argument("RadialGrid: n too small");
  const std::size_t ngeo = static_cast<std::size_t>(static_cast<double>(n) * geo_frac);
  const std::size_t nuni = n - ngeo;
  const double knee = rmax * knee_frac;
  const double q = std::pow(knee / r1, 1.0 / static_cast<double>(ngeo - 1));
  r.reserve(n);
  double x = r1;
  for (std::size_t i = 0; i < ngeo; ++i, x *= q) r.push_back(x);
  const double du = (rmax - knee) / static_cast<double>(nuni);
  for (std::size_t i = 1; i <= nuni; ++i) r.push_back(knee + du * static_cast<double>(i));
  dr.resize(r.size());
  for (std::size_t i = 0; i + 1 < r.size(); ++i) dr[i] = r[i + 1] - r[i];
  dr.back() = dr[dr.size() - 2];
}

double trapezoid(const std::vector<double>& y, const std::vector<double>& x) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

std::vector<double> cumtrapezoid(const std::vector<double>& y, const std::vector<double>& x) {
  std::vector<double> c(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    c[i] = c[i - 1] + 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
  return c;
}

}  // namespace lltf
