#pragma once

#include <cstddef>
#include <vector>

namespace lltf {

// Symmetric uniform grid on [-zmax, zmax]. n is odd so z = 0 is a node.
struct UniformGrid {
  double zmax = 0.0;
  std::size_t n = 0;
  double h = 0.0;

  UniformGrid() = default;
  UniformGrid(double zmax_, std::size_t n_);

  double z(std::size_t i) const { return -zmax + h * static_cast<double>(i); }
  std::vector<double> nodes() const;
  // trapezoid weight: h in the interior, h/2 at the two ends
  double weight(std::size_t i) const { return (i == 0 || i + 1 == n) ? 0.5 * h : h; }
  // difference grid zeta_k = (k - (n-1)) h, k = 0 .. 2n-2
  std::size_t diff_size() const { return 2 * n - 1; }
  double diff(std::size_t k) const { return (static_cast<double>(k) - static_cast<double>(n - 1)) * h; }
};

// Radial grid: geometric from r1 up to a knee, uniform from the knee to rmax.
struct RadialGrid {
  std::vector<double> r;
  std::vector<double> dr;  // forward spacing, dr[i] = r[i+1] - r[i] (last entry repeats)

  RadialGrid() = default;
  RadialGrid(double r1, double rmax, std::size_t n, double knee_frac = 0.05, double geo_frac = 0.45);
  std::size_t size() const { return r.size(); }
};

double trapezoid(const std::vector<double>& y, const std::vector<double>& x);
// c[i] = integral from x[0] to x[i]
std::vector<double> cumtrapezoid(const std::vector<double>& y, const std::vector<double>& x);

}  // namespace lltf
