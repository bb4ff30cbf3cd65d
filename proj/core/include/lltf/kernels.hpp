#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "lltf/grid.hpp"

namespace lltf {

// |phi_m(x_perp)|^2 at transverse radius r: lowest-band orbital density,
// (B/2pi) (Br^2/2)^m e^{-Br^2/2} / m!  (log-space for large m).
double orbital_density(int m, double B, double r);

struct KernelOptions {
  double tol = 1e-8;        // relative settle tolerance for order doubling
  int initial_order = 64;   // starting quadrature order
  int max_order = 1024;     // doubling cap; exceeded -> QuadratureError
  std::string cache_dir;    // "": resolve from environment; "off": disable caching
};

// Effective one-dimensional attraction V_m(z): the 3D Coulomb potential of a
// unit charge averaged over the orbital density of channel m.
double v_single(int m, double B, double z, const KernelOptions& opts = {});

// Effective channel-channel repulsion V_{m,n}(zeta): Coulomb kernel averaged
// over two orbital densities at longitudinal separation zeta.
double v_pair(int m, int n, double B, double zeta, const KernelOptions& opts = {});

// lhs - 1 for the symmetrized kernel bound
// (1/V_m(z) + 1/V_n(z) + 1/V_m(z') + 1/V_n(z')) V_{m,n}(z - z') >= 1.
double kernel_inequality_residual(int m, int n, double B, double z, double zp,
                                  const KernelOptions& opts = {});

// Tabulated kernels on a shared grid. v_single rows live on the grid nodes;
// v_pair rows live on the difference grid (2n-1 points), so discrete
// convolutions against channel densities need no interpolation.
// Contents are immutable after construction.
class KernelTable {
 public:
  KernelTable() = default;

  double B() const { return B_; }
  int m_max() const { return m_max_; }
  const UniformGrid& grid() const { return grid_; }
  int quadrature_order() const { return order_; }

  const std::vector<double>& single(int m) const { return v_single_.at(static_cast<std::size_t>(m)); }
  const std::vector<double>& pair(int m, int n) const;

  // value lookups by index
  double single_at(int m, std::size_t i) const { return single(m)[i]; }
  double pair_at(int m, int n, std::size_t k) const { return pair(m, n)[k]; }

  friend KernelTable build_kernel_table(double B, int m_max, const UniformGrid& grid,
                                        const KernelOptions& opts);
  friend bool cache_load(const std::string& path, double B, int m_max, const UniformGrid& grid,
                         double tol, KernelTable& out);
  friend bool cache_store(const std::string& path, const KernelTable& table, double tol);

 private:
  double B_ = 0.0;
  int m_max_ = -1;
  UniformGrid grid_;
  int order_ = 0;
  std::vector<std::vector<double>> v_single_;  // [m][i]
  std::vector<std::vector<double>> v_pair_;    // [pair_index(m,n)][k], m <= n stored, mirrored view
};

KernelTable build_kernel_table(double B, int m_max, const UniformGrid& grid,
                               const KernelOptions& opts = {});

// binary kernel cache
std::string cache_directory(const std::string& override_dir);  // resolves env/default
std::string cache_key(double B, int m_max, const UniformGrid& grid, double tol);
bool cache_load(const std::string& path, double B, int m_max, const UniformGrid& grid, double tol,
                KernelTable& out);
bool cache_store(const std::string& path, const KernelTable& table, double tol);

}  // namespace lltf
