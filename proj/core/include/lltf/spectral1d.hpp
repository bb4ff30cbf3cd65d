#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lltf {

struct SpectralOptions {
  std::size_t points = 2001;     // interior points of the coarse grid (forced odd)
  double box_half_width = 0.0;   // 0: choose from the classical turning point
  double shallow_cutoff = 0.0;   // levels within this of the cutoff are not counted
  double eig_tol = 1e-10;        // bisection tolerance, scaled by the potential size
  int max_expansions = 12;        // box growth attempts while edge mass is visible
};

struct SpectralResult {
  std::vector<double> levels;    // ascending; per-level Richardson over nested grids
  double sum = 0.0;              // sum of `levels`
  int count = 0;                 // levels below cutoff - shallow_cutoff
  double box_half_width = 0.0;   // half width actually used
  std::size_t points = 0;        // interior points of the fine grid
};

// Eigenvalues of -d^2/dz^2 + V(z) below `cutoff` on a symmetric Dirichlet box:
// second-order finite differences on two nested grids (h and h/2), each level
// Richardson-extrapolated so the h^2 discretization bias cancels. When no box
// is given, the box starts at four times the classical turning point and
// grows until the most extended retained state carries under 1% of its mass
// in the outer tenth of the box.
SpectralResult spectrum_below(const std::function<double(double)>& V, double cutoff,
                              const SpectralOptions& opts = {});

}  // namespace lltf
