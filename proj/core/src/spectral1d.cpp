#include "lltf/spectral1d.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lltf/tridiag.hpp"

namespace lltf {
namespace {

struct Assembled {
  std::vector<double> d, e;
  double vmax = 1.0;
};

Assembled assemble(const std::function<double(double)>& V, double L, std::size_t n) {
  const double h = 2.0 * L / static_cast<double>(n + 1);
  Assembled a;
  a.d.resize(n);
  a.e.assign(n - 1, -1.0 / (h * h));
  for (std::size_t i = 0; i < n; ++i) {
    const double z = -L + static_cast<double>(i + 1) * h;
    const double v = V(z);
    a.d[i] = 2.0 / (h * h) + v;
    a.vmax = std::max(a.vmax, std::abs(v));
  }
  return a;
}

// largest |z| where the potential dips below the cutoff, scanned outward
double turning_point(const std::function<double(double)>& V, double cutoff) {
  double range = 16.0;
  for (;;) {
    double last = 0.0;
    const int probes = 4096;
    for (int i = 1; i <= probes; ++i) {
      const double z = range * i / probes;
      if (V(z) < cutoff || V(-z) < cutoff) last = z;
    }
    if (last < 0.75 * range || range >= 1e4) return last;
    range *= 2.0;
  }
}

}  // namespace

SpectralResult spectrum_below(const std::function<double(double)>& V, double cutoff,
                              const SpectralOptions& opts) {
  if (opts.points < 3) throw std::invalid_argument("spectrum_below: need at least 3 points");
  const std::size_t n = opts.points | 1;  // odd keeps a node at z = 0
  const bool auto_box = !(opts.box_half_width > 0.0);
  const double turning = auto_box ? turning_point(V, cutoff) : 0.0;
  double L = auto_box ? std::max(4.0 * turning, 1.0) : opts.box_half_width;

  for (int attempt = 0;; ++attempt) {
    const Assembled ac = assemble(V, L, n);
    const Assembled af = assemble(V, L, 2 * n + 1);
    const double tol = opts.eig_tol * std::max(ac.vmax, af.vmax);
    const auto lc = tridiag::eigenvalues_below(ac.d, ac.e, cutoff, tol);
    const auto lf = tridiag::eigenvalues_below(af.d, af.e, cutoff, tol);

    if (auto_box && attempt < opts.max_expansions) {
      if (lf.empty()) {
        // a dipping potential squeezed by a tight Dirichlet box can lose its
        // weakly bound states entirely; grow until they appear or the budget ends
        if (turning > 0.0) {
          L *= 1.5;
          continue;
        }
      } else {
        // the highest retained state is the most extended one
        const auto vec = tridiag::eigenvector(af.d, af.e, lf.back());
        const std::size_t edge = std::max<std::size_t>(1, vec.size() / 10);
        double mass = 0.0;
        for (std::size_t i = 0; i < edge; ++i)
          mass += vec[i] * vec[i] + vec[vec.size() - 1 - i] * vec[vec.size() - 1 - i];
        if (mass > 0.01) {
          L *= 1.5;
          continue;
        }
      }
    }

    SpectralResult res;
    res.box_half_width = L;
    res.points = 2 * n + 1;
    const std::size_t matched = std::min(lc.size(), lf.size());
    res.levels.resize(lf.size());
    for (std::size_t k = 0; k < lf.size(); ++k) {
      // unmatched shallow levels (resolved only by the fine grid) stay raw;
      // extrapolation never pushes a level past the cutoff
      const double lam = k < matched ? (4.0 * lf[k] - lc[k]) / 3.0 : lf[k];
      res.levels[k] = std::min(lam, cutoff);
    }
    for (double lam : res.levels) {
      res.sum += lam;
      if (lam < cutoff - opts.shallow_cutoff) ++res.count;
    }
    return res;
  }
}

}  // namespace lltf
