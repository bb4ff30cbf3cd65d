#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "lltf/errors.hpp"
#include "lltf/grid.hpp"
#include "lltf/kernels.hpp"
#include "oracles.hpp"

using lltf::build_kernel_table;
using lltf::KernelOptions;
using lltf::kernel_inequality_residual;
using lltf::orbital_density;
using lltf::UniformGrid;
using lltf::v_pair;
using lltf::v_single;

namespace {
constexpr double kPi = 3.14159265358979323846;

KernelOptions no_cache() {
  KernelOptions o;
  o.cache_dir = "off";
  return o;
}
}  // namespace

TEST_CASE("orbital densities are normalized and complete") {
  for (int m : {0, 1, 4, 15, 60}) {
    for (double B : {1.0, 12.5}) {
      const double mass = oracle::integrate_to_inf(
          [&](double r) { return orbital_density(m, B, r) * 2.0 * kPi * r; }, 0.0, 1e-12);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  // summing channels saturates the per-area degeneracy B/(2 pi) well inside
  // the highest occupied ring
  const double B = 2.0, r = 1.0;
  double sum = 0.0;
  for (int m = 0; m <= 80; ++m) sum += orbital_density(m, B, r);
  CHECK(sum == doctest::Approx(B / (2.0 * kPi)).epsilon(1e-10));
}

TEST_CASE("v_single matches the closed form at z = 0") {
  CHECK(v_single(0, 1.0, 0.0, no_cache()) ==
        doctest::Approx(std::sqrt(0.5 * kPi)).epsilon(1e-10));
  for (int m : {0, 1, 2, 5, 12, 40}) {
    for (double B : {1.0, 10.0, 300.0}) {
      const double want =
          std::sqrt(0.5 * B) * std::exp(std::lgamma(m + 0.5) - std::lgamma(m + 1.0));
      CHECK(v_single(m, B, 0.0, no_cache()) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("v_single agrees with the Bessel-Laplace representation") {
  for (int m : {0, 1, 3, 7, 12}) {
    for (double z : {0.0, 0.3, 1.0, 3.0}) {
      for (double B : {1.0, 10.0}) {
        const double want = oracle::bessel_laplace_single(m, B, z, 1e-13);
        CHECK(v_single(m, B, z, no_cache()) == doctest::Approx(want).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("v_single agrees with Monte Carlo") {
  const double mc = oracle::mc_single(2, 1.0, 0.5, 2'000'000, 20240917u);
  CHECK(v_single(2, 1.0, 0.5, no_cache()) == doctest::Approx(mc).epsilon(5e-3));
}

TEST_CASE("v_single decays like a point charge") {
  for (int m : {0, 6}) {
    const double B = 1.0;
    const double z = 300.0 * std::max(1.0, std::sqrt(2.0 * m / B));
    CHECK(v_single(m, B, z, no_cache()) * z == doctest::Approx(1.0).epsilon(1e-4));
  }
}

TEST_CASE("v_single obeys the field rescaling exactly") {
  for (int m : {0, 5}) {
    for (double z : {0.0, 0.4, 2.7}) {
      const double B = 7.3;
      const double lhs = v_single(m, B, z, no_cache());
      const double rhs = std::sqrt(B) * v_single(m, 1.0, std::sqrt(B) * z, no_cache());
      CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
    }
  }
}

TEST_CASE("v_single is even and monotone decreasing in |z|") {
  const double a = v_single(3, 2.0, 0.8, no_cache());
  const double b = v_single(3, 2.0, -0.8, no_cache());
  CHECK(a == b);
  double prev = v_single(1, 2.0, 0.0, no_cache());
  for (double z : {0.3, 0.9, 2.0, 5.0}) {
    const double cur = v_single(1, 2.0, z, no_cache());
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
}

TEST_CASE("v_single throws when the order budget cannot settle") {
  KernelOptions o = no_cache();
  o.initial_order = 64;
  o.max_order = 64;  // no doubling possible
  CHECK_THROWS_AS(v_single(0, 1.0, 0.0, o), lltf::QuadratureError);
}

TEST_CASE("v_pair matches the closed form at coincidence") {
  CHECK(v_pair(0, 0, 1.0, 0.0, no_cache()) ==
        doctest::Approx(0.5 * std::sqrt(kPi)).epsilon(1e-8));
  CHECK(v_pair(0, 0, 25.0, 0.0, no_cache()) ==
        doctest::Approx(0.5 * std::sqrt(kPi * 25.0)).epsilon(1e-8));
}

TEST_CASE("v_pair agrees with the Bessel-Laplace representation") {
  for (int m : {0, 1, 5}) {
    for (int n : {0, 2}) {
      for (double zeta : {0.0, 0.17, 0.8, 2.5}) {
        for (double B : {1.0, 10.0}) {
          const double want = oracle::bessel_laplace_pair(m, n, B, zeta, 1e-13);
          CHECK(v_pair(m, n, B, zeta, no_cache()) == doctest::Approx(want).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("v_pair is symmetric, even, positive, decaying, and rescales exactly") {
  const double B = 3.7;
  CHECK(v_pair(1, 4, B, 0.6, no_cache()) == v_pair(4, 1, B, 0.6, no_cache()));
  CHECK(v_pair(2, 3, B, -1.1, no_cache()) == v_pair(2, 3, B, 1.1, no_cache()));
  double prev = v_pair(0, 1, B, 0.0, no_cache());
  for (double zeta : {0.4, 1.0, 2.5, 6.0}) {
    const double cur = v_pair(0, 1, B, zeta, no_cache());
    CHECK(cur < prev);
    CHECK(cur > 0.0);
    prev = cur;
  }
  for (double zeta : {0.0, 0.5, 2.0}) {
    const double lhs = v_pair(1, 2, B, zeta, no_cache());
    const double rhs = std::sqrt(B) * v_pair(1, 2, 1.0, std::sqrt(B) * zeta, no_cache());
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("pair interaction is dominated by the single-channel bound") {
  // spot sample; the acceptance suite scans 1000 quadruples
  for (double z : {0.0, 0.7}) {
    for (double zp : {-0.4, 1.3}) {
      CHECK(kernel_inequality_residual(0, 2, 5.0, z, zp, no_cache()) >= -1e-6);
      CHECK(kernel_inequality_residual(1, 1, 1.0, z, zp, no_cache()) >= -1e-6);
    }
  }
}

TEST_CASE("kernel table matches direct evaluation and carries the symmetries") {
  const UniformGrid grid(4.0, 41);
  const double B = 10.0;
  const auto t = build_kernel_table(B, 2, grid, no_cache());
  CHECK(t.B() == B);
  CHECK(t.m_max() == 2);

  // direct match on a few entries
  CHECK(t.single_at(1, 20) == v_single(1, B, grid.z(20), no_cache()));
  CHECK(t.single_at(0, 33) == v_single(0, B, grid.z(33), no_cache()));
  CHECK(t.pair_at(0, 2, 40) == v_pair(0, 2, B, grid.diff(40), no_cache()));

  for (int m = 0; m <= 2; ++m) {
    const auto& row = t.single(m);
    for (std::size_t i = 0; i < grid.n; ++i) {
      CHECK(row[i] > 0.0);
      CHECK(row[i] == row[grid.n - 1 - i]);  // even in z, exactly
    }
    for (int n = m; n <= 2; ++n) {
      const auto& p = t.pair(m, n);
      CHECK(&p == &t.pair(n, m));  // one stored row per unordered pair
      const std::size_t nd = grid.diff_size();
      for (std::size_t k = 0; k < nd; ++k) {
        CHECK(p[k] > 0.0);
        CHECK(p[k] == p[nd - 1 - k]);  // even in zeta, exactly
      }
      for (std::size_t k = grid.n; k < nd; ++k) CHECK(p[k] < p[k - 1]);
    }
  }
}

TEST_CASE("kernel cache round-trips bitwise and rejects mismatched keys") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "lltf-cache-test";
  fs::remove_all(dir);

  KernelOptions o;
  o.cache_dir = dir.string();
  const UniformGrid grid(3.0, 21);
  const auto fresh = build_kernel_table(2.0, 1, grid, o);  // computes, then stores
  const auto cached = build_kernel_table(2.0, 1, grid, o);  // loads
  REQUIRE(cached.m_max() == fresh.m_max());
  for (int m = 0; m <= 1; ++m) {
    for (std::size_t i = 0; i < grid.n; ++i) CHECK(cached.single_at(m, i) == fresh.single_at(m, i));
    for (int n = m; n <= 1; ++n)
      for (std::size_t k = 0; k < grid.diff_size(); ++k)
        CHECK(cached.pair_at(m, n, k) == fresh.pair_at(m, n, k));
  }

  const std::string path = dir.string() + "/" + lltf::cache_key(2.0, 1, grid, o.tol);
  CHECK(fs::exists(path));
  lltf::KernelTable out;
  CHECK(lltf::cache_load(path, 2.0, 1, grid, o.tol, out));
  CHECK_FALSE(lltf::cache_load(path, 2.5, 1, grid, o.tol, out));     // wrong field
  CHECK_FALSE(lltf::cache_load(path, 2.0, 2, grid, o.tol, out));     // wrong channel count
  CHECK_FALSE(lltf::cache_load(path, 2.0, 1, grid, 1e-10, out));     // wrong tolerance
  fs::remove_all(dir);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(v_single(-1, 1.0, 0.0, no_cache()), std::invalid_argument);
  CHECK_THROWS_AS(v_single(0, 0.0, 0.0, no_cache()), std::invalid_argument);
  CHECK_THROWS_AS(v_pair(0, -2, 1.0, 0.0, no_cache()), std::invalid_argument);
  CHECK_THROWS_AS(orbital_density(0, -1.0, 0.0), std::invalid_argument);
}
