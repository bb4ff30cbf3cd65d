#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lltf/kernels.hpp"

namespace lltf {
namespace {

constexpr char kMagic[8] = {'L', 'L', 'T', 'F', 'K', 'T', '0', '2'};

std::string hex_bits(double v) {
  std::uint64_t u = 0;
  std::memcpy(&u, &v, sizeof u);
  std::ostringstream ss;
  ss << std::hex << u;
  return ss.str();
}

void write_d(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_i(std::ostream& os, std::int64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

bool read_d(std::istream& is, double& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return static_cast<bool>(is);
}

bool read_i(std::istream& is, std::int64_t& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return static_cast<bool>(is);
}

}  // namespace

std::string cache_directory(const std::string& override_dir) {
  if (override_dir == "off") return {};
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("LLTF_CACHE_DIR"); env && *env) return env;
  if (const char* xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
    return std::string(xdg) + "/lltf";
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::string(home) + "/.cache/lltf";
  return {};
}

std::string cache_key(double B, int m_max, const UniformGrid& grid, double tol) {
  // exact bit patterns of the key doubles, so the key never aliases
  std::ostringstream ss;
  ss << "kt-" << hex_bits(B) << "-" << m_max << "-" << hex_bits(grid.zmax) << "-" << grid.n << "-"
     << hex_bits(tol) << ".bin";
  return ss.str();
}

bool cache_store(const std::string& path, const KernelTable& t, double tol) {
  namespace fs = std::filesystem;
  std::error_code ec;
  const fs::path target(path);
  if (target.has_parent_path()) {
    fs::create_directories(target.parent_path(), ec);
    if (ec) return false;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) return false;
    os.write(kMagic, sizeof kMagic);
    write_d(os, t.B_);
    write_i(os, t.m_max_);
    write_d(os, t.grid_.zmax);
    write_i(os, static_cast<std::int64_t>(t.grid_.n));
    write_d(os, tol);
    write_i(os, t.order_);
    for (const auto& row : t.v_single_)
      os.write(reinterpret_cast<const char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(double)));
    for (const auto& row : t.v_pair_)
      os.write(reinterpret_cast<const char*>(row.data()),
               static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!os) {
      os.close();
      fs::remove(tmp, ec);
      return false;
    }
  }
  fs::rename(tmp, path, ec);  // atomic publish; readers never see partial files
  if (ec) {
    fs::remove(tmp, ec);
    return false;
  }
  return true;
}

bool cache_load(const std::string& path, double B, int m_max, const UniformGrid& grid, double tol,
                KernelTable& out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return false;

  double fB = 0.0, fzmax = 0.0, ftol = 0.0;
  std::int64_t fmm = 0, fn = 0, forder = 0;
  if (!read_d(is, fB) || !read_i(is, fmm) || !read_d(is, fzmax) || !read_i(is, fn) ||
      !read_d(is, ftol) || !read_i(is, forder))
    return false;
  if (fB != B || fmm != m_max || fzmax != grid.zmax ||
      fn != static_cast<std::int64_t>(grid.n) || ftol != tol)
    return false;

  KernelTable t;
  t.B_ = B;
  t.m_max_ = m_max;
  t.grid_ = grid;
  t.order_ = static_cast<int>(forder);
  const std::size_t nz = grid.n;
  const std::size_t nd = grid.diff_size();
  const std::size_t npairs = static_cast<std::size_t>(m_max + 1) * (m_max + 2) / 2;
  t.v_single_.assign(static_cast<std::size_t>(m_max) + 1, std::vector<double>(nz));
  for (auto& row : t.v_single_) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!is) return false;
  }
  t.v_pair_.assign(npairs, std::vector<double>(nd));
  for (auto& row : t.v_pair_) {
    is.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
    if (!is) return false;
  }
  is.peek();
  if (!is.eof()) return false;  // trailing bytes mean a different layout
  out = std::move(t);
  return true;
}

}  // namespace lltf
