#pragma once

#include <stdexcept>
#include <string>

namespace lltf {

// Quadrature failed to settle under order doubling.
struct QuadratureError : std::runtime_error {
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solver exhausted its budget without meeting its tolerance.
struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

// A fixed basis or channel budget provably undercounts the result.
struct TruncationError : std::runtime_error {
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lltf
