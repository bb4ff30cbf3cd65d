#pragma once

#include <vector>

namespace lltf::tridiag {

// Symmetric tridiagonal matrix: diagonal d[0..n-1], off-diagonal e[0..n-2].

// Number of eigenvalues strictly below x (Sturm / LDL^T sign count).
int count_below(const std::vector<double>& d, const std::vector<double>& e, double x);

// All eigenvalues below `cutoff`, ascending, each bisected to absolute tolerance `tol`.
std::vector<double> eigenvalues_below(const std::vector<double>& d, const std::vector<double>& e,
                                      double cutoff, double tol);

// Normalized eigenvector for an eigenvalue estimate `lambda` (inverse iteration
// with partially pivoted tridiagonal elimination).
std::vector<double> eigenvector(const std::vector<double>& d, const std::vector<double>& e,
                                double lambda);

}  // namespace lltf::tridiag
