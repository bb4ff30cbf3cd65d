#pragma once

#include <vector>

namespace lltf::quad {

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Legendre on [-1, 1].
const Rule& gauss_legendre(int n);

// Generalized Gauss-Laguerre for the probability measure u^alpha e^{-u} / Gamma(alpha+1).
// Weights sum to 1, so no Gamma factors appear downstream even for large alpha.
const Rule& gauss_laguerre_prob(double alpha, int n);

// tanh-sinh nodes on (0,1); weights include the step. Nodes cluster at both
// endpoints, integrating endpoint log singularities spectrally. Nodes whose
// distance to an endpoint underflows are dropped.
const Rule& tanh_sinh(int level);

// Complete elliptic integral K(k) given the complementary modulus squared
// k'^2 = 1 - k^2, by the arithmetic-geometric mean. Passing k'^2 directly
// avoids the 1-k^2 cancellation near k = 1.
double elliptic_K_comp(double kp2);

}  // namespace lltf::quad
