#pragma once

#include <string>

namespace lltf {

// Energy breakdown common to the radial and channel solvers.
// total is always the sum of the three terms; attraction <= 0 <= repulsion.
struct EnergyReport {
  double kinetic_like = 0.0;       // coefficient times the density-cube integral
  double attraction = 0.0;         // nuclear term, nonpositive
  double repulsion = 0.0;          // electron-electron term, nonnegative
  double total = 0.0;
  double particle_number = 0.0;
  double chemical_potential = 0.0;
};

std::string to_json(const EnergyReport& e);

}  // namespace lltf
