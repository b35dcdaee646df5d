#pragma once

#include "reeb/symplectic.hpp"

#include <cstdint>
#include <vector>

namespace reeb {

/// Quasi-uniform directions on S^{dim-1}: Sobol points pushed through the
/// inverse normal CDF and normalized.
std::vector<Vector> sobol_sphere_points(int dim, int count);

/// Independent uniform directions on S^{dim-1}.
std::vector<Vector> random_sphere_points(int dim, int count, std::uint64_t seed);

}  // namespace reeb
