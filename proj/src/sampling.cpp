#include "reeb/sampling.hpp"

#include "reeb/errors.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/random/sobol.hpp>

#include <random>

namespace reeb {

std::vector<Vector> sobol_sphere_points(int dim, int count) {
  if (dim < 1 || count < 0) throw InputError("sobol_sphere_points: bad dimension or count");
  boost::random::sobol gen(static_cast<std::size_t>(dim));
  gen.discard(static_cast<std::uint64_t>(dim));  // skip the origin corner
  const boost::math::normal_distribution<double> normal;
  const double scale = 1.0 / (static_cast<double>(gen.max()) + 1.0);
  std::vector<Vector> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) {
      const double u = (static_cast<double>(gen()) + 0.5) * scale;
      v(i) = boost::math::quantile(normal, u);
    }
    const double norm = v.norm();
    if (norm > 1e-12) out.push_back(v / norm);
  }
  return out;
}

std::vector<Vector> random_sphere_points(int dim, int count, std::uint64_t seed) {
  if (dim < 1 || count < 0) throw InputError("random_sphere_points: bad dimension or count");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vector> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Vector v(dim);
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
    const double norm = v.norm();
    if (norm > 1e-12) out.push_back(v / norm);
  }
  return out;
}

}  // namespace reeb
