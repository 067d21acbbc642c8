#pragma once

#include <cmath>
#include <numbers>

#include "planetgen/hash.hpp"
#include "planetgen/quadsphere.hpp"
#include "planetgen/vec3.hpp"

namespace testing_support {

inline planetgen::Vec3 random_direction(planetgen::Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double r = std::sqrt(1.0 - z * z);
  return planetgen::normalize(planetgen::Vec3{r * std::cos(phi), r * std::sin(phi), z});
}

inline int random_int(planetgen::Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(std::floor(rng.uniform() * (hi - lo + 1)));
}

inline planetgen::NodeId random_node(planetgen::Rng& rng, int min_depth, int max_depth) {
  planetgen::NodeId n;
  n.face = static_cast<std::uint8_t>(random_int(rng, 0, 5));
  n.depth = static_cast<std::uint8_t>(random_int(rng, min_depth, max_depth));
  const int cells = 1 << n.depth;
  n.x = static_cast<std::uint32_t>(random_int(rng, 0, cells - 1));
  n.y = static_cast<std::uint32_t>(random_int(rng, 0, cells - 1));
  return n;
}

}  // namespace testing_support
