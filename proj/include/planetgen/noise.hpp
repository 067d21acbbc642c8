#pragma once

#include <cstdint>

#include "planetgen/vec3.hpp"

namespace planetgen {

struct NoiseSeed {
  std::uint64_t value = 0;
  constexpr bool operator==(const NoiseSeed&) const = default;
};

struct FbmParams {
  int octaves = 6;
  double persistence = 0.5;   // amplitude multiplier per octave
  double lacunarity = 2.0;    // frequency multiplier per octave
  double exponentiation = 1.0;
  double base_frequency = 1.0;  // cycles per unit length

  bool operator==(const FbmParams&) const = default;
};

/// Throws ConfigError naming the first violated rule.
void validate(const FbmParams& params);

/// Improved-Perlin gradient noise in [-1, 1]. Lattice gradients come from an
/// integer hash of (cell, seed), so no permutation table is involved.
/// Exactly zero at integer lattice points. Throws DomainError on non-finite
/// input or coordinates too large to address a lattice cell.
double perlin3(const Vec3& p, NoiseSeed seed);

/// Seed used by octave `octave` of an FBM sum.
NoiseSeed octave_seed(NoiseSeed seed, int octave);

/// Sum of octaves normalized by the analytic amplitude sum into [0, 1], then
/// raised to `exponentiation`.
double fbm(const Vec3& p, const FbmParams& params, NoiseSeed seed);

}  // namespace planetgen
