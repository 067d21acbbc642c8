#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string_view>
#include <variant>

#include "planetgen/noise.hpp"
#include "planetgen/spline.hpp"
#include "planetgen/vec3.hpp"

namespace planetgen {

enum class Biome : std::uint8_t { ocean = 0, beach, grassland, forest, mountain, lava };
inline constexpr int kBiomeCount = 6;

std::string_view biome_name(Biome biome);

struct BiomeThresholds {
  double beach_band_fraction = 0.02;  // beach band = fraction · amplitude_scale
  double mountain_fraction = 0.6;
  double lava_threshold = 0.85;
  double forest_low = 0.3;
  double forest_high = 0.7;

  bool operator==(const BiomeThresholds&) const = default;
};

void validate(const BiomeThresholds& thresholds);

/// How a unit direction is turned into a noise-space point. `sphere` samples
/// 3D noise at the direction itself; `lonlat` samples the z = 0 slice at
/// (longitude, latitude) in radians and has a seam at the antimeridian.
enum class NoiseDomain { sphere, lonlat };

Vec3 noise_point(const Vec3& dir, NoiseDomain domain);

struct SimplePlanetParams {
  FbmParams fbm;
  double base_factor = 4000.0;  // meters
  double ocean_level = 800.0;   // meters above base radius

  bool operator==(const SimplePlanetParams&) const = default;
};

struct NoiseLayer {
  FbmParams fbm;
  SplineCurve spline = SplineCurve::identity();

  bool operator==(const NoiseLayer&) const = default;
};

enum class Layer : int { continentalness = 0, erosion = 1, peaks_valleys = 2, temperature = 3 };

struct LayeredPlanetParams {
  NoiseLayer continentalness;
  NoiseLayer erosion;
  NoiseLayer peaks_valleys;
  NoiseLayer temperature;
  double amplitude = 4000.0;  // meters per unit height factor
  double ocean_level = 1000.0;

  const NoiseLayer& layer(Layer which) const;
  bool operator==(const LayeredPlanetParams&) const = default;
};

void validate(const SimplePlanetParams& params);
void validate(const LayeredPlanetParams& params);

/// Post-spline layer values, each in [0, 1].
struct LayerSample {
  double continentalness = 0.0;
  double erosion = 0.0;
  double peaks_valleys = 0.0;
  double temperature = 0.0;

  bool operator==(const LayerSample&) const = default;
};

struct SurfaceSample {
  double displacement = 0.0;  // meters above base radius
  Biome biome = Biome::ocean;
  std::optional<LayerSample> layers;

  bool operator==(const SurfaceSample&) const = default;
};

/// Biome from elevation (and temperature when the generator has one).
/// Precedence: ocean/lava, beach, mountain, then forest or grassland. Without
/// a temperature the forest band is applied to the normalized elevation
/// between the beach and mountain lines. Throws InvariantError when
/// displacement < ocean_level.
Biome classify_biome(double displacement, double ocean_level, double amplitude_scale,
                     std::optional<double> temperature, const BiomeThresholds& thresholds = {});

/// Seed of one layered-generator channel, distinct per layer.
NoiseSeed layer_seed(NoiseSeed planet_seed, Layer which);

SurfaceSample simple_height(const Vec3& dir, const SimplePlanetParams& params, NoiseSeed seed,
                            const BiomeThresholds& thresholds = {},
                            NoiseDomain domain = NoiseDomain::sphere);

LayerSample layer_sample(const Vec3& dir, const LayeredPlanetParams& params, NoiseSeed seed,
                         NoiseDomain domain = NoiseDomain::sphere);

/// displacement = max((C + PV) · (1 − E) · amplitude, ocean_level), evaluated
/// left to right in that order.
SurfaceSample layered_height(const Vec3& dir, const LayeredPlanetParams& params, NoiseSeed seed,
                             const BiomeThresholds& thresholds = {},
                             NoiseDomain domain = NoiseDomain::sphere);

/// Anything that can be displaced onto a sphere: the two generators and the
/// synthetic fields used in tests.
class SurfaceSampler {
 public:
  virtual ~SurfaceSampler() = default;
  virtual SurfaceSample sample(const Vec3& dir) const = 0;
  /// Lower bound on displacement (the ocean level for the real generators).
  virtual double min_displacement() const = 0;
  /// Upper bound on displacement, used for LOD bounding volumes.
  virtual double max_displacement() const = 0;
};

using GeneratorParams = std::variant<SimplePlanetParams, LayeredPlanetParams>;

class Terrain final : public SurfaceSampler {
 public:
  Terrain(GeneratorParams params, NoiseSeed seed, BiomeThresholds thresholds = {},
          NoiseDomain domain = NoiseDomain::sphere);

  SurfaceSample sample(const Vec3& dir) const override;
  double min_displacement() const override;
  double max_displacement() const override;

  const GeneratorParams& params() const { return params_; }
  NoiseSeed seed() const { return seed_; }

 private:
  GeneratorParams params_;
  NoiseSeed seed_;
  BiomeThresholds thresholds_;
  NoiseDomain domain_;
};

}  // namespace planetgen
