#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "planetgen/mesh.hpp"
#include "planetgen/noise.hpp"
#include "planetgen/terrain.hpp"
#include "planetgen/vec3.hpp"

namespace planetgen {

enum class InstanceKind : std::uint8_t { tree_palm, tree_normal, cloud };

std::string_view kind_name(InstanceKind kind);

struct SceneInstance {
  InstanceKind kind = InstanceKind::tree_normal;
  Vec3 anchor;            // meters, planet-centered
  double rotation = 0.0;  // radians about local up
  double scale = 1.0;
  double embed_depth = 0.0;  // trunk extension below the anchor, meters

  bool operator==(const SceneInstance&) const = default;
};

struct TreeDensity {
  // Instances per tile at the reference (threshold) depth.
  double forest = 24.0;
  double grassland = 8.0;
  double beach = 6.0;

  double of(Biome biome) const;
  double max() const;
  bool operator==(const TreeDensity&) const = default;
};

struct TreeConfig {
  int lod_threshold = 10;  // trees only on tiles at or below this depth
  TreeDensity density;
  double embed_depth = 2.0;
  double scale_min = 0.8;
  double scale_max = 1.4;

  bool operator==(const TreeConfig&) const = default;
};

struct CloudConfig {
  int count = 64;
  double altitude = 12000.0;  // meters above base radius
  double scale_min = 0.5;
  double scale_max = 2.5;

  bool operator==(const CloudConfig&) const = default;
};

void validate(const TreeConfig& config);
void validate(const CloudConfig& config);

/// Deterministic tree instances for one tile. Candidate spots are drawn
/// uniformly on the tile's face patch from a stream seeded by
/// (planet seed, face, depth, x, y); each is kept with probability
/// density(biome) / max density, so mountain and ocean get none. Beach trees
/// are palms. Tiles shallower than the threshold get an empty list.
std::vector<SceneInstance> place_trees(const NodeId& tile, const SurfaceSampler& sampler,
                                       double base_radius, NoiseSeed seed, const TreeConfig& config);

/// Convenience overload taking the tile mesh.
std::vector<SceneInstance> place_trees(const TileMesh& tile, const SurfaceSampler& sampler,
                                       double base_radius, NoiseSeed seed, const TreeConfig& config);

/// Cloud spawners at uniformly distributed directions.
std::vector<SceneInstance> place_clouds(NoiseSeed seed, double base_radius, const CloudConfig& config);

struct OrbitConfig {
  double sun_period = 1200.0;  // seconds per revolution
  double moon_period = 300.0;
  double moon_distance = 4.0e6;  // meters from planet center
  double moon_inclination = 0.09;  // radians
  double sun_distance = 1.0e8;  // where the viewer draws the sun sphere

  bool operator==(const OrbitConfig&) const = default;
};

void validate(const OrbitConfig& config);

struct Ephemeris {
  Vec3 sun_direction;
  Vec3 sun_position;
  Vec3 moon_position;
  double moon_phase = 0.0;  // 0 new, 0.5 half, 1 full
  double time = 0.0;
};

/// Lit fraction convention: (1 − cos θ) / 2 with θ the angle between the sun
/// direction and the moon direction from the planet center.
double moon_phase(const Vec3& sun_direction, const Vec3& moon_direction);

Ephemeris ephemeris_at(double time, const OrbitConfig& config);

}  // namespace planetgen
