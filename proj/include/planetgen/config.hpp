#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "planetgen/noise.hpp"
#include "planetgen/quadtree.hpp"
#include "planetgen/scene.hpp"
#include "planetgen/terrain.hpp"

namespace planetgen {

/// Everything needed to regenerate one planet bit for bit.
struct PlanetConfig {
  NoiseSeed seed{42};
  double base_radius = 1.0e6;
  NoiseDomain noise_domain = NoiseDomain::sphere;
  GeneratorParams generator;
  BiomeThresholds biomes;

  std::uint32_t resolution = 16;
  int max_depth = 12;
  double split_factor = 1.5;
  double hysteresis = 1.2;

  TreeConfig trees;
  CloudConfig clouds;
  OrbitConfig orbit;

  bool is_layered() const { return std::holds_alternative<LayeredPlanetParams>(generator); }
  bool operator==(const PlanetConfig&) const = default;
};

PlanetConfig default_simple_config();
PlanetConfig default_layered_config();

/// Throws ConfigError naming the first violated invariant.
void validate(const PlanetConfig& config);

/// Parses and validates. Missing fields take their defaults; unknown keys,
/// wrong types, a generator block that does not match "generator", or an
/// unknown generator name are ConfigErrors.
PlanetConfig parse_config(const nlohmann::json& j);
PlanetConfig parse_config(const std::string& text);
/// Throws IoError if the file cannot be read.
PlanetConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const PlanetConfig& config);

Terrain make_terrain(const PlanetConfig& config);
LodParams lod_params(const PlanetConfig& config);

}  // namespace planetgen
