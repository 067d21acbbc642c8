#include "planetgen/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "planetgen/errors.hpp"
#include "planetgen/hash.hpp"

namespace planetgen {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t tile_stream_seed(NoiseSeed seed, const NodeId& n) {
  return hash_values(seed.value, 0x7472656573ULL, n.face, n.depth, n.x, n.y);
}

}  // namespace

std::string_view kind_name(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::tree_palm: return "tree_palm";
    case InstanceKind::tree_normal: return "tree_normal";
    case InstanceKind::cloud: return "cloud";
  }
  return "unknown";
}

double TreeDensity::of(Biome biome) const {
  switch (biome) {
    case Biome::forest: return forest;
    case Biome::grassland: return grassland;
    case Biome::beach: return beach;
    default: return 0.0;
  }
}

double TreeDensity::max() const { return std::max({forest, grassland, beach}); }

void validate(const TreeConfig& c) {
  if (c.lod_threshold < 0) throw ConfigError("tree lod_threshold ≥ 0");
  if (c.density.forest < 0.0 || c.density.grassland < 0.0 || c.density.beach < 0.0)
    throw ConfigError("tree densities ≥ 0");
  if (!(c.embed_depth > 0.0)) throw ConfigError("tree embed_depth > 0");
  if (!(c.scale_min > 0.0 && c.scale_min <= c.scale_max)) throw ConfigError("0 < tree scale_min ≤ scale_max");
}

void validate(const CloudConfig& c) {
  if (c.count < 0) throw ConfigError("cloud count ≥ 0");
  if (!(c.altitude >= 0.0)) throw ConfigError("cloud altitude ≥ 0");
  if (!(c.scale_min > 0.0 && c.scale_min <= c.scale_max)) throw ConfigError("0 < cloud scale_min ≤ scale_max");
}

void validate(const OrbitConfig& c) {
  if (!(c.sun_period > 0.0)) throw ConfigError("sun_period > 0");
  if (!(c.moon_period > 0.0 && c.moon_period < c.sun_period)) throw ConfigError("0 < moon_period < sun_period");
  if (!(c.moon_distance > 0.0)) throw ConfigError("moon_distance > 0");
  if (!(c.sun_distance > c.moon_distance)) throw ConfigError("sun_distance > moon_distance");
}

std::vector<SceneInstance> place_trees(const NodeId& tile, const SurfaceSampler& sampler,
                                       double base_radius, NoiseSeed seed, const TreeConfig& config) {
  require_valid(tile);
  std::vector<SceneInstance> out;
  if (tile.depth < config.lod_threshold) return out;
  const double max_density = config.density.max();
  if (max_density <= 0.0) return out;

  // Constant density per unit area: each level down has a quarter of the area.
  const double area_factor = std::ldexp(1.0, -2 * (tile.depth - config.lod_threshold));
  const auto candidates = static_cast<int>(std::lround(max_density * area_factor));

  Rng rng(tile_stream_seed(seed, tile));
  const double cells = static_cast<double>(tile.cells_per_side());
  for (int c = 0; c < candidates; ++c) {
    // Fixed draw count per candidate keeps later candidates independent of
    // earlier rejections.
    const double u = (tile.x + rng.uniform()) / cells;
    const double v = (tile.y + rng.uniform()) / cells;
    const double keep = rng.uniform();
    const double rotation = rng.uniform(0.0, kTwoPi);
    const double scale = rng.uniform(config.scale_min, config.scale_max);

    const Vec3 dir = face_uv_to_sphere(tile.face, u, v);
    const SurfaceSample s = sampler.sample(dir);
    if (keep >= config.density.of(s.biome) / max_density) continue;
    SceneInstance tree;
    tree.kind = s.biome == Biome::beach ? InstanceKind::tree_palm : InstanceKind::tree_normal;
    tree.anchor = dir * (base_radius + s.displacement);
    tree.rotation = rotation;
    tree.scale = scale;
    tree.embed_depth = config.embed_depth;
    out.push_back(tree);
  }
  return out;
}

std::vector<SceneInstance> place_trees(const TileMesh& tile, const SurfaceSampler& sampler,
                                       double base_radius, NoiseSeed seed, const TreeConfig& config) {
  return place_trees(tile.node, sampler, base_radius, seed, config);
}

std::vector<SceneInstance> place_clouds(NoiseSeed seed, double base_radius, const CloudConfig& config) {
  validate(config);
  std::vector<SceneInstance> out;
  out.reserve(static_cast<std::size_t>(config.count));
  Rng rng(hash_combine(seed.value, 0x636c6f756473ULL));
  for (int i = 0; i < config.count; ++i) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, kTwoPi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Vec3 dir{r * std::cos(phi), r * std::sin(phi), z};
    SceneInstance cloud;
    cloud.kind = InstanceKind::cloud;
    cloud.anchor = dir * (base_radius + config.altitude);
    cloud.rotation = rng.uniform(0.0, kTwoPi);
    cloud.scale = rng.uniform(config.scale_min, config.scale_max);
    cloud.embed_depth = 0.0;
    out.push_back(cloud);
  }
  return out;
}

double moon_phase(const Vec3& sun_direction, const Vec3& moon_direction) {
  const double c = std::clamp(dot(normalize(sun_direction), normalize(moon_direction)), -1.0, 1.0);
  return (1.0 - c) / 2.0;
}

Ephemeris ephemeris_at(double time, const OrbitConfig& config) {
  if (!std::isfinite(time)) throw DomainError("ephemeris time is not finite");
  validate(config);
  Ephemeris e;
  e.time = time;
  const double sun_angle = kTwoPi * std::fmod(time / config.sun_period, 1.0);
  e.sun_direction = {std::cos(sun_angle), std::sin(sun_angle), 0.0};
  e.sun_position = e.sun_direction * config.sun_distance;

  const double moon_angle = kTwoPi * std::fmod(time / config.moon_period, 1.0);
  const double ci = std::cos(config.moon_inclination);
  const double si = std::sin(config.moon_inclination);
  const Vec3 moon_dir{std::cos(moon_angle), std::sin(moon_angle) * ci, std::sin(moon_angle) * si};
  e.moon_position = moon_dir * config.moon_distance;
  e.moon_phase = moon_phase(e.sun_direction, moon_dir);
  return e;
}

}  // namespace planetgen
