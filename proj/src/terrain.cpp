#include "planetgen/terrain.hpp"

#include <algorithm>
#include <cmath>

#include "planetgen/errors.hpp"
#include "planetgen/hash.hpp"

namespace planetgen {
namespace {

void require_unit(const Vec3& dir) {
  if (!is_finite(dir) || std::abs(length(dir) - 1.0) > 1e-12)
    throw DomainError("surface sample: direction is not unit length");
}

double amplitude_scale_of(const LayeredPlanetParams& p) { return p.amplitude; }

}  // namespace

std::string_view biome_name(Biome biome) {
  switch (biome) {
    case Biome::ocean: return "ocean";
    case Biome::beach: return "beach";
    case Biome::grassland: return "grassland";
    case Biome::forest: return "forest";
    case Biome::mountain: return "mountain";
    case Biome::lava: return "lava";
  }
  return "unknown";
}

void validate(const BiomeThresholds& t) {
  if (!(t.beach_band_fraction >= 0.0)) throw ConfigError("beach_band_fraction ≥ 0");
  if (!(t.mountain_fraction > 0.0)) throw ConfigError("mountain_fraction > 0");
  if (!(t.lava_threshold >= 0.0 && t.lava_threshold <= 1.0))
    throw ConfigError("lava_threshold in [0, 1]");
  if (!(t.forest_low >= 0.0 && t.forest_low <= t.forest_high && t.forest_high <= 1.0))
    throw ConfigError("0 ≤ forest_low ≤ forest_high ≤ 1");
}

Vec3 noise_point(const Vec3& dir, NoiseDomain domain) {
  if (domain == NoiseDomain::sphere) return dir;
  const double lon = std::atan2(dir.y, dir.x);
  const double lat = std::asin(std::clamp(dir.z, -1.0, 1.0));
  return {lon, lat, 0.0};
}

const NoiseLayer& LayeredPlanetParams::layer(Layer which) const {
  switch (which) {
    case Layer::continentalness: return continentalness;
    case Layer::erosion: return erosion;
    case Layer::peaks_valleys: return peaks_valleys;
    case Layer::temperature: return temperature;
  }
  return continentalness;
}

void validate(const SimplePlanetParams& p) {
  validate(p.fbm);
  if (!(p.base_factor > 0.0) || !std::isfinite(p.base_factor)) throw ConfigError("base_factor > 0");
  if (!(p.ocean_level >= 0.0) || !std::isfinite(p.ocean_level)) throw ConfigError("ocean_level ≥ 0");
}

void validate(const LayeredPlanetParams& p) {
  constexpr std::array<std::pair<Layer, const char*>, 4> layers{{
      {Layer::continentalness, "continentalness"},
      {Layer::erosion, "erosion"},
      {Layer::peaks_valleys, "peaks_valleys"},
      {Layer::temperature, "temperature"},
  }};
  for (const auto& [which, name] : layers) {
    const NoiseLayer& layer = p.layer(which);
    validate(layer.fbm);
    if (auto problem = validate(layer.spline))
      throw ConfigError(std::string(name) + " spline: " + *problem);
  }
  if (!(p.amplitude > 0.0) || !std::isfinite(p.amplitude)) throw ConfigError("amplitude > 0");
  if (!(p.ocean_level >= 0.0) || !std::isfinite(p.ocean_level)) throw ConfigError("ocean_level ≥ 0");
}

Biome classify_biome(double displacement, double ocean_level, double amplitude_scale,
                     std::optional<double> temperature, const BiomeThresholds& t) {
  if (displacement < ocean_level)
    throw InvariantError("classify_biome: displacement below ocean level");
  if (displacement == ocean_level) {
    if (temperature && *temperature >= t.lava_threshold) return Biome::lava;
    return Biome::ocean;
  }
  const double beach_top = ocean_level + t.beach_band_fraction * amplitude_scale;
  if (displacement <= beach_top) return Biome::beach;
  const double mountain_line = t.mountain_fraction * amplitude_scale;
  if (displacement >= mountain_line) return Biome::mountain;

  double band;
  if (temperature) {
    band = *temperature;
  } else {
    const double span = mountain_line - beach_top;
    band = span > 0.0 ? (displacement - beach_top) / span : 0.0;
  }
  return (band >= t.forest_low && band <= t.forest_high) ? Biome::forest : Biome::grassland;
}

NoiseSeed layer_seed(NoiseSeed planet_seed, Layer which) {
  return NoiseSeed{hash_values(planet_seed.value, 0x6c61796572ULL, static_cast<std::uint64_t>(which))};
}

SurfaceSample simple_height(const Vec3& dir, const SimplePlanetParams& params, NoiseSeed seed,
                            const BiomeThresholds& thresholds, NoiseDomain domain) {
  require_unit(dir);
  const double raw = fbm(noise_point(dir, domain), params.fbm, seed);
  SurfaceSample out;
  out.displacement = std::max(raw * params.base_factor, params.ocean_level);
  out.biome = classify_biome(out.displacement, params.ocean_level, params.base_factor, std::nullopt,
                             thresholds);
  return out;
}

LayerSample layer_sample(const Vec3& dir, const LayeredPlanetParams& params, NoiseSeed seed,
                         NoiseDomain domain) {
  require_unit(dir);
  const Vec3 p = noise_point(dir, domain);
  auto channel = [&](Layer which) {
    const NoiseLayer& layer = params.layer(which);
    return evaluate(layer.spline, fbm(p, layer.fbm, layer_seed(seed, which)));
  };
  LayerSample s;
  s.continentalness = channel(Layer::continentalness);
  s.erosion = channel(Layer::erosion);
  s.peaks_valleys = channel(Layer::peaks_valleys);
  s.temperature = channel(Layer::temperature);
  return s;
}

SurfaceSample layered_height(const Vec3& dir, const LayeredPlanetParams& params, NoiseSeed seed,
                             const BiomeThresholds& thresholds, NoiseDomain domain) {
  const LayerSample layers = layer_sample(dir, params, seed, domain);
  const double height_factor =
      (layers.continentalness + layers.peaks_valleys) * (1.0 - layers.erosion);
  SurfaceSample out;
  out.displacement = std::max(height_factor * params.amplitude, params.ocean_level);
  out.biome = classify_biome(out.displacement, params.ocean_level, amplitude_scale_of(params),
                             layers.temperature, thresholds);
  out.layers = layers;
  return out;
}

Terrain::Terrain(GeneratorParams params, NoiseSeed seed, BiomeThresholds thresholds,
                 NoiseDomain domain)
    : params_(std::move(params)), seed_(seed), thresholds_(thresholds), domain_(domain) {
  std::visit([](const auto& p) { validate(p); }, params_);
  validate(thresholds_);
}

SurfaceSample Terrain::sample(const Vec3& dir) const {
  if (const auto* simple = std::get_if<SimplePlanetParams>(&params_))
    return simple_height(dir, *simple, seed_, thresholds_, domain_);
  return layered_height(dir, std::get<LayeredPlanetParams>(params_), seed_, thresholds_, domain_);
}

double Terrain::min_displacement() const {
  return std::visit([](const auto& p) { return p.ocean_level; }, params_);
}

double Terrain::max_displacement() const {
  // An ocean above the relief floods everything at the ocean level.
  if (const auto* simple = std::get_if<SimplePlanetParams>(&params_))
    return std::max(simple->base_factor, simple->ocean_level);
  const auto& layered = std::get<LayeredPlanetParams>(params_);
  return std::max(2.0 * layered.amplitude, layered.ocean_level);
}

}  // namespace planetgen
