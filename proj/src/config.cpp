#include "planetgen/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "planetgen/errors.hpp"

namespace planetgen {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + " has the wrong type");
  }
}

FbmParams parse_fbm(const json& j, const std::string& where) {
  check_keys(j, {"octaves", "persistence", "lacunarity", "exponentiation", "base_frequency"}, where);
  FbmParams p;
  read(j, "octaves", p.octaves, where);
  read(j, "persistence", p.persistence, where);
  read(j, "lacunarity", p.lacunarity, where);
  read(j, "exponentiation", p.exponentiation, where);
  read(j, "base_frequency", p.base_frequency, where);
  return p;
}

json fbm_json(const FbmParams& p) {
  return {{"octaves", p.octaves},
          {"persistence", p.persistence},
          {"lacunarity", p.lacunarity},
          {"exponentiation", p.exponentiation},
          {"base_frequency", p.base_frequency}};
}

SplineCurve parse_spline(const json& points, const std::string& mode, const std::string& where) {
  if (!points.is_array()) throw ConfigError(where + ".spline must be an array of [input, output] pairs");
  std::vector<ControlPoint> pts;
  for (const json& p : points) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
      throw ConfigError(where + ".spline entries must be [input, output] pairs");
    pts.push_back({p[0].get<double>(), p[1].get<double>()});
  }
  Interpolation interp;
  if (mode == "linear") interp = Interpolation::linear;
  else if (mode == "monotone_cubic") interp = Interpolation::monotone_cubic;
  else throw ConfigError(where + ".interpolation must be \"linear\" or \"monotone_cubic\"");
  SplineCurve curve(std::move(pts), interp);
  if (auto problem = validate(curve)) throw ConfigError(where + " spline: " + *problem);
  return curve;
}

NoiseLayer parse_layer(const json& j, const NoiseLayer& defaults, const std::string& where) {
  check_keys(j, {"fbm", "spline", "interpolation"}, where);
  NoiseLayer layer = defaults;
  if (j.contains("fbm")) layer.fbm = parse_fbm(j.at("fbm"), where + ".fbm");
  std::string mode = layer.spline.mode() == Interpolation::linear ? "linear" : "monotone_cubic";
  read(j, "interpolation", mode, where);
  if (j.contains("spline")) {
    layer.spline = parse_spline(j.at("spline"), mode, where);
  } else {
    layer.spline = parse_spline(
        [&] {
          json pts = json::array();
          for (const auto& p : layer.spline.points()) pts.push_back({p.input, p.output});
          return pts;
        }(),
        mode, where);
  }
  return layer;
}

json layer_json(const NoiseLayer& layer) {
  json pts = json::array();
  for (const auto& p : layer.spline.points()) pts.push_back({p.input, p.output});
  return {{"fbm", fbm_json(layer.fbm)},
          {"spline", pts},
          {"interpolation", layer.spline.mode() == Interpolation::linear ? "linear" : "monotone_cubic"}};
}

SimplePlanetParams parse_simple(const json& j) {
  check_keys(j, {"fbm", "base_factor_m", "ocean_level_m"}, "simple");
  SimplePlanetParams p = std::get<SimplePlanetParams>(default_simple_config().generator);
  if (j.contains("fbm")) p.fbm = parse_fbm(j.at("fbm"), "simple.fbm");
  read(j, "base_factor_m", p.base_factor, "simple");
  read(j, "ocean_level_m", p.ocean_level, "simple");
  return p;
}

LayeredPlanetParams parse_layered(const json& j) {
  check_keys(j, {"continentalness", "erosion", "peaks_valleys", "temperature", "amplitude_m", "ocean_level_m"},
             "layered");
  LayeredPlanetParams p = std::get<LayeredPlanetParams>(default_layered_config().generator);
  if (j.contains("continentalness"))
    p.continentalness = parse_layer(j.at("continentalness"), p.continentalness, "layered.continentalness");
  if (j.contains("erosion")) p.erosion = parse_layer(j.at("erosion"), p.erosion, "layered.erosion");
  if (j.contains("peaks_valleys"))
    p.peaks_valleys = parse_layer(j.at("peaks_valleys"), p.peaks_valleys, "layered.peaks_valleys");
  if (j.contains("temperature"))
    p.temperature = parse_layer(j.at("temperature"), p.temperature, "layered.temperature");
  read(j, "amplitude_m", p.amplitude, "layered");
  read(j, "ocean_level_m", p.ocean_level, "layered");
  return p;
}

SplineCurve curve(std::initializer_list<ControlPoint> pts) { return SplineCurve(std::vector<ControlPoint>(pts)); }

}  // namespace

PlanetConfig default_simple_config() {
  PlanetConfig c;
  SimplePlanetParams p;
  p.fbm = FbmParams{6, 0.5, 2.0, 2.0, 1.5};
  p.base_factor = 8000.0;
  p.ocean_level = 2000.0;
  c.generator = p;
  c.trees.lod_threshold = c.max_depth - 2;
  return c;
}

PlanetConfig default_layered_config() {
  PlanetConfig c;
  LayeredPlanetParams p;
  // FBM output clusters around 0.5, so the curves do their work in the middle.
  p.continentalness.fbm = FbmParams{6, 0.5, 2.0, 1.0, 1.2};
  p.continentalness.spline = curve({{0.0, 0.0}, {0.4, 0.05}, {0.5, 0.3}, {0.6, 0.45}, {1.0, 0.6}});
  p.erosion.fbm = FbmParams{4, 0.5, 2.0, 1.0, 2.0};
  p.erosion.spline = curve({{0.0, 0.0}, {0.45, 0.2}, {0.6, 0.6}, {1.0, 0.9}});
  p.peaks_valleys.fbm = FbmParams{5, 0.5, 2.0, 1.0, 6.0};
  p.peaks_valleys.spline = curve({{0.0, 0.0}, {0.1, 0.4}, {0.3, 0.5}, {1.0, 1.0}});
  p.temperature.fbm = FbmParams{3, 0.5, 2.0, 1.0, 1.0};
  p.temperature.spline = curve({{0.0, 0.0}, {0.35, 0.1}, {0.65, 0.9}, {1.0, 1.0}});
  p.amplitude = 4000.0;
  p.ocean_level = 2400.0;
  c.generator = p;
  c.biomes.mountain_fraction = 0.8;
  c.trees.lod_threshold = c.max_depth - 2;
  return c;
}

void validate(const PlanetConfig& c) {
  if (!(c.base_radius > 0.0) || !std::isfinite(c.base_radius)) throw ConfigError("base_radius > 0");
  std::visit([](const auto& p) { validate(p); }, c.generator);
  validate(c.biomes);
  if (c.resolution < 2 || c.resolution % 2 != 0) throw ConfigError("resolution even and ≥ 2");
  if (c.resolution > 1024) throw ConfigError("resolution ≤ 1024");
  validate(lod_params(c));
  validate(c.trees);
  validate(c.clouds);
  validate(c.orbit);
  if (!(c.orbit.moon_distance > c.base_radius)) throw ConfigError("moon_distance > base_radius");
}

PlanetConfig parse_config(const json& j) {
  check_keys(j, {"seed", "base_radius_m", "generator", "noise_domain", "simple", "layered", "biomes", "lod",
                 "trees", "clouds", "orbit"},
             "config");
  std::string generator = "layered";
  read(j, "generator", generator, "config");
  PlanetConfig c;
  if (generator == "simple") {
    c = default_simple_config();
    if (j.contains("layered")) throw ConfigError("exactly one generator block: \"layered\" given for simple");
    if (j.contains("simple")) c.generator = parse_simple(j.at("simple"));
  } else if (generator == "layered") {
    c = default_layered_config();
    if (j.contains("simple")) throw ConfigError("exactly one generator block: \"simple\" given for layered");
    if (j.contains("layered")) c.generator = parse_layered(j.at("layered"));
  } else {
    throw ConfigError("unknown generator \"" + generator + "\" (expected simple or layered)");
  }

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_integer()) throw ConfigError("config.seed must be an integer");
    c.seed.value = j.at("seed").get<std::uint64_t>();
  }
  read(j, "base_radius_m", c.base_radius, "config");
  std::string domain = "sphere";
  read(j, "noise_domain", domain, "config");
  if (domain == "sphere") c.noise_domain = NoiseDomain::sphere;
  else if (domain == "lonlat") c.noise_domain = NoiseDomain::lonlat;
  else throw ConfigError("noise_domain must be \"sphere\" or \"lonlat\"");

  if (j.contains("biomes")) {
    const json& b = j.at("biomes");
    check_keys(b, {"beach_band_fraction", "mountain_fraction", "lava_threshold", "forest_band"}, "biomes");
    read(b, "beach_band_fraction", c.biomes.beach_band_fraction, "biomes");
    read(b, "mountain_fraction", c.biomes.mountain_fraction, "biomes");
    read(b, "lava_threshold", c.biomes.lava_threshold, "biomes");
    if (b.contains("forest_band")) {
      std::array<double, 2> band{};
      read(b, "forest_band", band, "biomes");
      c.biomes.forest_low = band[0];
      c.biomes.forest_high = band[1];
    }
  }

  bool explicit_threshold = false;
  if (j.contains("lod")) {
    const json& l = j.at("lod");
    check_keys(l, {"resolution", "max_depth", "split_factor", "hysteresis"}, "lod");
    read(l, "resolution", c.resolution, "lod");
    read(l, "max_depth", c.max_depth, "lod");
    read(l, "split_factor", c.split_factor, "lod");
    read(l, "hysteresis", c.hysteresis, "lod");
  }
  if (j.contains("trees")) {
    const json& t = j.at("trees");
    check_keys(t, {"lod_threshold", "density", "embed_depth_m", "scale_min", "scale_max"}, "trees");
    explicit_threshold = t.contains("lod_threshold");
    read(t, "lod_threshold", c.trees.lod_threshold, "trees");
    if (t.contains("density")) {
      const json& d = t.at("density");
      check_keys(d, {"forest", "grassland", "beach"}, "trees.density");
      read(d, "forest", c.trees.density.forest, "trees.density");
      read(d, "grassland", c.trees.density.grassland, "trees.density");
      read(d, "beach", c.trees.density.beach, "trees.density");
    }
    read(t, "embed_depth_m", c.trees.embed_depth, "trees");
    read(t, "scale_min", c.trees.scale_min, "trees");
    read(t, "scale_max", c.trees.scale_max, "trees");
  }
  if (!explicit_threshold) c.trees.lod_threshold = std::max(0, c.max_depth - 2);

  if (j.contains("clouds")) {
    const json& k = j.at("clouds");
    check_keys(k, {"count", "altitude_m", "scale_min", "scale_max"}, "clouds");
    read(k, "count", c.clouds.count, "clouds");
    read(k, "altitude_m", c.clouds.altitude, "clouds");
    read(k, "scale_min", c.clouds.scale_min, "clouds");
    read(k, "scale_max", c.clouds.scale_max, "clouds");
  }
  if (j.contains("orbit")) {
    const json& o = j.at("orbit");
    check_keys(o, {"sun_period_s", "moon_period_s", "moon_distance_m", "moon_inclination_rad", "sun_distance_m"},
               "orbit");
    read(o, "sun_period_s", c.orbit.sun_period, "orbit");
    read(o, "moon_period_s", c.orbit.moon_period, "orbit");
    read(o, "moon_distance_m", c.orbit.moon_distance, "orbit");
    read(o, "moon_inclination_rad", c.orbit.moon_inclination, "orbit");
    read(o, "sun_distance_m", c.orbit.sun_distance, "orbit");
  }
  validate(c);
  return c;
}

PlanetConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

PlanetConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json to_json(const PlanetConfig& c) {
  json j;
  j["seed"] = c.seed.value;
  j["base_radius_m"] = c.base_radius;
  j["noise_domain"] = c.noise_domain == NoiseDomain::sphere ? "sphere" : "lonlat";
  if (const auto* s = std::get_if<SimplePlanetParams>(&c.generator)) {
    j["generator"] = "simple";
    j["simple"] = {{"fbm", fbm_json(s->fbm)}, {"base_factor_m", s->base_factor}, {"ocean_level_m", s->ocean_level}};
  } else {
    const auto& l = std::get<LayeredPlanetParams>(c.generator);
    j["generator"] = "layered";
    j["layered"] = {{"continentalness", layer_json(l.continentalness)},
                    {"erosion", layer_json(l.erosion)},
                    {"peaks_valleys", layer_json(l.peaks_valleys)},
                    {"temperature", layer_json(l.temperature)},
                    {"amplitude_m", l.amplitude},
                    {"ocean_level_m", l.ocean_level}};
  }
  j["biomes"] = {{"beach_band_fraction", c.biomes.beach_band_fraction},
                 {"mountain_fraction", c.biomes.mountain_fraction},
                 {"lava_threshold", c.biomes.lava_threshold},
                 {"forest_band", {c.biomes.forest_low, c.biomes.forest_high}}};
  j["lod"] = {{"resolution", c.resolution},
              {"max_depth", c.max_depth},
              {"split_factor", c.split_factor},
              {"hysteresis", c.hysteresis}};
  j["trees"] = {{"lod_threshold", c.trees.lod_threshold},
                {"density",
                 {{"forest", c.trees.density.forest},
                  {"grassland", c.trees.density.grassland},
                  {"beach", c.trees.density.beach}}},
                {"embed_depth_m", c.trees.embed_depth},
                {"scale_min", c.trees.scale_min},
                {"scale_max", c.trees.scale_max}};
  j["clouds"] = {{"count", c.clouds.count},
                 {"altitude_m", c.clouds.altitude},
                 {"scale_min", c.clouds.scale_min},
                 {"scale_max", c.clouds.scale_max}};
  j["orbit"] = {{"sun_period_s", c.orbit.sun_period},
                {"moon_period_s", c.orbit.moon_period},
                {"moon_distance_m", c.orbit.moon_distance},
                {"moon_inclination_rad", c.orbit.moon_inclination},
                {"sun_distance_m", c.orbit.sun_distance}};
  return j;
}

Terrain make_terrain(const PlanetConfig& c) {
  return Terrain(c.generator, c.seed, c.biomes, c.noise_domain);
}

LodParams lod_params(const PlanetConfig& c) {
  LodParams p;
  p.base_radius = c.base_radius;
  p.max_relief = make_terrain(c).max_displacement();
  p.split_factor = c.split_factor;
  p.max_depth = c.max_depth;
  p.hysteresis = c.hysteresis;
  return p;
}

}  // namespace planetgen
