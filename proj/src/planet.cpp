#include "planetgen/planet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "planetgen/errors.hpp"
#include "planetgen/hash.hpp"
#include "planetgen/noise.hpp"

namespace planetgen {
namespace {

constexpr double kPi = 3.14159265358979323846;

Vec3 random_direction(Rng& rng) {
  const double z = rng.uniform(-1.0, 1.0);
  const double phi = rng.uniform(0.0, 2.0 * kPi);
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  return normalize(Vec3{r * std::cos(phi), r * std::sin(phi), z});
}

NodeId random_node(Rng& rng, int min_depth, int max_depth) {
  NodeId n;
  n.face = static_cast<std::uint8_t>(std::min(5.0, std::floor(rng.uniform() * 6.0)));
  n.depth = static_cast<std::uint8_t>(
      min_depth + std::min<int>(max_depth - min_depth,
                                static_cast<int>(rng.uniform() * (max_depth - min_depth + 1))));
  const double cells = static_cast<double>(n.cells_per_side());
  n.x = static_cast<std::uint32_t>(std::min(cells - 1.0, std::floor(rng.uniform() * cells)));
  n.y = static_cast<std::uint32_t>(std::min(cells - 1.0, std::floor(rng.uniform() * cells)));
  return n;
}

Edge random_edge(Rng& rng) {
  return kEdges[static_cast<std::size_t>(std::min(3.0, std::floor(rng.uniform() * 4.0)))];
}

void record(CheckResult& r, bool ok, const std::string& what) {
  ++r.probes;
  if (ok) return;
  ++r.violations;
  r.passed = false;
  if (r.first_violation.empty()) r.first_violation = what;
}

std::string vec_text(const Vec3& v) {
  std::ostringstream s;
  s.precision(17);
  s << '(' << v.x << ", " << v.y << ", " << v.z << ')';
  return s.str();
}

double point_segment_distance(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return length(p - (a + ab * t));
}

std::vector<Vec3> edge_positions(const TileSurface& s, std::uint32_t res, Edge e) {
  std::vector<Vec3> out;
  for (std::size_t i : edge_vertex_indices(res, e)) out.push_back(s.positions[i]);
  std::sort(out.begin(), out.end(), [](const Vec3& a, const Vec3& b) {
    return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z);
  });
  return out;
}

// Which edge of `node` faces `other` (same depth, edge-adjacent).
std::optional<Edge> facing_edge(const NodeId& node, const NodeId& other) {
  for (Edge e : kEdges)
    if (neighbor(node, e) == other) return e;
  return std::nullopt;
}

CheckResult check_ocean_clamp(const PlanetConfig& config, const Terrain& terrain,
                              std::size_t samples, Rng& rng) {
  CheckResult r;
  r.name = "ocean_clamp";
  const double ocean = terrain.min_displacement();
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec3 dir = random_direction(rng);
    const double d = terrain.sample(dir).displacement;
    record(r, d >= ocean, "displacement " + std::to_string(d) + " below ocean at " + vec_text(dir));
  }
  const double floor_radius = config.base_radius + ocean;
  const std::size_t tiles = (samples + 99) / 100;
  for (std::size_t t = 0; t < tiles; ++t) {
    const NodeId node = random_node(rng, 0, config.max_depth);
    const TileMesh mesh = build_tile(node, 0, terrain, config.resolution, config.base_radius);
    std::size_t below = 0;
    for (std::size_t i = 0; i < mesh.vertex_count(); ++i)
      if (length(mesh.absolute_position(i)) < floor_radius) ++below;
    record(r, below == 0, std::to_string(below) + " vertices below the ocean floor in " + to_string(node));
  }
  return r;
}

CheckResult check_formula(const PlanetConfig& config, const Terrain& terrain, std::size_t samples,
                          Rng& rng) {
  CheckResult r;
  r.name = "formula_identity";
  for (std::size_t i = 0; i < samples; ++i) {
    const Vec3 dir = random_direction(rng);
    const SurfaceSample s = terrain.sample(dir);
    double expected;
    if (const auto* layered = std::get_if<LayeredPlanetParams>(&config.generator)) {
      if (!s.layers) {
        record(r, false, "layered sample without layer values");
        continue;
      }
      const LayerSample& l = *s.layers;
      const double factor = (l.continentalness + l.peaks_valleys) * (1.0 - l.erosion);
      expected = std::max(factor * layered->amplitude, layered->ocean_level);
    } else {
      const auto& simple = std::get<SimplePlanetParams>(config.generator);
      const double raw = fbm(noise_point(dir, config.noise_domain), simple.fbm, config.seed);
      expected = std::max(raw * simple.base_factor, simple.ocean_level);
    }
    record(r, s.displacement == expected,
           "displacement " + std::to_string(s.displacement) + " != recomputed " +
               std::to_string(expected) + " at " + vec_text(dir));
  }
  return r;
}

CheckResult check_seams(const PlanetConfig& config, const Terrain& terrain, std::size_t samples,
                        Rng& rng) {
  CheckResult r;
  r.name = "seam_continuity";
  const std::uint32_t res = config.resolution;
  const double R = config.base_radius;
  const std::size_t pairs = (samples + 99) / 100;
  const int deepest = std::max(1, config.max_depth);

  for (std::size_t p = 0; p < pairs; ++p) {
    const NodeId a = random_node(rng, 0, deepest);
    const Edge e = random_edge(rng);
    const NodeId b = neighbor(a, e);
    const auto back = facing_edge(b, a);
    if (!back) {
      record(r, false, "neighbor of " + to_string(a) + " does not point back");
      continue;
    }
    const auto ea = edge_positions(tile_surface(a, 0, terrain, res, R), res, e);
    const auto eb = edge_positions(tile_surface(b, 0, terrain, res, R), res, *back);
    record(r, ea == eb, "shared edge of " + to_string(a) + " and " + to_string(b) + " not bit-identical");
  }

  for (std::size_t p = 0; p < pairs; ++p) {
    // Fine tile whose neighbor across `e` lies under a different parent, so
    // that the coarse parent shares the edge.
    NodeId fine;
    Edge e;
    NodeId coarse;
    do {
      fine = random_node(rng, 1, deepest);
      e = random_edge(rng);
      coarse = neighbor(fine, e).parent();
    } while (coarse == fine.parent());
    const TileSurface fs = tile_surface(fine, edge_bit(e), terrain, res, R);
    const TileSurface cs = tile_surface(coarse, 0, terrain, res, R);
    double worst = 0.0;
    for (std::size_t i : edge_vertex_indices(res, e)) {
      const Vec3& v = fs.positions[i];
      double best = std::numeric_limits<double>::infinity();
      for (Edge ce : kEdges) {
        const auto idx = edge_vertex_indices(res, ce);
        for (std::size_t k = 0; k + 1 < idx.size(); ++k)
          best = std::min(best, point_segment_distance(v, cs.positions[idx[k]], cs.positions[idx[k + 1]]));
      }
      worst = std::max(worst, best / length(v));
    }
    record(r, worst <= 1e-9,
           "stitched edge of " + to_string(fine) + " off the polyline of " + to_string(coarse) +
               " by " + std::to_string(worst) + " relative");
  }
  return r;
}

CheckResult check_tree(const PlanetConfig& config, std::size_t samples, Rng& rng) {
  CheckResult r;
  r.name = "restricted_tree";
  const LodParams params = lod_params(config);
  const std::size_t cameras = (samples + 999) / 1000;
  for (std::size_t c = 0; c < cameras; ++c) {
    const Vec3 dir = random_direction(rng);
    // Altitudes from a few meters to several radii, log-uniform.
    const double altitude = std::exp(rng.uniform(std::log(2.0), std::log(10.0 * params.base_radius)));
    const CameraState cam{dir * (params.base_radius + params.max_relief + altitude), -dir};
    QuadTree tree;
    update_tree(tree, cam, params);
    const bool restricted = tree.is_restricted();
    const bool fixed = update_tree(tree, cam, params).empty();
    record(r, restricted && fixed,
           std::string(restricted ? "" : "unrestricted tree") + (fixed ? "" : " no fixed point") +
               " for camera at " + vec_text(cam.position));
  }
  return r;
}

}  // namespace

std::vector<NodeId> uniform_nodes(int depth) {
  if (depth < 0 || depth > kMaxSupportedDepth) throw ConfigError("depth out of range");
  if (depth > 12) throw ConfigError("uniform depth above 12 is not supported");
  const std::uint32_t cells = 1u << depth;
  std::vector<NodeId> out;
  out.reserve(6u * cells * cells);
  for (std::uint8_t f = 0; f < kFaceCount; ++f)
    for (std::uint32_t x = 0; x < cells; ++x)
      for (std::uint32_t y = 0; y < cells; ++y)
        out.push_back(NodeId{f, static_cast<std::uint8_t>(depth), x, y});
  std::sort(out.begin(), out.end());
  return out;
}

std::string GenerateSummary::text() const {
  std::ostringstream s;
  s << "tiles: " << tiles << "\n"
    << "vertices: " << vertices << "\n"
    << "triangles: " << triangles << "\n"
    << "biomes:";
  for (int b = 0; b < kBiomeCount; ++b)
    s << ' ' << biome_name(static_cast<Biome>(b)) << '=' << biome_histogram[b];
  s << "\n";
  return s.str();
}

GeneratedPlanet generate_planet(const PlanetConfig& config, int depth) {
  validate(config);
  const Terrain terrain = make_terrain(config);
  GeneratedPlanet out;
  for (const NodeId& node : uniform_nodes(depth)) {
    TileMesh tile = build_tile(node, 0, terrain, config.resolution, config.base_radius);
    out.summary.vertices += tile.vertex_count();
    out.summary.triangles += tile.indices.size() / 3;
    for (std::uint8_t b : tile.biomes) ++out.summary.biome_histogram[b];
    out.tiles.push_back(std::move(tile));
  }
  out.summary.tiles = out.tiles.size();
  return out;
}

std::vector<CheckResult> verify_planet(const PlanetConfig& config, std::size_t samples,
                                       std::uint64_t probe_seed) {
  validate(config);
  if (samples == 0) throw ConfigError("samples ≥ 1");
  const Terrain terrain = make_terrain(config);
  Rng rng(hash_combine(probe_seed, config.seed.value));
  std::vector<CheckResult> out;
  out.push_back(check_ocean_clamp(config, terrain, samples, rng));
  out.push_back(check_formula(config, terrain, samples, rng));
  out.push_back(check_seams(config, terrain, samples, rng));
  out.push_back(check_tree(config, samples, rng));
  return out;
}

}  // namespace planetgen
