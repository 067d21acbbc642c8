#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "planetgen/quadsphere.hpp"
#include "planetgen/quadtree.hpp"
#include "planetgen/terrain.hpp"
#include "planetgen/vec3.hpp"

namespace planetgen {

inline constexpr std::uint32_t kDefaultTileResolution = 16;

/// Displaced vertex grid of one quad node. Positions are single precision
/// relative to a double-precision center; absolute = center + relative.
/// Vertex (i, j) lives at index j·(resolution + 1) + i, i along u, j along v.
struct TileMesh {
  NodeId node;
  Vec3 center;
  std::vector<Vec3f> positions;
  std::vector<Vec3f> normals;
  std::vector<std::uint8_t> biomes;
  std::vector<std::uint32_t> indices;
  std::uint32_t resolution = 0;

  std::size_t vertex_count() const { return positions.size(); }
  Vec3 absolute_position(std::size_t i) const;

  bool operator==(const TileMesh&) const = default;
};

/// Double-precision surface of a tile before relative-to-center encoding.
struct TileSurface {
  std::vector<Vec3> directions;
  std::vector<Vec3> positions;  // absolute, stitched
  std::vector<SurfaceSample> samples;
};

/// Grid indices of the vertices on `edge`, in increasing u (north/south) or
/// v (east/west) order.
std::vector<std::size_t> edge_vertex_indices(std::uint32_t resolution, Edge edge);

/// Samples every grid vertex of `node` and applies stitching: on each edge
/// whose bit is set, odd vertices move to the midpoint of their even
/// neighbors, so the edge matches the coarser neighbor's polyline.
/// Throws ConfigError for resolution < 2 or an odd resolution with a
/// nonzero mask.
TileSurface tile_surface(const NodeId& node, StitchMask mask, const SurfaceSampler& sampler,
                         std::uint32_t resolution, double base_radius);

struct NormalResult {
  std::vector<Vec3f> normals;
  std::size_t fallbacks = 0;  // vertices that fell back to the radial direction
};

/// Central-difference normals: tangents from samples at dir ± step (radians)
/// along the face's u and v axes, crossed and normalized. Degenerate tangents
/// fall back to the radial direction.
NormalResult compute_normals(std::span<const Vec3> directions, int face, const SurfaceSampler& sampler,
                             double base_radius, double step);

/// Default normal step for a tile: half a grid cell.
double default_normal_step(const NodeId& node, std::uint32_t resolution);

TileMesh build_tile(const NodeId& node, StitchMask mask, const SurfaceSampler& sampler,
                    std::uint32_t resolution, double base_radius);

/// Groups named f{face}_d{depth}_x{x}_y{y}, ordered by node address, with
/// absolute positions and per-vertex normals. Throws ConfigError for an empty
/// list (no file is created) and IoError when the path cannot be written.
void export_obj(std::span<const TileMesh> tiles, const std::filesystem::path& path);

/// OBJ text as written by export_obj.
std::string to_obj(std::span<const TileMesh> tiles);

}  // namespace planetgen
