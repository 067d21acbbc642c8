#include "planetgen/mesh.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "planetgen/errors.hpp"

namespace planetgen {
namespace {

Vec3 surface_point(const Vec3& dir, const SurfaceSampler& sampler, double base_radius) {
  return dir * (base_radius + sampler.sample(dir).displacement);
}

Vec3 tangent_axis(const Vec3& axis, const Vec3& dir) { return normalize(axis - dir * dot(axis, dir)); }

Vec3f to_float(const Vec3& v) {
  return {static_cast<float>(v.x), static_cast<float>(v.y), static_cast<float>(v.z)};
}

Vec3 to_double(const Vec3f& v) { return {v.x, v.y, v.z}; }

double ulp(double x) { return std::nextafter(x, HUGE_VAL) - x; }

// Rounding (of the unit direction, then of the float offset) may leave a
// vertex that sits exactly on the ocean floor slightly below it; push the
// offset outward with a doubling step until the reconstruction is back on or
// above the floor. Stitched vertices are exempt: they lie on a chord, under
// the surface.
Vec3f encode_relative(const Vec3& absolute, const Vec3& center, const Vec3& dir, double floor_radius,
                      bool on_surface) {
  Vec3f rel = to_float(absolute - center);
  if (!on_surface) return rel;
  double step = ulp(length(center));
  for (int i = 0; i < 128 && length(center + to_double(rel)) < floor_radius; ++i) {
    rel = to_float(to_double(rel) + dir * step);
    step *= 2.0;
  }
  return rel;
}

void append_number(std::string& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

void append_number(std::string& out, float v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

}  // namespace

Vec3 TileMesh::absolute_position(std::size_t i) const { return center + to_double(positions[i]); }

std::vector<std::size_t> edge_vertex_indices(std::uint32_t resolution, Edge edge) {
  const std::size_t side = resolution + 1;
  std::vector<std::size_t> out(side);
  for (std::size_t k = 0; k < side; ++k) {
    switch (edge) {
      case Edge::north: out[k] = resolution * side + k; break;
      case Edge::east: out[k] = k * side + resolution; break;
      case Edge::south: out[k] = k; break;
      case Edge::west: out[k] = k * side; break;
    }
  }
  return out;
}

TileSurface tile_surface(const NodeId& node, StitchMask mask, const SurfaceSampler& sampler,
                         std::uint32_t resolution, double base_radius) {
  require_valid(node);
  if (resolution < 2) throw ConfigError("resolution ≥ 2");
  if (mask != 0 && resolution % 2 != 0) throw ConfigError("stitching requires an even resolution");
  if (mask > 0xf) throw ConfigError("stitch mask has bits outside N/E/S/W");

  const std::int64_t res = resolution;
  const std::int64_t n = res << node.depth;
  const std::size_t side = resolution + 1;
  TileSurface s;
  s.directions.reserve(side * side);
  s.positions.reserve(side * side);
  s.samples.reserve(side * side);
  for (std::int64_t j = 0; j <= res; ++j) {
    for (std::int64_t i = 0; i <= res; ++i) {
      const Vec3 dir = lattice_direction(node.face, node.x * res + i, node.y * res + j, n);
      SurfaceSample sample = sampler.sample(dir);
      s.positions.push_back(dir * (base_radius + sample.displacement));
      s.directions.push_back(dir);
      s.samples.push_back(std::move(sample));
    }
  }

  for (Edge e : kEdges) {
    if (!(mask & edge_bit(e))) continue;
    const auto edge = edge_vertex_indices(resolution, e);
    for (std::size_t k = 1; k + 1 < edge.size(); k += 2) {
      const Vec3& a = s.positions[edge[k - 1]];
      const Vec3& b = s.positions[edge[k + 1]];
      s.positions[edge[k]] = (a + b) * 0.5;
    }
  }
  return s;
}

NormalResult compute_normals(std::span<const Vec3> directions, int face, const SurfaceSampler& sampler,
                             double base_radius, double step) {
  if (!(step > 0.0)) throw DomainError("normal step must be positive");
  const FaceAxes& axes = face_axes(face);
  NormalResult out;
  out.normals.reserve(directions.size());
  for (const Vec3& dir : directions) {
    const Vec3 eu = tangent_axis(axes.u_axis, dir);
    const Vec3 ev = tangent_axis(axes.v_axis, dir);
    const Vec3 tu = surface_point(normalize(dir + eu * step), sampler, base_radius) -
                    surface_point(normalize(dir - eu * step), sampler, base_radius);
    const Vec3 tv = surface_point(normalize(dir + ev * step), sampler, base_radius) -
                    surface_point(normalize(dir - ev * step), sampler, base_radius);
    const Vec3 c = cross(tu, tv);
    const double len = length(c);
    if (!(len > 0.0) || !std::isfinite(len) || !is_finite(eu) || !is_finite(ev)) {
      ++out.fallbacks;
      out.normals.push_back(to_float(dir));
      continue;
    }
    out.normals.push_back(to_float(c / len));
  }
  return out;
}

double default_normal_step(const NodeId& node, std::uint32_t resolution) {
  return angular_size(node) / static_cast<double>(resolution) / 2.0;
}

TileMesh build_tile(const NodeId& node, StitchMask mask, const SurfaceSampler& sampler,
                    std::uint32_t resolution, double base_radius) {
  if (!(base_radius > 0.0)) throw ConfigError("base_radius > 0");
  const TileSurface surface = tile_surface(node, mask, sampler, resolution, base_radius);

  TileMesh tile;
  tile.node = node;
  tile.resolution = resolution;
  const Vec3 center_dir = center_direction(node);
  tile.center = surface_point(center_dir, sampler, base_radius);

  const double floor_radius = base_radius + sampler.min_displacement();
  // The grid vertex at the center of an even-resolution tile has a zero
  // offset, so the center itself must not sit below the floor.
  for (double step = ulp(floor_radius); length(tile.center) < floor_radius; step *= 2.0)
    tile.center = tile.center + center_dir * step;
  const std::size_t count = surface.positions.size();
  tile.positions.reserve(count);
  tile.biomes.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const Vec3& dir = surface.directions[i];
    const bool on_surface =
        surface.positions[i] == dir * (base_radius + surface.samples[i].displacement);
    tile.positions.push_back(
        encode_relative(surface.positions[i], tile.center, dir, floor_radius, on_surface));
    tile.biomes.push_back(static_cast<std::uint8_t>(surface.samples[i].biome));
  }
  tile.normals = compute_normals(surface.directions, node.face, sampler, base_radius,
                                 default_normal_step(node, resolution))
                     .normals;

  const std::uint32_t side = resolution + 1;
  tile.indices.reserve(6u * resolution * resolution);
  for (std::uint32_t j = 0; j < resolution; ++j) {
    for (std::uint32_t i = 0; i < resolution; ++i) {
      const std::uint32_t v00 = j * side + i;
      const std::uint32_t v10 = v00 + 1;
      const std::uint32_t v01 = v00 + side;
      const std::uint32_t v11 = v01 + 1;
      tile.indices.insert(tile.indices.end(), {v00, v10, v11, v00, v11, v01});
    }
  }
  return tile;
}

std::string to_obj(std::span<const TileMesh> tiles) {
  std::vector<const TileMesh*> order;
  order.reserve(tiles.size());
  for (const TileMesh& t : tiles) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(),
                   [](const TileMesh* a, const TileMesh* b) { return a->node < b->node; });

  std::string out = "# planetgen tile export\n";
  std::size_t base = 1;
  for (const TileMesh* t : order) {
    const NodeId& n = t->node;
    out += "g f" + std::to_string(n.face) + "_d" + std::to_string(n.depth) + "_x" +
           std::to_string(n.x) + "_y" + std::to_string(n.y) + "\n";
    for (std::size_t i = 0; i < t->vertex_count(); ++i) {
      const Vec3 p = t->absolute_position(i);
      out += "v ";
      append_number(out, p.x);
      out += ' ';
      append_number(out, p.y);
      out += ' ';
      append_number(out, p.z);
      out += '\n';
    }
    for (const Vec3f& nv : t->normals) {
      out += "vn ";
      append_number(out, nv.x);
      out += ' ';
      append_number(out, nv.y);
      out += ' ';
      append_number(out, nv.z);
      out += '\n';
    }
    for (std::size_t k = 0; k + 2 < t->indices.size(); k += 3) {
      out += 'f';
      for (int c = 0; c < 3; ++c) {
        const std::string idx = std::to_string(base + t->indices[k + c]);
        out += ' ' + idx + "//" + idx;
      }
      out += '\n';
    }
    base += t->vertex_count();
  }
  return out;
}

void export_obj(std::span<const TileMesh> tiles, const std::filesystem::path& path) {
  if (tiles.empty()) throw ConfigError("export_obj: no tiles to export");
  const std::string text = to_obj(tiles);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + path.string() + " for writing");
  file.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!file) throw IoError("failed writing " + path.string());
}

}  // namespace planetgen
