#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fields.hpp"
#include "oracles.hpp"
#include "planetgen/config.hpp"
#include "planetgen/errors.hpp"
#include "planetgen/mesh.hpp"
#include "random.hpp"

using namespace planetgen;
namespace fs = std::filesystem;

namespace {

Vec3 to_double(const Vec3f& v) { return {v.x, v.y, v.z}; }

double angle_deg(const Vec3& a, const Vec3& b) {
  return std::acos(std::clamp(dot(normalize(a), normalize(b)), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

std::vector<Vec3> sorted_edge(const TileSurface& s, std::uint32_t res, Edge e) {
  std::vector<Vec3> out;
  for (std::size_t i : edge_vertex_indices(res, e)) out.push_back(s.positions[i]);
  std::sort(out.begin(), out.end(),
            [](const Vec3& a, const Vec3& b) { return std::tie(a.x, a.y, a.z) < std::tie(b.x, b.y, b.z); });
  return out;
}

std::optional<Edge> edge_towards(const NodeId& n, const NodeId& m) {
  for (Edge e : kEdges)
    if (neighbor(n, e) == m) return e;
  return std::nullopt;
}

fs::path temp_path(const std::string& name) { return fs::temp_directory_path() / ("planetgen_test_" + name); }

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("grid arithmetic") {
    const testing_support::ConstantField flat(100.0);
    const TileMesh t = build_tile(NodeId{0, 2, 1, 3}, 0, flat, 16, 1e6);
    CHECK(t.vertex_count() == 289);
    CHECK(t.normals.size() == 289);
    CHECK(t.biomes.size() == 289);
    CHECK(t.indices.size() / 3 == 512);
    CHECK(*std::max_element(t.indices.begin(), t.indices.end()) < 289u);
    const TileMesh stitched = build_tile(NodeId{0, 2, 1, 3}, 0xf, flat, 16, 1e6);
    CHECK(stitched.indices.size() / 3 == 512);
  }

  TEST_CASE("edge vertex indices") {
    CHECK(edge_vertex_indices(2, Edge::south) == std::vector<std::size_t>{0, 1, 2});
    CHECK(edge_vertex_indices(2, Edge::north) == std::vector<std::size_t>{6, 7, 8});
    CHECK(edge_vertex_indices(2, Edge::west) == std::vector<std::size_t>{0, 3, 6});
    CHECK(edge_vertex_indices(2, Edge::east) == std::vector<std::size_t>{2, 5, 8});
  }

  TEST_CASE("triangles face outward") {
    const Terrain terrain = make_terrain(default_layered_config());
    const TileMesh t = build_tile(NodeId{5, 3, 2, 6}, 0, terrain, 8, 1e6);
    for (std::size_t k = 0; k < t.indices.size(); k += 3) {
      const Vec3 a = t.absolute_position(t.indices[k]);
      const Vec3 b = t.absolute_position(t.indices[k + 1]);
      const Vec3 c = t.absolute_position(t.indices[k + 2]);
      REQUIRE(dot(cross(b - a, c - a), a) > 0.0);
    }
  }

  TEST_CASE("configuration errors") {
    const testing_support::ConstantField flat(0.0);
    CHECK_THROWS_AS(build_tile(NodeId{}, 0, flat, 1, 1e6), ConfigError);
    CHECK_THROWS_AS(build_tile(NodeId{}, 1, flat, 5, 1e6), ConfigError);
    CHECK_NOTHROW(build_tile(NodeId{}, 0, flat, 5, 1e6));
    CHECK_THROWS_AS(build_tile(NodeId{}, 0x10, flat, 4, 1e6), ConfigError);
    CHECK_THROWS_AS(build_tile(NodeId{0, 1, 2, 0}, 0, flat, 4, 1e6), DomainError);
  }

  TEST_CASE("constant field has radial normals") {
    const testing_support::ConstantField flat(250.0);
    Rng rng(1);
    for (int i = 0; i < 20; ++i) {
      const TileMesh t = build_tile(testing_support::random_node(rng, 0, 12), 0, flat, 16, 1e6);
      for (std::size_t v = 0; v < t.vertex_count(); ++v) {
        const Vec3 radial = normalize(t.absolute_position(v));
        REQUIRE(length(to_double(t.normals[v]) - radial) < 1e-6);
      }
    }
  }

  TEST_CASE("ramp normals tilt against the gradient and match a finer difference") {
    const Vec3 axis = normalize(Vec3{0.0, 1.0, 0.2});
    const testing_support::RampField ramp(500.0, 20000.0, axis);
    const NodeId node{0, 6, 32, 32};  // small patch around +X
    const TileSurface s = tile_surface(node, 0, ramp, 8, 1e6);
    const double step = default_normal_step(node, 8);
    const auto coarse = compute_normals(s.directions, node.face, ramp, 1e6, step);
    const auto fine = compute_normals(s.directions, node.face, ramp, 1e6, step / 10.0);
    CHECK(coarse.fallbacks == 0);
    for (std::size_t v = 0; v < s.directions.size(); ++v) {
      const Vec3 n = to_double(coarse.normals[v]);
      const Vec3 dir = s.directions[v];
      const Vec3 grad = axis - dir * dot(axis, dir);  // tangential gradient direction
      REQUIRE(dot(n, grad) < 0.0);
      REQUIRE(length(n - to_double(fine.normals[v])) < 1e-4);
    }
  }

  TEST_CASE("terrain normals agree with a 10x finer difference on smooth ground") {
    const PlanetConfig c = default_simple_config();
    const Terrain terrain = make_terrain(c);
    const double ocean = terrain.min_displacement();
    Rng rng(2);
    double worst = 0.0;
    std::size_t checked = 0;
    for (int i = 0; i < 30; ++i) {
      const NodeId node = testing_support::random_node(rng, 4, 12);
      const TileSurface s = tile_surface(node, 0, terrain, 16, c.base_radius);
      const double step = default_normal_step(node, 16);
      const auto a = compute_normals(s.directions, node.face, terrain, c.base_radius, step);
      const auto b = compute_normals(s.directions, node.face, terrain, c.base_radius, step / 10.0);
      for (std::size_t v = 0; v < s.directions.size(); ++v) {
        // The ocean clamp is a kink; skip stencils that touch it.
        const Vec3 dir = s.directions[v];
        const FaceAxes& ax = face_axes(node.face);
        bool clamped = s.samples[v].displacement == ocean;
        for (const Vec3& axis : {ax.u_axis, ax.v_axis})
          for (double sign : {-1.0, 1.0}) {
            const Vec3 t = normalize(axis - dir * dot(axis, dir));
            clamped = clamped || terrain.sample(normalize(dir + t * (sign * step))).displacement == ocean;
          }
        if (clamped) continue;
        worst = std::max(worst, angle_deg(to_double(a.normals[v]), to_double(b.normals[v])));
        ++checked;
      }
    }
    CHECK(checked > 1000);
    CHECK(worst < 0.5);
  }

  TEST_CASE("normals are unit length on random tiles") {
    const Terrain terrain = make_terrain(default_layered_config());
    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
      const TileMesh t = build_tile(testing_support::random_node(rng, 0, 14), 0, terrain, 8, 1e6);
      for (const Vec3f& n : t.normals) REQUIRE(std::abs(length(to_double(n)) - 1.0) < 1e-6);
    }
  }

  TEST_CASE("same-depth seams are bit-identical, including cube edges") {
    const PlanetConfig c = default_layered_config();
    const Terrain terrain = make_terrain(c);
    for (int d = 0; d <= 2; ++d) {
      const std::uint32_t cells = 1u << d;
      for (std::uint8_t f = 0; f < 6; ++f)
        for (std::uint32_t x = 0; x < cells; ++x)
          for (std::uint32_t y = 0; y < cells; ++y) {
            const NodeId n{f, static_cast<std::uint8_t>(d), x, y};
            const TileSurface sn = tile_surface(n, 0, terrain, 8, c.base_radius);
            for (Edge e : kEdges) {
              const NodeId m = neighbor(n, e);
              const TileSurface sm = tile_surface(m, 0, terrain, 8, c.base_radius);
              REQUIRE(sorted_edge(sn, 8, e) == sorted_edge(sm, 8, *edge_towards(m, n)));
            }
          }
    }
  }

  TEST_CASE("stitched east edge at resolution 4 lies on the coarse polyline") {
    const Terrain terrain = make_terrain(default_layered_config());
    const NodeId fine{0, 3, 3, 5};  // east neighbor sits under a different parent
    const NodeId coarse = neighbor(fine, Edge::east).parent();
    REQUIRE(coarse != fine.parent());
    const TileSurface fs = tile_surface(fine, edge_bit(Edge::east), terrain, 4, 1e6);
    const TileSurface cs = tile_surface(coarse, 0, terrain, 4, 1e6);
    const auto fine_edge = edge_vertex_indices(4, Edge::east);
    const auto coarse_edge = edge_vertex_indices(4, *edge_towards(neighbor(fine, Edge::east), fine));
    REQUIRE(fine_edge.size() == 5);
    for (std::size_t i : fine_edge) {
      double best = 1e300;
      for (std::size_t k = 0; k + 1 < coarse_edge.size(); ++k)
        best = std::min(best, oracle::point_segment_distance(fs.positions[i], cs.positions[coarse_edge[k]],
                                                             cs.positions[coarse_edge[k + 1]]));
      REQUIRE(best / length(fs.positions[i]) < 1e-9);
    }
    // Without the stitch the odd vertices sit off the coarse chords.
    const TileSurface raw = tile_surface(fine, 0, terrain, 4, 1e6);
    double off = 0.0;
    for (std::size_t i : fine_edge) {
      double best = 1e300;
      for (std::size_t k = 0; k + 1 < coarse_edge.size(); ++k)
        best = std::min(best, oracle::point_segment_distance(raw.positions[i], cs.positions[coarse_edge[k]],
                                                             cs.positions[coarse_edge[k + 1]]));
      off = std::max(off, best / length(raw.positions[i]));
    }
    CHECK(off > 1e-9);
  }

  TEST_CASE("relative-to-center reconstruction") {
    const testing_support::ConstantField flat(1000.0);
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
      const NodeId n = testing_support::random_node(rng, 11, 20);
      const TileSurface s = tile_surface(n, 0, flat, 16, 1e7);
      const TileMesh t = build_tile(n, 0, flat, 16, 1e7);
      for (std::size_t v = 0; v < t.vertex_count(); ++v)
        REQUIRE(length(t.absolute_position(v) - s.positions[v]) < 1e-3);
    }
  }

  TEST_CASE("unstitched tiles respect the ocean floor") {
    for (const PlanetConfig& c : {default_simple_config(), default_layered_config()}) {
      const Terrain terrain = make_terrain(c);
      const double floor_radius = c.base_radius + terrain.min_displacement();
      Rng rng(5);
      for (int i = 0; i < 200; ++i) {
        const TileMesh t = build_tile(testing_support::random_node(rng, 0, 14), 0, terrain, 16, c.base_radius);
        for (std::size_t v = 0; v < t.vertex_count(); ++v) REQUIRE(length(t.absolute_position(v)) >= floor_radius);
      }
    }
  }

  TEST_CASE("OBJ export") {
    const testing_support::ConstantField flat(0.0);
    const TileMesh t = build_tile(NodeId{4, 1, 1, 0}, 0, flat, 2, 1e6);
    const std::string obj = to_obj(std::span<const TileMesh>(&t, 1));
    std::istringstream in(obj);
    std::string line;
    int v = 0, vn = 0, f = 0, g = 0;
    while (std::getline(in, line)) {
      v += line.rfind("v ", 0) == 0;
      vn += line.rfind("vn ", 0) == 0;
      f += line.rfind("f ", 0) == 0;
      if (line.rfind("g ", 0) == 0) {
        ++g;
        CHECK(line == "g f4_d1_x1_y0");
      }
    }
    CHECK(v == 9);
    CHECK(vn == 9);
    CHECK(f == 8);
    CHECK(g == 1);

    const fs::path path = temp_path("one.obj");
    export_obj(std::span<const TileMesh>(&t, 1), path);
    std::ifstream file(path);
    std::stringstream ss;
    ss << file.rdbuf();
    CHECK(ss.str() == obj);
    fs::remove(path);
  }

  TEST_CASE("OBJ groups are ordered by address") {
    const testing_support::ConstantField flat(0.0);
    std::vector<TileMesh> tiles{build_tile(NodeId{2, 0, 0, 0}, 0, flat, 2, 1e6),
                                build_tile(NodeId{0, 0, 0, 0}, 0, flat, 2, 1e6)};
    std::vector<TileMesh> reversed{tiles[1], tiles[0]};
    CHECK(to_obj(tiles) == to_obj(reversed));
    const std::string obj = to_obj(tiles);
    CHECK(obj.find("g f0_d0_x0_y0") < obj.find("g f2_d0_x0_y0"));
    CHECK(obj.find("f 10//10") != std::string::npos);  // second group indexes past the first
  }

  TEST_CASE("export errors") {
    const fs::path path = temp_path("empty.obj");
    fs::remove(path);
    CHECK_THROWS_AS(export_obj({}, path), ConfigError);
    CHECK_FALSE(fs::exists(path));
    const testing_support::ConstantField flat(0.0);
    const TileMesh t = build_tile(NodeId{}, 0, flat, 2, 1e6);
    CHECK_THROWS_AS(export_obj(std::span<const TileMesh>(&t, 1), "/nonexistent-dir/x.obj"), IoError);
  }
}
