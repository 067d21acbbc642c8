#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "planetgen/errors.hpp"
#include "planetgen/quadsphere.hpp"
#include "random.hpp"

using namespace planetgen;

namespace {

bool near(const Vec3& a, const Vec3& b, double tol) { return length(a - b) <= tol; }

// Cube-space coordinate range of a node along its face axes.
struct CellRange {
  double s0, s1, t0, t1;
};

CellRange cell_range(const NodeId& n) {
  const double c = n.cells_per_side();
  return {2.0 * n.x / c - 1.0, 2.0 * (n.x + 1) / c - 1.0, 2.0 * n.y / c - 1.0, 2.0 * (n.y + 1) / c - 1.0};
}

// 101 cube points along one edge of a node.
std::vector<Vec3> edge_cube_points(const NodeId& n, Edge e) {
  const CellRange r = cell_range(n);
  std::vector<Vec3> out;
  for (int k = 0; k <= 100; ++k) {
    const double a = k / 100.0;
    double s = 0, t = 0;
    switch (e) {
      case Edge::north: s = r.s0 + a * (r.s1 - r.s0); t = r.t1; break;
      case Edge::south: s = r.s0 + a * (r.s1 - r.s0); t = r.t0; break;
      case Edge::east: s = r.s1; t = r.t0 + a * (r.t1 - r.t0); break;
      case Edge::west: s = r.s0; t = r.t0 + a * (r.t1 - r.t0); break;
    }
    out.push_back(cube_point(n.face, s, t));
  }
  return out;
}

// True when cube point c lies in the closed cell of `n` on n's face plane.
bool on_cell(const Vec3& c, const NodeId& n) {
  const FaceAxes& f = face_axes(n.face);
  if (std::abs(dot(c, f.normal) - 1.0) > 1e-12) return false;
  const CellRange r = cell_range(n);
  const double s = dot(c, f.u_axis), t = dot(c, f.v_axis);
  return s >= r.s0 - 1e-12 && s <= r.s1 + 1e-12 && t >= r.t0 - 1e-12 && t <= r.t1 + 1e-12;
}

}  // namespace

TEST_SUITE("quadsphere") {
  TEST_CASE("face axes are right-handed and orthonormal") {
    for (int f = 0; f < kFaceCount; ++f) {
      const FaceAxes& a = face_axes(f);
      CHECK(cross(a.u_axis, a.v_axis) == a.normal);
      CHECK(dot(a.u_axis, a.v_axis) == 0.0);
    }
    CHECK(face_axes(0).normal == Vec3{1, 0, 0});
    CHECK(face_axes(1).normal == Vec3{-1, 0, 0});
    CHECK(face_axes(2).normal == Vec3{0, 1, 0});
    CHECK(face_axes(3).normal == Vec3{0, -1, 0});
    CHECK(face_axes(4).normal == Vec3{0, 0, 1});
    CHECK(face_axes(5).normal == Vec3{0, 0, -1});
  }

  TEST_CASE("face_uv_to_sphere examples") {
    CHECK(face_uv_to_sphere(0, 0.5, 0.5) == Vec3{1, 0, 0});
    const double r3 = 1.0 / std::sqrt(3.0);
    CHECK(near(face_uv_to_sphere(0, 0.0, 0.0), Vec3{r3, -r3, -r3}, 1e-15));
    CHECK_THROWS_AS(face_uv_to_sphere(0, -0.1, 0.5), DomainError);
    CHECK_THROWS_AS(face_uv_to_sphere(0, 0.5, 1.1), DomainError);
    CHECK_THROWS_AS(face_uv_to_sphere(6, 0.5, 0.5), DomainError);
  }

  TEST_CASE("sphere_to_face_uv examples") {
    const FaceUv y = sphere_to_face_uv({0, 1, 0});
    CHECK(y.face == 2);
    CHECK(y.u == 0.5);
    CHECK(y.v == 0.5);
    const FaceUv x = sphere_to_face_uv(normalize(Vec3{1 + 1e-10, 0, 0}));
    CHECK(x.face == 0);
    CHECK(x.u == 0.5);
    CHECK(x.v == 0.5);
    CHECK(sphere_to_face_uv(normalize(Vec3{1, 1, 0})).face == 0);
    CHECK(sphere_to_face_uv(normalize(Vec3{0, -1, -1})).face == 3);
    CHECK_THROWS_AS(sphere_to_face_uv({0, 0, 0}), DomainError);
    CHECK_THROWS_AS(sphere_to_face_uv({2, 0, 0}), DomainError);
  }

  TEST_CASE("uv round trip") {
    Rng rng(1);
    for (int i = 0; i < 10000; ++i) {
      const int f = testing_support::random_int(rng, 0, 5);
      const double u = rng.uniform(), v = rng.uniform();
      const FaceUv back = sphere_to_face_uv(face_uv_to_sphere(f, u, v));
      REQUIRE(back.face == f);
      REQUIRE(std::abs(back.u - u) < 1e-12);
      REQUIRE(std::abs(back.v - v) < 1e-12);
    }
  }

  TEST_CASE("node addressing") {
    const NodeId n{3, 4, 5, 9};
    for (const NodeId& c : n.children()) CHECK(c.parent() == n);
    CHECK(n.child(1, 0) == NodeId{3, 5, 11, 18});
    CHECK(NodeId::from_key(n.key()) == n);
    CHECK(to_string(n) == "f3/d4/5/9");
    CHECK(parse_node_id("f3/d4/5/9") == n);
    CHECK_THROWS_AS(parse_node_id("f3/d4/5"), DomainError);
    CHECK_THROWS_AS(parse_node_id("f6/d0/0/0"), DomainError);
    CHECK_THROWS_AS(parse_node_id("f0/d1/2/0"), DomainError);
    CHECK_THROWS_AS(parse_node_id("f0/d1/0/0x"), DomainError);
    CHECK_FALSE(is_valid(NodeId{0, 2, 4, 0}));
    CHECK_THROWS_AS(NodeId{}.parent(), DomainError);
    CHECK(angular_size(NodeId{0, 3, 0, 0}) == doctest::Approx(std::numbers::pi / 16));
  }

  TEST_CASE("interior neighbors") {
    CHECK(neighbor(NodeId{0, 1, 0, 0}, Edge::east) == NodeId{0, 1, 1, 0});
    CHECK(neighbor(NodeId{0, 1, 0, 0}, Edge::north) == NodeId{0, 1, 0, 1});
    const NodeId n{2, 3, 4, 4};
    CHECK(neighbor(neighbor(n, Edge::east), Edge::west) == n);
    CHECK(neighbor(neighbor(n, Edge::north), Edge::south) == n);
  }

  TEST_CASE("neighbor relation is symmetric and geometric at depth <= 3") {
    for (int d = 0; d <= 3; ++d) {
      const std::uint32_t cells = 1u << d;
      for (std::uint8_t f = 0; f < kFaceCount; ++f)
        for (std::uint32_t x = 0; x < cells; ++x)
          for (std::uint32_t y = 0; y < cells; ++y) {
            const NodeId n{f, static_cast<std::uint8_t>(d), x, y};
            std::set<NodeId> seen;
            for (Edge e : kEdges) {
              const NodeId m = neighbor(n, e);
              REQUIRE(is_valid(m));
              REQUIRE(m.depth == n.depth);
              REQUIRE(m != n);
              seen.insert(m);
              int back = 0;
              for (Edge e2 : kEdges) back += neighbor(m, e2) == n;
              REQUIRE(back == 1);
              // Every point of the shared edge lies on the neighbor's cell.
              for (const Vec3& c : edge_cube_points(n, e)) REQUIRE(on_cell(c, m));
            }
            REQUIRE(seen.size() == 4);
          }
    }
  }

  TEST_CASE("root neighbors across all twelve cube edges") {
    std::set<std::pair<int, int>> pairs;
    for (std::uint8_t f = 0; f < kFaceCount; ++f)
      for (Edge e : kEdges) {
        const NodeId m = neighbor(NodeId{f, 0, 0, 0}, e);
        CHECK(m.face != f);
        CHECK(dot(face_axes(f).normal, face_axes(m.face).normal) == 0.0);
        pairs.insert({std::min<int>(f, m.face), std::max<int>(f, m.face)});
      }
    CHECK(pairs.size() == 12);
  }

  TEST_CASE("lattice directions agree bit for bit on shared face edges") {
    const std::int64_t n = 64;
    for (std::uint8_t f = 0; f < kFaceCount; ++f)
      for (Edge e : kEdges) {
        const NodeId g = neighbor(NodeId{f, 0, 0, 0}, e);
        for (std::int64_t k = 0; k <= n; ++k) {
          std::int64_t ku = 0, kv = 0;
          switch (e) {
            case Edge::north: ku = k; kv = n; break;
            case Edge::south: ku = k; kv = 0; break;
            case Edge::east: ku = n; kv = k; break;
            case Edge::west: ku = 0; kv = k; break;
          }
          const Vec3 p = lattice_direction(f, ku, kv, n);
          const Vec3 c = cube_point(f, static_cast<double>(2 * ku - n) / n, static_cast<double>(2 * kv - n) / n);
          // Same cube point expressed in g's lattice.
          const FaceAxes& ga = face_axes(g.face);
          const auto gu = static_cast<std::int64_t>(std::llround((dot(c, ga.u_axis) + 1.0) * n / 2.0));
          const auto gv = static_cast<std::int64_t>(std::llround((dot(c, ga.v_axis) + 1.0) * n / 2.0));
          REQUIRE(lattice_direction(g.face, gu, gv, n) == p);
        }
      }
  }

  TEST_CASE("solid angles partition the sphere") {
    for (int d = 0; d <= 4; ++d) {
      double total = 0.0;
      const std::uint32_t cells = 1u << d;
      for (std::uint8_t f = 0; f < kFaceCount; ++f)
        for (std::uint32_t x = 0; x < cells; ++x)
          for (std::uint32_t y = 0; y < cells; ++y) total += solid_angle(NodeId{f, static_cast<std::uint8_t>(d), x, y});
      CHECK(total == doctest::Approx(4.0 * std::numbers::pi).epsilon(1e-12));
    }
    const NodeId n{4, 2, 1, 3};
    double kids = 0.0;
    for (const NodeId& c : n.children()) kids += solid_angle(c);
    CHECK(kids == doctest::Approx(solid_angle(n)).epsilon(1e-13));
  }

  TEST_CASE("center direction is inside the node") {
    Rng rng(4);
    for (int i = 0; i < 1000; ++i) {
      const NodeId n = testing_support::random_node(rng, 0, 20);
      const FaceUv uv = sphere_to_face_uv(center_direction(n));
      REQUIRE(uv.face == n.face);
      const double c = n.cells_per_side();
      REQUIRE(uv.u * c >= n.x);
      REQUIRE(uv.u * c <= n.x + 1);
      REQUIRE(uv.v * c >= n.y);
      REQUIRE(uv.v * c <= n.y + 1);
    }
  }
}
